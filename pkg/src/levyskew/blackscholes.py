"""Black-Scholes kernel: pricing, greeks, implied-vol inversion.

Rates and dividends are zero throughout; the market pipeline absorbs
discounting into implied forwards instead.  Also houses the structural
identities that tie the smile slope and the call delta to digital prices,
which the expansion modules and their tests both route through.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

from .errors import DomainError, NoConvergence, OutOfBounds

__all__ = [
    "Quote",
    "bs_price_greeks",
    "implied_vol",
    "skew_from_digital",
    "atm_identities",
]

_SQRT_2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

VOL_MIN = 1e-6
VOL_MAX = 5.0
_MAX_ITER = 200


def _norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT_2)


def _norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT_2PI


@dataclass(frozen=True)
class Quote:
    spot: float      # S0 > 0
    strike: float    # K > 0
    maturity: float  # t > 0, in years
    vol: float       # sigma > 0
    kind: Literal["call", "put"]

    def __post_init__(self) -> None:
        for name in ("spot", "strike", "maturity", "vol"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        if self.kind not in ("call", "put"):
            raise DomainError(f"kind must be 'call' or 'put', got {self.kind!r}")


def _d1_d2(spot: float, strike: float, t: float, vol: float) -> tuple[float, float]:
    s = vol * math.sqrt(t)
    d1 = (math.log(spot / strike) + 0.5 * vol * vol * t) / s
    return d1, d1 - s


def bs_price_greeks(q: Quote) -> dict[str, float]:
    """Price, delta, and vega of a European option under zero rates."""
    d1, d2 = _d1_d2(q.spot, q.strike, q.maturity, q.vol)
    vega = q.spot * _norm_pdf(d1) * math.sqrt(q.maturity)
    if q.kind == "call":
        price = q.spot * _norm_cdf(d1) - q.strike * _norm_cdf(d2)
        delta = _norm_cdf(d1)
    else:
        price = q.strike * _norm_cdf(-d2) - q.spot * _norm_cdf(-d1)
        delta = _norm_cdf(d1) - 1.0
    return {"price": price, "delta": delta, "vega": vega}


def _price(spot: float, strike: float, t: float, vol: float, kind: str) -> float:
    return bs_price_greeks(Quote(spot, strike, t, vol, kind))["price"]


def implied_vol(
    price: float, spot: float, strike: float, t: float, kind: Literal["call", "put"]
) -> float:
    """Invert the pricing formula for sigma.

    Newton with analytic vega, seeded by the flat-at-the-money proxy
    sqrt(2 pi / t) price / spot, constrained to a maintained bracket with
    bisection whenever the Newton step leaves it or vega collapses.
    """
    if spot <= 0 or strike <= 0 or t <= 0:
        raise DomainError("spot, strike and maturity must be positive")
    if kind == "call":
        lower, upper = max(spot - strike, 0.0), spot
    elif kind == "put":
        lower, upper = max(strike - spot, 0.0), strike
    else:
        raise DomainError(f"kind must be 'call' or 'put', got {kind!r}")
    if price <= lower or price >= upper:
        raise OutOfBounds(
            f"price {price} outside the open no-arbitrage interval ({lower}, {upper})"
        )

    tol = 1e-12 * spot
    lo, hi = VOL_MIN, VOL_MAX
    f_lo = _price(spot, strike, t, lo, kind) - price
    f_hi = _price(spot, strike, t, hi, kind) - price
    if f_lo > 0:
        raise NoConvergence(f"implied vol below the supported floor {VOL_MIN}")
    if f_hi < 0:
        raise NoConvergence(f"implied vol above the supported cap {VOL_MAX}")

    sigma = min(max(math.sqrt(2.0 * math.pi / t) * price / spot, lo), hi)
    for _ in range(_MAX_ITER):
        q = Quote(spot, strike, t, sigma, kind)
        g = bs_price_greeks(q)
        diff = g["price"] - price
        if abs(diff) < tol:
            return sigma
        if diff > 0:
            hi = sigma
        else:
            lo = sigma
        vega = g["vega"]
        if vega > 1e-10 * spot:
            step = sigma - diff / vega
        else:
            step = math.nan
        sigma = step if lo < step < hi else 0.5 * (lo + hi)
    raise NoConvergence(f"no implied vol after {_MAX_ITER} iterations")


def skew_from_digital(kappa: float, t: float, digital: float, sigma_hat: float) -> float:
    """Smile slope recovered from a digital price at log-moneyness kappa.

    Differentiating the implied-vol definition in strike gives

        slope = -e^kappa (P(S_t >= S0 e^kappa) - Phi(d2)) / (sqrt(t) phi(d1))

    with d1 = (-kappa + sigma_hat^2 t / 2)/(sigma_hat sqrt(t)) and
    d2 = d1 - sigma_hat sqrt(t).  Exact Black-Scholes digitals make it
    vanish identically.
    """
    if sigma_hat <= 0 or t <= 0:
        raise DomainError("sigma_hat and t must be positive")
    s = sigma_hat * math.sqrt(t)
    d1 = (-kappa + 0.5 * sigma_hat * sigma_hat * t) / s
    d2 = d1 - s
    return -math.exp(kappa) * (digital - _norm_cdf(d2)) / (math.sqrt(t) * _norm_pdf(d1))


def atm_identities(
    sigma_hat: float,
    digital_atm: float,
    t: float,
    price_over_spot: float | None = None,
) -> dict[str, float]:
    """ATM skew and delta recovered from the digital price.

    skew: the product form in sigma_hat sqrt(t),

        sqrt(2 pi / t) (1/2 - digital - sigma_hat sqrt(t)/(2 sqrt(2 pi)))
                     * (1 + (sigma_hat sqrt(t))^2 / 8),

    truncated at the displayed orders.  delta: call price over spot plus the
    digital; when no price ratio is supplied, the flat-vol ATM price
    2 Phi(sigma_hat sqrt(t)/2) - 1 stands in.
    """
    if sigma_hat <= 0 or t <= 0:
        raise DomainError("sigma_hat and t must be positive")
    s = sigma_hat * math.sqrt(t)
    if s > 0.5:
        warnings.warn(
            f"sigma_hat*sqrt(t) = {s:.3f} > 0.5: expansion accuracy degrades",
            stacklevel=2,
        )
    skew = (
        math.sqrt(2.0 * math.pi / t)
        * (0.5 - digital_atm - s / (2.0 * _SQRT_2PI))
        * (1.0 + s * s / 8.0)
    )
    if price_over_spot is None:
        price_over_spot = 2.0 * _norm_cdf(0.5 * s) - 1.0
    return {"skew": skew, "delta": price_over_spot + digital_atm}
