"""Short-maturity ATM expansions for the jump + stochastic-volatility model.

Adds a diffusion component with state-dependent volatility, leverage
correlation rho, and vol-of-vol to the tempered stable-like jumps.  The
digital expansion changes shape relative to the pure-jump case:

    P(X_t + V_t >= 0) = 1/2 + sum_k d_k t^{k(1-Y/2)} + e t^{1/2}
                        + f t^{(3-Y)/2} + o(t^{(3-Y)/2}),

with the d_k driven by iterated applications of the jump generator to the
Gaussian-smoothed digital payoff.  Skew, delta, and ATM vol reuse the same
coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.special import gamma as _gamma

from .errors import DomainError
from .models import (
    DerivedConstants,
    StochVolSpec,
    TemperedStableParams,
    derive_constants,
)
from .series import PowerSeries
from .stable import generator_psi_coeffs

__all__ = [
    "MixedBundle",
    "build_mixed",
    "eval_mixed",
    "series_mixed",
    "leverage_contribution",
    "QUANTITIES",
]

QUANTITIES = ("digital", "atm_vol", "skew", "delta")

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)

_MAX_GENERATOR_ORDER = 3  # grid-quadrature depth limit for the d_k


@dataclass(frozen=True)
class MixedBundle:
    params: TemperedStableParams
    constants: DerivedConstants
    d_terms: tuple[tuple[float, float], ...]  # (d_k, exponent k(1-Y/2))
    e_term: tuple[float, float]               # (e, 1/2)
    f_term: tuple[float, float]               # (f, (3-Y)/2)
    sigma_bar1: float                         # ATM-vol slope coefficient
    c_skew: float                             # gamma_tilde - rho sigma' gamma / 2
    xi_const: float
    spot_vol: float
    mu0: float                                # drift of the diffusion at y0
    n_order: int

    def __post_init__(self) -> None:
        exps = [x for _, x in self.d_terms]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise DomainError("d-term exponents must strictly increase")
        if self.sigma_bar1 <= 0 or self.xi_const <= 0:
            raise DomainError("sigma_bar1 and xi must be positive")


def _truncation_order(y: float) -> int:
    # largest k with k(1 - Y/2) <= (3-Y)/2, capped at the generator depth
    n = int(math.floor((3.0 - y) / (2.0 - y) + 1e-12))
    return min(max(n, 1), _MAX_GENERATOR_ORDER)


def leverage_contribution(sv: StochVolSpec) -> float:
    """Leading-order skew shift from nonzero leverage correlation.

    rho sigma'(y0) gamma(y0) / (2 sigma(y0)): what separates the small-t
    skew limit of a correlated model from its rho = 0 twin.
    """
    sigma0 = sv.sigma0
    if sigma0 <= 0:
        raise DomainError("spot volatility must be positive")
    return sv.rho * sv.sigma_prime_fn(sv.y0) * sv.gamma_fn(sv.y0) / (2.0 * sigma0)


def build_mixed(params: TemperedStableParams, sv: StochVolSpec) -> MixedBundle:
    """Assemble every expansion coefficient for the mixed model.

    All coefficients are deterministic here: e, f, sigma_bar1, and c are
    closed forms in the model constants; the d_k come from the generator
    quadratures in the stable module.
    """
    constants = derive_constants(params)
    y = params.y_index
    sigma0 = sv.sigma0
    if sigma0 <= 0:
        raise DomainError("spot volatility must be positive")
    mu0 = sv.mu_fn(sv.y0)
    lev = sv.rho * sv.sigma_prime_fn(sv.y0) * sv.gamma_fn(sv.y0)  # rho sigma' gamma
    gt = constants.gamma_tilde
    a_sum = params.c_plus + params.c_minus

    n = _truncation_order(y)
    d_vals = generator_psi_coeffs(params, sigma0, n)
    d_terms = tuple((d_k, k * (1.0 - 0.5 * y)) for k, d_k in enumerate(d_vals, start=1))

    phi0 = 1.0 / (sigma0 * _SQRT_2PI)
    e = (gt + mu0 - 0.5 * lev) * phi0

    xi = sigma0 ** (1.0 - y) * 2.0 ** (-(y + 1.0) / 2.0) * _gamma(1.0 - y / 2.0) / _SQRT_PI
    f = (
        (-params.m_plus * params.c_plus + params.g_minus * params.c_minus) / (y - 1.0)
        - a_sum / (sigma0 ** 2 * y) * (gt + mu0 - 0.5 * lev * (1.0 + y))
    ) * xi

    sigma_bar1 = (
        a_sum * 2.0 ** (-y / 2.0) * _gamma(1.0 - y / 2.0) * sigma0 ** (1.0 - y)
        / (y * (y - 1.0))
    )

    return MixedBundle(
        params=params,
        constants=constants,
        d_terms=d_terms,
        e_term=(e, 0.5),
        f_term=(f, (3.0 - y) / 2.0),
        sigma_bar1=sigma_bar1,
        c_skew=gt - 0.5 * lev,
        xi_const=xi,
        spot_vol=sigma0,
        mu0=mu0,
        n_order=n,
    )


def _warn_if_not_martingale(bundle: MixedBundle) -> None:
    drift_gap = abs(bundle.mu0 + 0.5 * bundle.spot_vol ** 2)
    if drift_gap > 1e-12 * max(1.0, bundle.spot_vol ** 2):
        warnings.warn(
            "diffusion drift differs from -sigma^2/2; smile quantities assume "
            "the martingale normalization",
            stacklevel=3,
        )


def series_mixed(bundle: MixedBundle, quantity: str) -> PowerSeries:
    """Power series in t for one of the four target quantities.

    digital: 1/2 + sum d_k t^{k(1-Y/2)} + e t^{1/2} + f t^{(3-Y)/2}
    atm_vol: sigma0 + sigma_bar1 t^{(2-Y)/2}
    skew:    -[ sqrt(2 pi) sum d_k t^{k(1-Y/2)-1/2} + c/sigma0
             + (sqrt(2 pi) f + sigma_bar1/2) t^{(2-Y)/2} ]
    delta:   1/2 + sum d_k t^{k(1-Y/2)} + (sigma0/sqrt(2 pi) + e) t^{1/2}
             + (sigma_bar1/sqrt(2 pi) + f) t^{(3-Y)/2}
    """
    e, exp_e = bundle.e_term
    f, exp_f = bundle.f_term
    s0, sb1 = bundle.spot_vol, bundle.sigma_bar1
    if quantity == "digital":
        terms = [(0.5, 0.0), *bundle.d_terms, (e, exp_e), (f, exp_f)]
    elif quantity == "atm_vol":
        terms = [(s0, 0.0), (sb1, exp_f - 0.5)]
    elif quantity == "skew":
        terms = [(-_SQRT_2PI * d, x - 0.5) for d, x in bundle.d_terms]
        terms.append((-bundle.c_skew / s0, 0.0))
        terms.append((-(_SQRT_2PI * f + 0.5 * sb1), exp_f - 0.5))
    elif quantity == "delta":
        terms = [
            (0.5, 0.0),
            *bundle.d_terms,
            (s0 / _SQRT_2PI + e, exp_e),
            (sb1 / _SQRT_2PI + f, exp_f),
        ]
    else:
        raise DomainError(f"quantity must be one of {QUANTITIES}, got {quantity!r}")
    return PowerSeries.from_terms(terms)


def eval_mixed(
    bundle: MixedBundle, quantity: str, t: float, order: str = "second"
) -> float:
    """Evaluate a quantity at maturity t.

    order="second" keeps the full displayed expansion; order="first" keeps
    only terms up to the t^{1/2} group (shifted by t^{-1/2} for skew and
    atm_vol), the coarser of the two approximation levels the comparisons
    plot.
    """
    if t <= 0:
        raise DomainError("maturity must be positive")
    if quantity in ("atm_vol", "skew", "delta"):
        _warn_if_not_martingale(bundle)
    series = series_mixed(bundle, quantity)
    if order == "second":
        return series(t)
    if order != "first":
        raise DomainError(f"order must be 'first' or 'second', got {order!r}")
    shift = -0.5 if quantity in ("skew", "atm_vol") else 0.0
    return series.truncate(bundle.e_term[1] + shift)(t)
