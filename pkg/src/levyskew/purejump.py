"""Short-maturity ATM expansions for the pure-jump model.

Builds the coefficient bundle for the digital price, implied vol, skew, and
call delta of a tempered stable-like martingale with no continuous part,
then evaluates any of the four quantities at a maturity.  The digital
expansion has the shape

    P(X_t >= 0) = p0 + sum_k d_k t^{k(1-1/Y)} + e t^{1/Y} + f t + o(t),

and the other three quantities reuse the same coefficients in fixed
algebraic combinations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate, special

from .errors import DomainError, QuadratureError
from .models import DerivedConstants, TemperedStableParams, derive_constants, gamma_neg
from .series import PowerSeries
from .stable import (
    DEFAULT_SEED,
    OneSidedPair,
    StableLaw,
    density_deriv_at_zero,
    expected_positive_part,
    one_sided_functionals,
    positivity,
)

__all__ = [
    "PureJumpBundle",
    "build_purejump",
    "eval_purejump",
    "series_purejump",
    "sigma2_closed",
    "sigma2_quadrature",
    "QUANTITIES",
]

QUANTITIES = ("digital", "atm_vol", "skew", "delta")

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class PureJumpBundle:
    params: TemperedStableParams
    constants: DerivedConstants
    p0: float                              # limiting digital level P(Z_1 >= 0)
    d_terms: tuple[tuple[float, float], ...]  # (d_k, exponent k(1-1/Y))
    e_term: tuple[float, float]            # (e, 1/Y)
    f_term: tuple[float, float]            # (f, 1)
    sigma1: float                          # leading ATM-vol coefficient E(Z_1^+)
    sigma2: float                          # second ATM-vol coefficient
    n_order: int
    e_std_error: float
    f_std_error: float

    def __post_init__(self) -> None:
        exps = [x for _, x in self.d_terms]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise DomainError("d-term exponents must strictly increase")
        if self.sigma1 <= 0:
            raise DomainError("leading vol coefficient must be positive")


def _truncation_order(y: float) -> int:
    # largest k with k(1 - 1/Y) <= 1, i.e. k <= Y/(Y-1); boundary included
    return int(math.floor(y / (y - 1.0) + 1e-12))


def sigma2_closed(params: TemperedStableParams, p0: float) -> float:
    """Second ATM-vol coefficient in incomplete-Gamma-free closed form."""
    y, m, g = params.y_index, params.m_plus, params.g_minus
    gy = gamma_neg(y)
    return gy * (
        (1.0 - p0) * params.c_plus * ((m - 1.0) ** y - m ** y)
        - p0 * params.c_minus * ((g + 1.0) ** y - g ** y)
    )


def sigma2_quadrature(params: TemperedStableParams, p0: float) -> float:
    """Same coefficient with the Gamma patterns evaluated numerically.

    Cross-checks Int_0^inf (e^{-ax} - 1 + ax) x^{-Y-1} dx = Gamma(-Y) a^Y
    without using that identity: the singular head on [0, 1] is integrated
    adaptively, the tail is summed from upper incomplete Gamma values
    reached by recurrence from a positive parameter.
    """
    y = params.y_index

    def remainder(v: float) -> float:
        # e^{-v} - 1 + v without cancellation near 0
        if v < 1e-4:
            return v * v * (0.5 - v / 6.0 + v * v / 24.0 - v ** 3 / 120.0)
        return math.expm1(-v) + v

    def head(a: float) -> float:
        # x = u^{1/(2-Y)} flattens the x^{1-Y} endpoint behavior to a constant
        p = 1.0 / (2.0 - y)

        def integrand(u: float) -> float:
            if u <= 0.0:
                return 0.5 * a * a * p  # limit: the quadratic head exactly cancels the Jacobian
            x = u ** p
            return remainder(a * x) * x ** (-y - 1.0) * p * u ** (p - 1.0)

        val, err = integrate.quad(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12,
                                  limit=200)
        if err > 1e-9:
            raise QuadratureError(f"gamma-pattern head stalled (err={err:.2e})")
        return val

    def tail(a: float) -> float:
        # Int_1^inf split termwise; Gamma(-Y, a) via two downward recurrences
        g2 = special.gammaincc(2.0 - y, a) * special.gamma(2.0 - y)
        g1 = (g2 - a ** (1.0 - y) * math.exp(-a)) / (1.0 - y)
        g0 = (g1 - a ** (-y) * math.exp(-a)) / (-y)
        return a ** y * g0 - 1.0 / y + a / (y - 1.0)

    def pattern(a: float) -> float:
        return head(a) + tail(a)

    m, g = params.m_plus, params.g_minus
    return (1.0 - p0) * params.c_plus * (pattern(m - 1.0) - pattern(m)) - (
        p0 * params.c_minus * (pattern(g + 1.0) - pattern(g))
    )


def build_purejump(
    params: TemperedStableParams,
    n_samples: int = 4_000_000,
    seed: int = DEFAULT_SEED,
    chunk_size: int = 250_000,
    n_workers: int = 1,
) -> PureJumpBundle:
    """Assemble every expansion coefficient for the pure-jump model.

    The d_k and both vol coefficients are closed-form; e and f carry the
    one-sided stable expectations, estimated by the seeded Monte Carlo in
    the stable module (their standard errors are kept on the bundle).
    """
    constants = derive_constants(params)  # validates M > 1
    y = params.y_index
    law = StableLaw.from_intensities(params.c_plus, params.c_minus, y)
    p0 = positivity(law)
    gt = constants.gamma_tilde

    n = _truncation_order(y)
    d_terms = []
    fact = 1.0
    for k in range(1, n + 1):
        fact *= k
        d_k = (-1.0) ** (k - 1) / fact * gt ** k * density_deriv_at_zero(law, k)
        d_terms.append((d_k, k * (1.0 - 1.0 / y)))

    pair = OneSidedPair.from_params(params)
    fn = one_sided_functionals(
        pair, n_samples=n_samples, seed=seed, chunk_size=chunk_size, n_workers=n_workers
    )
    m, g = params.m_plus, params.g_minus
    e = -m * fn.zp_pos.value + g * fn.zn_pos.value
    e_se = math.hypot(m * fn.zp_pos.std_error, g * fn.zn_pos.std_error)

    gy = gamma_neg(y)
    f = -gt * (m + g) * fn.cross_density.value + gy * (
        (1.0 - p0) * params.c_plus * m ** y - p0 * params.c_minus * g ** y
    )
    f_se = abs(gt * (m + g)) * fn.cross_density.std_error

    return PureJumpBundle(
        params=params,
        constants=constants,
        p0=p0,
        d_terms=tuple(d_terms),
        e_term=(e, 1.0 / y),
        f_term=(f, 1.0),
        sigma1=expected_positive_part(law),
        sigma2=sigma2_closed(params, p0),
        n_order=n,
        e_std_error=e_se,
        f_std_error=f_se,
    )


def series_purejump(bundle: PureJumpBundle, quantity: str) -> PowerSeries:
    """Power series in t for one of the four target quantities.

    digital: p0 + sum d_k t^{k(1-1/Y)} + e t^{1/Y} + f t
    atm_vol: sqrt(2 pi) sigma1 t^{1/Y-1/2} + sqrt(2 pi) sigma2 t^{1/2}
    skew:    sqrt(2 pi) [ (1/2-p0) t^{-1/2} - sum d_k t^{k(1-1/Y)-1/2}
             - (e+sigma1/2) t^{1/Y-1/2} - (f+sigma2/2) t^{1/2} ]
    delta:   p0 + sum d_k t^{k(1-1/Y)} + (sigma1+e) t^{1/Y} + (sigma2+f) t
    """
    e, exp_e = bundle.e_term
    f, exp_f = bundle.f_term
    s1, s2 = bundle.sigma1, bundle.sigma2
    if quantity == "digital":
        terms = [(bundle.p0, 0.0), *bundle.d_terms, (e, exp_e), (f, exp_f)]
    elif quantity == "atm_vol":
        terms = [
            (_SQRT_2PI * s1, exp_e - 0.5),
            (_SQRT_2PI * s2, 0.5),
        ]
    elif quantity == "skew":
        terms = [(_SQRT_2PI * (0.5 - bundle.p0), -0.5)]
        terms += [(-_SQRT_2PI * d, x - 0.5) for d, x in bundle.d_terms]
        terms.append((-_SQRT_2PI * (e + 0.5 * s1), exp_e - 0.5))
        terms.append((-_SQRT_2PI * (f + 0.5 * s2), 0.5))
    elif quantity == "delta":
        terms = [(bundle.p0, 0.0), *bundle.d_terms, (s1 + e, exp_e), (s2 + f, exp_f)]
    else:
        raise DomainError(f"quantity must be one of {QUANTITIES}, got {quantity!r}")
    return PowerSeries.from_terms(terms)


def eval_purejump(
    bundle: PureJumpBundle, quantity: str, t: float, order: str = "second"
) -> float:
    """Evaluate a quantity at maturity t.

    order="second" keeps the full displayed expansion; order="first" drops
    every term beyond the t^{1/Y} group (shifted accordingly for skew and
    atm_vol), matching the two approximation levels the comparisons plot.
    """
    if t <= 0:
        raise DomainError("maturity must be positive")
    series = series_purejump(bundle, quantity)
    if order == "second":
        return series(t)
    if order != "first":
        raise DomainError(f"order must be 'first' or 'second', got {order!r}")
    shift = -0.5 if quantity in ("skew", "atm_vol") else 0.0
    return series.truncate(bundle.e_term[1] + shift)(t)
