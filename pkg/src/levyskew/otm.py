"""Out-of-the-money implied-vol and skew asymptotics.

For a fixed log-moneyness kappa != 0 the OTM implied variance collapses at
rate kappa^2/(2t ln(1/t)) and the skew explodes like 1/sqrt(2t ln(1/t)).
The refinement implemented here keeps the first correction V1, built from
the option-tail mass a0 of the Levy measure, plus a 1/ln(1/t) term carrying
the tail mass b0.  The expansion is insensitive to an independent Brownian
component, which therefore only travels along as metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .errors import DomainError, QuadratureError
from .models import TemperedStableParams

__all__ = ["OtmInputs", "otm_constants", "otm_skew", "v1_correction"]

_UNDERFLOW_LOG = -690.0  # ln(1e-300): switch tail mass to its asymptote


@dataclass(frozen=True)
class OtmInputs:
    kappa: float
    levy_measure: TemperedStableParams
    sigma_bm: float = 0.0  # carried for context; the displayed orders ignore it

    def __post_init__(self) -> None:
        if self.kappa == 0.0:
            raise DomainError("OTM expansion needs kappa != 0; use the ATM modules")
        if self.sigma_bm < 0:
            raise DomainError("Brownian volatility cannot be negative")


def _quad(fn, lo, hi, what: str) -> float:
    val, err = integrate.quad(fn, lo, hi, epsabs=1e-14, epsrel=1e-10, limit=300)
    if err > 1e-8 * max(1.0, abs(val)):
        raise QuadratureError(f"{what} quadrature did not converge (err={err:.2e})")
    return val


def otm_constants(inputs: OtmInputs) -> dict[str, float]:
    """Option-tail integrals of the Levy measure at log-moneyness kappa.

    a0 = Int (e^x - e^kappa)^+ nu(dx) for kappa > 0 (mirrored below), and
    b0 = -e^kappa nu([kappa, inf)) (mirrored); both by adaptive quadrature,
    with the tail mass replaced by its leading asymptote once the integrand
    underflows.
    """
    k = inputs.kappa
    p = inputs.levy_measure
    y = p.y_index
    if k > 0:
        c_side, rate = p.c_plus, p.m_plus
        if rate <= 1.0:
            raise DomainError(
                "right tail needs tempering rate M > 1 for a finite call-tail integral"
            )

        def payoff(x: float) -> float:
            return (math.exp(x) - math.exp(k)) * c_side * x ** (-y - 1.0) * math.exp(-rate * x)

        a0 = _quad(payoff, k, max(10.0 * k, k + 200.0 / (rate - 1.0)), "a0")
        edge = k
    else:
        c_side, rate = p.c_minus, p.g_minus

        def payoff(u: float) -> float:
            # x = -u below the negative strike
            return (math.exp(k) - math.exp(-u)) * c_side * u ** (-y - 1.0) * math.exp(-rate * u)

        a0 = _quad(payoff, -k, -k + 200.0 / rate + 50.0, "a0")
        edge = -k

    # tail mass nu([kappa, inf)) or nu((-inf, kappa])
    if -rate * edge - y * math.log(edge) < _UNDERFLOW_LOG:
        mass = c_side * edge ** (-y - 1.0) * math.exp(-rate * edge) / rate
    else:
        def tail(u: float) -> float:
            return c_side * u ** (-y - 1.0) * math.exp(-rate * u)

        mass = _quad(tail, edge, edge + 200.0 / rate + 50.0, "tail mass")
    return {"a0": a0, "b0": -math.exp(k) * mass}


def v1_correction(inputs: OtmInputs, t: float) -> float:
    """First implied-variance correction V1(t, kappa); vanishes as t -> 0."""
    if not 0.0 < t < math.exp(-1.0):
        raise DomainError("need t in (0, 1/e) so that ln(1/t) > 1")
    a0 = otm_constants(inputs)["a0"]
    k = inputs.kappa
    log_inv_t = math.log(1.0 / t)
    return (
        math.log(4.0 * math.sqrt(math.pi) * a0 * math.exp(-k / 2.0) * log_inv_t ** 1.5 / abs(k))
        / log_inv_t
    )


def otm_skew(inputs: OtmInputs, t: float) -> float:
    """Smile slope at log-moneyness kappa for small t.

    sqrt(2 t ln(1/t)) * slope = sgn(kappa)(1 + V1/2)
        - sgn(kappa)(1 + kappa/2 - kappa b0/a0) / (2 ln(1/t)) + o(1/ln(1/t)).
    """
    if not 0.0 < t < math.exp(-1.0):
        raise DomainError("need t in (0, 1/e) so that ln(1/t) > 1")
    k = inputs.kappa
    consts = otm_constants(inputs)
    a0, b0 = consts["a0"], consts["b0"]
    log_inv_t = math.log(1.0 / t)
    v1 = (
        math.log(4.0 * math.sqrt(math.pi) * a0 * math.exp(-k / 2.0) * log_inv_t ** 1.5 / abs(k))
        / log_inv_t
    )
    sign = math.copysign(1.0, k)
    bracket = sign * (1.0 + 0.5 * v1) - sign * (1.0 + 0.5 * k - k * b0 / a0) / (
        2.0 * log_inv_t
    )
    return bracket / math.sqrt(2.0 * t * log_inv_t)
