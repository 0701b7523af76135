"""Model parameter records and their derived constants.

The pure-jump model is a tempered stable-like process with Lévy measure

    nu(dx) = C(x/|x|) |x|^{-Y-1} qbar(x) dx,
    qbar(x) = exp(-M x) 1{x>0} + exp(-G |x|) 1{x<0},

with activity index Y in (1,2).  Everything downstream consumes the three
derived constants:

    gamma_tilde : drift of the log price under the tilted measure,
    eta         : compensator appearing in the tilting density,
    b_drift     : drift implied by the martingale condition.

All three have closed forms in terms of Gamma(-Y).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Callable

from scipy.special import gamma as _gamma
from scipy.special import gammaincc

from .errors import DomainError, ParseError, SchemaError

__all__ = [
    "TemperedStableParams",
    "DerivedConstants",
    "StochVolSpec",
    "HestonSpec",
    "ModelSpec",
    "gamma_neg",
    "derive_constants",
    "validate_martingale",
    "parse_model_json",
    "model_to_json",
]


def gamma_neg(y_index: float) -> float:
    """Gamma(-Y) for Y in (1,2), via Gamma(-Y) = Gamma(2-Y)/((-Y)(1-Y)).

    The recurrence keeps the argument of the library gamma positive.  The
    result is positive on the whole interval.
    """
    if not 1.0 < y_index < 2.0:
        raise DomainError(f"y_index must lie in (1,2), got {y_index}")
    return _gamma(2.0 - y_index) / ((-y_index) * (1.0 - y_index))


@dataclass(frozen=True)
class TemperedStableParams:
    c_plus: float   # jump intensity C(1) >= 0
    c_minus: float  # jump intensity C(-1) >= 0
    g_minus: float  # left tempering rate G > 0
    m_plus: float   # right tempering rate M > 0; martingale use needs M > 1
    y_index: float  # activity index Y, strictly inside (1,2)

    def __post_init__(self) -> None:
        if self.c_plus < 0 or self.c_minus < 0:
            raise DomainError("jump intensities must be nonnegative")
        if self.c_plus + self.c_minus <= 0:
            raise DomainError("at least one of C(1), C(-1) must be positive")
        if self.g_minus <= 0:
            raise DomainError("left tempering rate G must be positive")
        if self.m_plus <= 0:
            raise DomainError("right tempering rate M must be positive")
        if not 1.0 < self.y_index < 2.0:
            raise DomainError(
                f"activity index Y must lie strictly in (1,2), got {self.y_index}"
            )

    def levy_density(self, x: float) -> float:
        """nu(dx)/dx at x != 0."""
        if x > 0:
            return self.c_plus * x ** (-self.y_index - 1.0) * math.exp(-self.m_plus * x)
        if x < 0:
            return self.c_minus * (-x) ** (-self.y_index - 1.0) * math.exp(self.g_minus * x)
        raise DomainError("Levy density undefined at 0")


@dataclass(frozen=True)
class DerivedConstants:
    gamma_tilde: float  # tilted-measure drift, per unit time
    eta: float          # tilting compensator, per unit time
    b_drift: float      # drift b from the martingale condition


def derive_constants(params: TemperedStableParams) -> DerivedConstants:
    """Closed forms for gamma_tilde, eta, and the martingale drift b.

    gamma_tilde = -Gamma(-Y) (C(1)((M-1)^Y - M^Y) + C(-1)((G+1)^Y - G^Y))
    eta         =  Gamma(-Y) (C(1) M^Y + C(-1) G^Y)

    b is fixed so that e^X is a martingale:
    b = -[ integral (e^x - 1 - x) nu(dx) + integral_{|x|>1} x nu(dx) ],
    with each piece reduced to (incomplete) gamma functions.
    """
    if params.m_plus <= 1.0:
        raise DomainError(
            "gamma_tilde closed form requires M > 1 (exponential moment)"
        )
    cp, cm = params.c_plus, params.c_minus
    g, m, y = params.g_minus, params.m_plus, params.y_index
    gn = gamma_neg(y)

    gamma_tilde = -gn * (
        cp * ((m - 1.0) ** y - m ** y) + cm * ((g + 1.0) ** y - g ** y)
    )
    eta = gn * (cp * m ** y + cm * g ** y)

    # integral (e^x - 1 - x) nu(dx), both half-lines, in closed form:
    #   pos: C+ [ Gamma(-Y)((M-1)^Y - M^Y) + Gamma(2-Y) M^{Y-1}/(Y-1) ]
    #   neg: C- [ Gamma(-Y)((G+1)^Y - G^Y) - Gamma(2-Y) G^{Y-1}/(Y-1) ]
    g2 = _gamma(2.0 - y)
    exp_comp = cp * (gn * ((m - 1.0) ** y - m ** y) + g2 * m ** (y - 1.0) / (y - 1.0))
    exp_comp += cm * (gn * ((g + 1.0) ** y - g ** y) - g2 * g ** (y - 1.0) / (y - 1.0))

    # integral_{|x|>1} x nu(dx) via upper incomplete gamma:
    #   integral_1^inf x^{-Y} e^{-ax} dx = a^{Y-1} Gamma(1-Y, a),
    #   Gamma(1-Y, a) = (Gamma(2-Y, a) - a^{1-Y} e^{-a}) / (1 - Y).
    def _tail_first_moment(a: float) -> float:
        upper2 = g2 * gammaincc(2.0 - y, a)  # Gamma(2-Y, a)
        upper1 = (upper2 - a ** (1.0 - y) * math.exp(-a)) / (1.0 - y)
        return a ** (y - 1.0) * upper1

    big_jump_mean = cp * _tail_first_moment(m) - cm * _tail_first_moment(g)

    b_drift = -(exp_comp + big_jump_mean)
    return DerivedConstants(gamma_tilde=gamma_tilde, eta=eta, b_drift=b_drift)


def validate_martingale(params: TemperedStableParams) -> dict[str, Any]:
    """Report whether exp(X) can be a martingale under these parameters.

    Passes iff the exponential moment integral is finite, which for the
    tempered stable family means M > 1 strictly.
    """
    if params.m_plus > 1.0:
        consts = derive_constants(params)
        return {
            "ok": True,
            "reason": "exponential moment finite (M > 1)",
            "b_drift": consts.b_drift,
        }
    reason = (
        "exponential moment diverges (M < 1)"
        if params.m_plus < 1.0
        else "exponential moment diverges (boundary M = 1 excluded)"
    )
    return {"ok": False, "reason": reason, "b_drift": None}


@dataclass(frozen=True)
class StochVolSpec:
    """Coefficients of the continuous component driven by a diffusion state.

    The continuous log-price part follows
        dV = mu(Yt) dt + sigma(Yt) (rho dW1 + sqrt(1-rho^2) dW2)
    with the driver
        dYt = alpha(Yt) dt + gamma(Yt) dW1.

    sigma_prime_fn is carried explicitly because the leading skew constant
    needs sigma'(y0) gamma(y0) exactly, not a finite-difference stand-in.
    """

    mu_fn: Callable[[float], float]
    sigma_fn: Callable[[float], float]
    alpha_fn: Callable[[float], float]
    gamma_fn: Callable[[float], float]
    sigma_prime_fn: Callable[[float], float]
    rho: float   # leverage correlation, in (-1,1)
    y0: float    # driver start state

    def __post_init__(self) -> None:
        if not -1.0 < self.rho < 1.0:
            raise DomainError(f"leverage rho must lie in (-1,1), got {self.rho}")
        if self.sigma_fn(self.y0) <= 0:
            raise DomainError("sigma_fn(y0) must be positive")

    @property
    def sigma0(self) -> float:
        return self.sigma_fn(self.y0)

    @staticmethod
    def constant_vol(sigma: float) -> "StochVolSpec":
        """Independent Brownian component with fixed volatility."""
        if sigma <= 0:
            raise DomainError("sigma must be positive")
        return StochVolSpec(
            mu_fn=lambda y: -0.5 * sigma * sigma,  # martingale drift of the BM part
            sigma_fn=lambda y: sigma,
            alpha_fn=lambda y: 0.0,
            gamma_fn=lambda y: 0.0,
            sigma_prime_fn=lambda y: 0.0,
            rho=0.0,
            y0=0.0,
        )


@dataclass(frozen=True)
class HestonSpec:
    v0: float         # initial variance > 0
    kappa: float      # mean-reversion speed > 0
    theta: float      # long-run variance > 0
    xi_volvol: float  # vol-of-vol > 0
    rho: float        # leverage, in (-1,1)

    def __post_init__(self) -> None:
        if self.v0 <= 0 or self.kappa <= 0 or self.theta <= 0 or self.xi_volvol <= 0:
            raise DomainError("v0, kappa, theta, xi_volvol must all be positive")
        if not -1.0 < self.rho < 1.0:
            raise DomainError(f"leverage rho must lie in (-1,1), got {self.rho}")

    def to_stochvol(self) -> StochVolSpec:
        """Heston as a StochVolSpec: state y is the variance, sigma(y)=sqrt(y)."""
        xi = self.xi_volvol
        kap, th = self.kappa, self.theta
        return StochVolSpec(
            mu_fn=lambda y: -0.5 * y,
            sigma_fn=lambda y: math.sqrt(y),
            alpha_fn=lambda y: kap * (th - y),
            gamma_fn=lambda y: xi * math.sqrt(y),
            sigma_prime_fn=lambda y: 0.5 / math.sqrt(y),
            rho=self.rho,
            y0=self.v0,
        )


@dataclass(frozen=True)
class ModelSpec:
    """One full model: jumps, plus an optional continuous component."""

    kind: str  # "ts" | "ts+bm" | "ts+heston"
    jumps: TemperedStableParams
    sigma: float | None = None        # ts+bm only
    heston: HestonSpec | None = None  # ts+heston only

    def __post_init__(self) -> None:
        if self.kind not in ("ts", "ts+bm", "ts+heston"):
            raise DomainError(f"unknown model kind {self.kind!r}")
        if self.kind == "ts+bm" and (self.sigma is None or self.sigma <= 0):
            raise DomainError("model ts+bm requires sigma > 0")
        if self.kind == "ts+heston" and self.heston is None:
            raise DomainError("model ts+heston requires a heston block")

    def stochvol(self) -> StochVolSpec | None:
        if self.kind == "ts+bm":
            assert self.sigma is not None
            return StochVolSpec.constant_vol(self.sigma)
        if self.kind == "ts+heston":
            assert self.heston is not None
            return self.heston.to_stochvol()
        return None

    @property
    def spot_vol(self) -> float:
        """sigma(y0) of the continuous part; 0 for the pure-jump model."""
        sv = self.stochvol()
        return 0.0 if sv is None else sv.sigma0


_HESTON_KEYS = ("v0", "kappa", "theta", "xi_volvol", "rho")


def parse_model_json(text: str) -> ModelSpec:
    """Parse the model JSON document.

    Exact schema: {"model": "ts"|"ts+bm"|"ts+heston", "C_plus":.., "C_minus":..,
    "G":.., "M":.., "Y":.., "sigma":.., "heston": {...}}.  "sigma" is required
    for ts+bm, the "heston" block for ts+heston.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("model document must be a JSON object")

    kind = doc.get("model")
    if kind not in ("ts", "ts+bm", "ts+heston"):
        raise SchemaError(
            'field "model" must be one of "ts", "ts+bm", "ts+heston"'
        )
    for key in ("C_plus", "C_minus", "G", "M", "Y"):
        if key not in doc:
            raise SchemaError(f'missing required field "{key}"')
        if not isinstance(doc[key], (int, float)) or isinstance(doc[key], bool):
            raise SchemaError(f'field "{key}" must be a number')

    try:
        jumps = TemperedStableParams(
            c_plus=float(doc["C_plus"]),
            c_minus=float(doc["C_minus"]),
            g_minus=float(doc["G"]),
            m_plus=float(doc["M"]),
            y_index=float(doc["Y"]),
        )
    except DomainError:
        raise

    sigma = None
    heston = None
    if kind == "ts+bm":
        if "sigma" not in doc:
            raise SchemaError('model "ts+bm" requires field "sigma"')
        sigma = float(doc["sigma"])
    elif kind == "ts+heston":
        block = doc.get("heston")
        if not isinstance(block, dict):
            raise SchemaError('model "ts+heston" requires object field "heston"')
        missing = [k for k in _HESTON_KEYS if k not in block]
        if missing:
            raise SchemaError(f'heston block missing fields: {", ".join(missing)}')
        heston = HestonSpec(**{k: float(block[k]) for k in _HESTON_KEYS})

    return ModelSpec(kind=kind, jumps=jumps, sigma=sigma, heston=heston)


def model_to_json(spec: ModelSpec) -> dict[str, Any]:
    """Inverse of parse_model_json, as a plain dict."""
    doc: dict[str, Any] = {
        "model": spec.kind,
        "C_plus": spec.jumps.c_plus,
        "C_minus": spec.jumps.c_minus,
        "G": spec.jumps.g_minus,
        "M": spec.jumps.m_plus,
        "Y": spec.jumps.y_index,
    }
    if spec.kind == "ts+bm":
        doc["sigma"] = spec.sigma
    elif spec.kind == "ts+heston":
        assert spec.heston is not None
        doc["heston"] = {k: getattr(spec.heston, k) for k in _HESTON_KEYS}
    return doc
