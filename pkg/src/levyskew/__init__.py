"""Short-maturity asymptotics for tempered stable-like models.

Expansions of ATM digital prices, implied volatility, skew and delta for
pure-jump and jump-plus-volatility models, a tilted-measure Monte Carlo
oracle, an OTM wing approximation, and an option-chain calibration
pipeline that recovers the jump-activity index from the skew power law.
"""

from __future__ import annotations

from .blackscholes import atm_identities, bs_price_greeks, implied_vol, skew_from_digital
from .errors import (
    DataError,
    DomainError,
    InsufficientQuotes,
    LevyskewError,
    MissingWing,
    NoConvergence,
    OutOfBounds,
    ParseError,
    QuadratureError,
    SchemaError,
    SignMixError,
    UnsupportedOrder,
    UsageError,
)
from .mixed import MixedBundle, build_mixed, eval_mixed, leverage_contribution, series_mixed
from .models import (
    DerivedConstants,
    HestonSpec,
    ModelSpec,
    StochVolSpec,
    TemperedStableParams,
    derive_constants,
    model_to_json,
    parse_model_json,
    validate_martingale,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    digital_price_mc,
    skew_fd_mc,
    smile_mc,
    vanilla_price_mc,
)
from .otm import OtmInputs, otm_constants, otm_skew, v1_correction
from .pipeline import (
    ChainSnapshot,
    PowerLawFit,
    SkewSeries,
    build_otm_smile,
    calibrate_Y,
    fit_powerlaw,
    implied_forward,
    load_chain,
    skew_series,
)
from .purejump import PureJumpBundle, build_purejump, eval_purejump, series_purejump
from .series import PowerSeries, series_to_json
from .stable import (
    OneSidedFunctionals,
    OneSidedPair,
    StableDensity,
    StableLaw,
    generator_psi_coeffs,
    one_sided_functionals,
)

__version__ = "0.1.0"

__all__ = [
    "atm_identities",
    "bs_price_greeks",
    "implied_vol",
    "skew_from_digital",
    "LevyskewError",
    "UsageError",
    "DomainError",
    "UnsupportedOrder",
    "QuadratureError",
    "OutOfBounds",
    "NoConvergence",
    "DataError",
    "ParseError",
    "SchemaError",
    "InsufficientQuotes",
    "MissingWing",
    "SignMixError",
    "MixedBundle",
    "build_mixed",
    "eval_mixed",
    "leverage_contribution",
    "series_mixed",
    "DerivedConstants",
    "HestonSpec",
    "ModelSpec",
    "StochVolSpec",
    "TemperedStableParams",
    "derive_constants",
    "model_to_json",
    "parse_model_json",
    "validate_martingale",
    "McConfig",
    "McEstimate",
    "digital_price_mc",
    "skew_fd_mc",
    "smile_mc",
    "vanilla_price_mc",
    "OtmInputs",
    "otm_constants",
    "otm_skew",
    "v1_correction",
    "ChainSnapshot",
    "PowerLawFit",
    "SkewSeries",
    "build_otm_smile",
    "calibrate_Y",
    "fit_powerlaw",
    "implied_forward",
    "load_chain",
    "skew_series",
    "PureJumpBundle",
    "build_purejump",
    "eval_purejump",
    "series_purejump",
    "PowerSeries",
    "series_to_json",
    "OneSidedFunctionals",
    "OneSidedPair",
    "StableDensity",
    "StableLaw",
    "generator_psi_coeffs",
    "one_sided_functionals",
    "__version__",
]
