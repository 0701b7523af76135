"""Session-scoped parameter sets and coefficient bundles.

The bundles are the expensive shared objects (one-sided Monte Carlo
functionals for the pure-jump models, generator quadratures for the mixed
ones); everything downstream reuses them.
"""

import pytest

from levyskew.mixed import build_mixed
from levyskew.models import HestonSpec, StochVolSpec, TemperedStableParams
from levyskew.purejump import build_purejump

KAWAI = dict(c_plus=0.015, c_minus=0.041, g_minus=2.318, m_plus=4.025, y_index=1.35)
ANDERSEN = dict(c_plus=0.0088, c_minus=0.0044, g_minus=0.41, m_plus=1.93, y_index=1.5)
FIG3 = dict(c_plus=0.0040, c_minus=0.0013, g_minus=0.41, m_plus=1.93, y_index=1.5)
CGMY_SYM = dict(c_plus=0.0088, c_minus=0.0088, g_minus=1.93, m_plus=1.93, y_index=1.5)

# Heston twin of the constant-vol sigma = 0.1 model: same spot vol, with the
# leverage product rho sigma'(y0) gamma(y0) positive (the sign that steepens
# this model's positive skew) and vol-of-vol solved so the t = 0.1 skew
# matches the constant-vol case's published companion value.
FIG3_HESTON = dict(v0=0.01, kappa=3.0, theta=0.01, xi_volvol=0.411, rho=0.3)


@pytest.fixture(scope="session")
def kawai_params():
    return TemperedStableParams(**KAWAI)


@pytest.fixture(scope="session")
def andersen_params():
    return TemperedStableParams(**ANDERSEN)


@pytest.fixture(scope="session")
def fig3_params():
    return TemperedStableParams(**FIG3)


@pytest.fixture(scope="session")
def cgmy_sym_params():
    return TemperedStableParams(**CGMY_SYM)


@pytest.fixture(scope="session")
def kawai_bundle(kawai_params):
    return build_purejump(kawai_params)


@pytest.fixture(scope="session")
def andersen_bundle(andersen_params):
    return build_purejump(andersen_params)


@pytest.fixture(scope="session")
def cgmy_sym_bundle(cgmy_sym_params):
    return build_purejump(cgmy_sym_params)


@pytest.fixture(scope="session")
def fig3_bm_bundle(fig3_params):
    return build_mixed(fig3_params, StochVolSpec.constant_vol(0.1))


@pytest.fixture(scope="session")
def fig3_heston_sv():
    return HestonSpec(**FIG3_HESTON).to_stochvol()


@pytest.fixture(scope="session")
def fig3_heston_bundle(fig3_params, fig3_heston_sv):
    return build_mixed(fig3_params, fig3_heston_sv)
