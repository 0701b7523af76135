"""Parameter validation, derived constants, and model (de)serialization."""

import json
import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from levyskew.errors import DomainError, ParseError, SchemaError
from levyskew.models import (
    HestonSpec,
    ModelSpec,
    StochVolSpec,
    TemperedStableParams,
    derive_constants,
    gamma_neg,
    model_to_json,
    parse_model_json,
    validate_martingale,
)

from conftest import ANDERSEN, FIG3_HESTON, KAWAI


def _quad_gamma_tilde(p: TemperedStableParams, b_drift: float) -> float:
    """Defining form: b plus the tilted-compensator integrals."""
    y = p.y_index

    def right(x):
        return x ** (-y) * (1.0 - math.exp(-p.m_plus * x))

    def left(x):
        return x ** (-y) * (1.0 - math.exp(-p.g_minus * x))

    i_r, _ = integrate.quad(right, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)
    i_l, _ = integrate.quad(left, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=200)
    return (
        b_drift
        + (p.c_plus - p.c_minus) / (y - 1.0)
        + p.c_plus * i_r
        - p.c_minus * i_l
    )


def _quad_eta(p: TemperedStableParams) -> float:
    """Tilting compensator integral against the untempered measure."""
    y = p.y_index

    def side(rate, c):
        def f(x):
            return c * (math.exp(-rate * x) - 1.0 + rate * x) * x ** (-y - 1.0)

        # series head past the x^{1-Y} singularity (alternating, converges
        # geometrically for rate * eps < 1), piecewise quadrature for the
        # body, one-term asymptotes for the far tail
        eps = 0.05 / rate
        head = 0.0
        term_rate = -rate * eps
        fact, powr = 1.0, 1.0
        for k in range(2, 30):
            fact *= k
            powr *= term_rate
            head += powr * term_rate / (fact * (k - y))
        total = head * c * eps ** (-y)
        lo = eps
        for hi in np.geomspace(10.0 * eps, 4000.0 / rate, 30):
            v, _ = integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-12,
                                  limit=200)
            total += v
            lo = hi
        return total + c * rate * lo ** (1.0 - y) / (y - 1.0) - c * lo ** (-y) / y

    return side(p.m_plus, p.c_plus) + side(p.g_minus, p.c_minus)


class TestDerivedConstants:
    def test_andersen_gamma_tilde_value(self, andersen_params):
        c = derive_constants(andersen_params)
        assert abs(c.gamma_tilde - 0.0224) < 5e-5

    def test_andersen_eta_value(self, andersen_params):
        c = derive_constants(andersen_params)
        assert abs(c.eta - 0.0585) < 5e-5

    @pytest.mark.parametrize("raw", [ANDERSEN, KAWAI])
    def test_gamma_tilde_matches_defining_integral(self, raw):
        p = TemperedStableParams(**raw)
        c = derive_constants(p)
        oracle = _quad_gamma_tilde(p, c.b_drift)
        assert abs(c.gamma_tilde - oracle) < 1e-8 * max(1.0, abs(oracle))

    @pytest.mark.parametrize("raw", [ANDERSEN, KAWAI])
    def test_eta_matches_defining_integral(self, raw):
        p = TemperedStableParams(**raw)
        c = derive_constants(p)
        oracle = _quad_eta(p)
        assert abs(c.eta - oracle) < 1e-8 * max(1.0, abs(oracle))

    def test_swap_negates_gamma_tilde(self):
        p = TemperedStableParams(c_plus=0.007, c_minus=0.007, g_minus=1.3,
                                 m_plus=2.3, y_index=1.5)
        # C(1)=C(-1) and G <-> M-1 structure: swapping the roles of the two
        # tails (C+ <-> C-, G <-> M) negates the closed form
        q = TemperedStableParams(c_plus=p.c_minus, c_minus=p.c_plus,
                                 g_minus=p.m_plus - 1.0, m_plus=p.g_minus + 1.0,
                                 y_index=p.y_index)
        a = derive_constants(p).gamma_tilde
        b = derive_constants(q).gamma_tilde
        assert abs(a + b) < 1e-14 * max(1.0, abs(a))

    def test_scale_linearity(self, andersen_params):
        p = andersen_params
        lam = 3.7
        q = TemperedStableParams(c_plus=lam * p.c_plus, c_minus=lam * p.c_minus,
                                 g_minus=p.g_minus, m_plus=p.m_plus,
                                 y_index=p.y_index)
        a, b = derive_constants(p), derive_constants(q)
        assert abs(b.gamma_tilde - lam * a.gamma_tilde) < 1e-14
        assert abs(b.eta - lam * a.eta) < 1e-14

    def test_gamma_neg_positive_on_interval(self):
        for y in (1.05, 1.35, 1.5, 1.72, 1.95):
            assert gamma_neg(y) > 0.0
        with pytest.raises(DomainError):
            gamma_neg(2.0)
        with pytest.raises(DomainError):
            gamma_neg(1.0)


class TestMartingale:
    def test_m_above_one_passes(self, andersen_params):
        rep = validate_martingale(andersen_params)
        assert rep["ok"] is True
        assert rep["b_drift"] is not None

    def test_m_below_one_fails(self):
        p = TemperedStableParams(c_plus=0.01, c_minus=0.01, g_minus=1.0,
                                 m_plus=0.9, y_index=1.5)
        rep = validate_martingale(p)
        assert rep["ok"] is False
        assert "exponential moment diverges" in rep["reason"]

    def test_m_boundary_fails(self):
        p = TemperedStableParams(c_plus=0.01, c_minus=0.01, g_minus=1.0,
                                 m_plus=1.0, y_index=1.5)
        rep = validate_martingale(p)
        assert rep["ok"] is False

    def test_drift_zeroes_exponential_compensator(self, kawai_params):
        # e^X martingale: b + integral(e^x - 1 - x 1_{|x|<=1}) nu = 0, checked
        # by quadrature of the full compensator against the closed-form drift
        p = kawai_params
        b = derive_constants(p).b_drift
        y = p.y_index

        def f(x):
            lev = p.levy_density(x)
            comp = math.exp(x) - 1.0 - (x if abs(x) <= 1.0 else 0.0)
            return comp * lev

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            pos, _ = integrate.quad(f, 1e-12, 60.0 / (p.m_plus - 1.0),
                                    epsabs=1e-12, epsrel=1e-10, limit=400,
                                    points=[1.0])
            neg, _ = integrate.quad(f, -60.0 / p.g_minus, -1e-12,
                                    epsabs=1e-12, epsrel=1e-10, limit=400,
                                    points=[-1.0])
        # the quadrature sees the x^{1-Y} singular mass only down to 1e-12;
        # its truncation error bounds the achievable agreement
        trunc = (p.c_plus + p.c_minus) * (1e-12) ** (2.0 - y) / (2.0 - y)
        assert abs(b + pos + neg) < 1e-9 + 10.0 * trunc


class TestParamsValidation:
    def test_negative_intensity_rejected(self):
        with pytest.raises(DomainError):
            TemperedStableParams(c_plus=-0.1, c_minus=0.1, g_minus=1.0,
                                 m_plus=2.0, y_index=1.5)

    def test_both_zero_rejected(self):
        with pytest.raises(DomainError):
            TemperedStableParams(c_plus=0.0, c_minus=0.0, g_minus=1.0,
                                 m_plus=2.0, y_index=1.5)

    def test_y_outside_interval_rejected(self):
        for y in (0.5, 1.0, 2.0, 2.5):
            with pytest.raises(DomainError):
                TemperedStableParams(c_plus=0.01, c_minus=0.01, g_minus=1.0,
                                     m_plus=2.0, y_index=y)

    def test_levy_density_sides(self, andersen_params):
        p = andersen_params
        assert p.levy_density(0.5) == pytest.approx(
            p.c_plus * 0.5 ** (-p.y_index - 1) * math.exp(-p.m_plus * 0.5))
        assert p.levy_density(-0.5) == pytest.approx(
            p.c_minus * 0.5 ** (-p.y_index - 1) * math.exp(-p.g_minus * 0.5))
        with pytest.raises(DomainError):
            p.levy_density(0.0)


class TestStochVol:
    def test_rho_bounds(self):
        with pytest.raises(DomainError):
            StochVolSpec(mu_fn=lambda y: 0.0, sigma_fn=lambda y: 0.2,
                         alpha_fn=lambda y: 0.0, gamma_fn=lambda y: 0.0,
                         sigma_prime_fn=lambda y: 0.0, rho=1.0, y0=0.0)

    def test_constant_vol_spec(self):
        sv = StochVolSpec.constant_vol(0.25)
        assert sv.sigma0 == 0.25
        assert sv.rho == 0.0
        assert sv.gamma_fn(sv.y0) == 0.0
        assert sv.mu_fn(sv.y0) == pytest.approx(-0.5 * 0.25 ** 2)
        with pytest.raises(DomainError):
            StochVolSpec.constant_vol(0.0)

    def test_heston_mapping(self):
        h = HestonSpec(**FIG3_HESTON)
        sv = h.to_stochvol()
        assert sv.sigma0 == pytest.approx(math.sqrt(h.v0))
        assert sv.y0 == h.v0
        # sigma'(y0) gamma(y0) = xi/2 for the square-root map
        assert sv.sigma_prime_fn(h.v0) * sv.gamma_fn(h.v0) == pytest.approx(
            h.xi_volvol / 2.0)
        assert sv.alpha_fn(h.theta) == pytest.approx(0.0)

    def test_heston_positivity_checks(self):
        with pytest.raises(DomainError):
            HestonSpec(v0=0.0, kappa=1.0, theta=0.01, xi_volvol=0.3, rho=0.0)
        with pytest.raises(DomainError):
            HestonSpec(v0=0.01, kappa=1.0, theta=0.01, xi_volvol=0.3, rho=-1.0)


class TestModelSpec:
    def test_kind_validation(self, andersen_params):
        with pytest.raises(DomainError):
            ModelSpec(kind="bs", jumps=andersen_params)
        with pytest.raises(DomainError):
            ModelSpec(kind="ts+bm", jumps=andersen_params)  # sigma missing
        with pytest.raises(DomainError):
            ModelSpec(kind="ts+heston", jumps=andersen_params)

    def test_spot_vol(self, andersen_params):
        assert ModelSpec(kind="ts", jumps=andersen_params).spot_vol == 0.0
        m = ModelSpec(kind="ts+bm", jumps=andersen_params, sigma=0.1)
        assert m.spot_vol == 0.1
        h = ModelSpec(kind="ts+heston", jumps=andersen_params,
                      heston=HestonSpec(**FIG3_HESTON))
        assert h.spot_vol == pytest.approx(math.sqrt(FIG3_HESTON["v0"]))


class TestJsonRoundtrip:
    def test_ts_roundtrip(self, kawai_params):
        spec = ModelSpec(kind="ts", jumps=kawai_params)
        text = json.dumps(model_to_json(spec))
        back = parse_model_json(text)
        assert back == spec

    def test_heston_roundtrip(self, fig3_params):
        spec = ModelSpec(kind="ts+heston", jumps=fig3_params,
                         heston=HestonSpec(**FIG3_HESTON))
        back = parse_model_json(json.dumps(model_to_json(spec)))
        assert back == spec

    def test_bm_roundtrip(self, fig3_params):
        spec = ModelSpec(kind="ts+bm", jumps=fig3_params, sigma=0.1)
        back = parse_model_json(json.dumps(model_to_json(spec)))
        assert back == spec

    def test_bad_json_rejected(self):
        with pytest.raises(ParseError):
            parse_model_json("{not json")

    def test_missing_field_rejected(self):
        with pytest.raises(SchemaError):
            parse_model_json(json.dumps({"model": "ts", "C_plus": 0.01}))

    def test_unknown_kind_rejected(self):
        with pytest.raises((SchemaError, DomainError)):
            parse_model_json(json.dumps(
                {"model": "garch", "C_plus": 0.01, "C_minus": 0.01,
                 "G": 1.0, "M": 2.0, "Y": 1.5}))
