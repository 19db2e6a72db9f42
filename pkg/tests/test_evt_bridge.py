import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gompertz_kl import evt_bridge as evt
from gompertz_kl.errors import DomainError, RejectionBudgetError
from gompertz_kl.evt_bridge import FrechetParams, GumbelMinParams, WeibullParams
from gompertz_kl.gompertz import GompertzParams, cdf, pdf
from gompertz_kl.numeric_oracle import integrate_semi_infinite, ks_distance


def _bq(p):
    return (p.b, p.q)


class TestMaps:
    @pytest.mark.parametrize("m,s,expected", [
        (0.0, 1.0, (1.0, 1.0)),
        (-math.log(2), 1.0, (1.0, 2.0)),
        (1.0, 0.5, (2.0, math.exp(-2))),
    ])
    def test_gumbel(self, m, s, expected):
        assert _bq(evt.gumbel_to_gompertz(GumbelMinParams(m, s))) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("a,r,expected", [(2, 1, (2, 1)), (1, 3, (1, 3)), (3, 0.5, (3, 0.125))])
    def test_frechet(self, a, r, expected):
        assert _bq(evt.frechet_to_gompertz(FrechetParams(a, r))) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("k,l,expected", [(1, 1, (1, 1)), (2, 2, (2, 0.25)), (0.5, 4, (0.5, 0.5))])
    def test_weibull(self, k, l, expected):  # noqa: E741
        assert _bq(evt.weibull_to_gompertz(WeibullParams(k, l))) == pytest.approx(expected, rel=1e-15)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            evt.gumbel_to_gompertz(GumbelMinParams(-701.0, 1.0))
        with pytest.raises(OverflowError):
            evt.frechet_to_gompertz(FrechetParams(1000.0, 3.0))
        with pytest.raises(OverflowError):
            evt.weibull_to_gompertz(WeibullParams(1000.0, 0.1))

    def test_dispatch(self):
        assert evt.to_gompertz("gumbel_min", GumbelMinParams(0, 1)) == GompertzParams(1, 1)
        with pytest.raises(DomainError, match="unknown source"):
            evt.to_gompertz("gev", GumbelMinParams(0, 1))
        with pytest.raises(DomainError, match="needs FrechetParams"):
            evt.to_gompertz("neg_log_frechet", WeibullParams(1, 1))

    @pytest.mark.parametrize("cls,args", [
        (GumbelMinParams, (math.nan, 1)), (GumbelMinParams, (0, 0)),
        (FrechetParams, (0, 1)), (FrechetParams, (1, -1)),
        (WeibullParams, (1, 0)), (WeibullParams, (math.inf, 1)),
    ])
    def test_param_validation(self, cls, args):
        with pytest.raises(DomainError):
            cls(*args)


class TestBasePdf:
    def test_examples(self):
        assert evt.base_pdf("gumbel_min", GumbelMinParams(0, 1), 0.0) == pytest.approx(math.exp(-1), rel=1e-15)
        assert evt.base_pdf("neg_log_frechet", FrechetParams(1, 1), 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
        assert evt.base_pdf("log_weibull", WeibullParams(1, 1), 0.0) == pytest.approx(1.0, rel=1e-15)

    def test_support(self):
        with pytest.raises(DomainError):
            evt.base_pdf("neg_log_frechet", FrechetParams(1, 1), 0.0)
        with pytest.raises(DomainError):
            evt.base_pdf("log_weibull", WeibullParams(1, 1), -1e-12)
        with pytest.raises(DomainError):
            evt.base_pdf("gumbel_min", GumbelMinParams(0, 1), math.inf)

    def test_frechet_near_zero(self):
        # t = z^-a overflows to inf; the density limit is 0, not nan
        assert evt.base_pdf("neg_log_frechet", FrechetParams(2, 1), 1e-200) == 0.0

    @pytest.mark.parametrize("source,params", [
        ("gumbel_min", GumbelMinParams(0.3, 0.7)),
        ("neg_log_frechet", FrechetParams(2.5, 1.2)),
        ("log_weibull", WeibullParams(1.5, 0.8)),
    ])
    def test_quantile_inverts_density(self, source, params):
        # the base quantile must be the inverse of the density's own cdf
        u = np.array([0.1, 0.4, 0.8])
        x = evt.base_quantile(source, params, u)
        lower = -40.0 if source == "gumbel_min" else 1e-12
        for xi, ui in zip(x, u):
            grid = np.linspace(lower, xi, 20001)
            mass = np.trapezoid(evt.base_pdf(source, params, grid), grid)
            assert mass == pytest.approx(ui, abs=1e-6)


class TestChangeOfVariables:
    @given(a=st.floats(0.5, 2.0), r=st.floats(0.5, 2.0))
    @settings(max_examples=25, deadline=None)
    def test_frechet(self, a, r):
        f = FrechetParams(a, r)
        y = np.linspace(-5, 5, 200)
        lhs = evt.transformed_pdf("neg_log_frechet", f, y)
        rhs = evt.gumbel_reparam_pdf(evt.frechet_to_gompertz(f), y)
        ok = rhs > np.finfo(float).tiny
        np.testing.assert_allclose(lhs[ok], rhs[ok], rtol=1e-12)

    @given(k=st.floats(0.5, 2.0), l=st.floats(0.5, 2.0))  # noqa: E741
    @settings(max_examples=25, deadline=None)
    def test_weibull(self, k, l):  # noqa: E741
        w = WeibullParams(k, l)
        y = np.linspace(-5, 5, 200)
        lhs = evt.transformed_pdf("log_weibull", w, y)
        rhs = evt.gumbel_reparam_pdf(evt.weibull_to_gompertz(w), y)
        ok = rhs > np.finfo(float).tiny
        np.testing.assert_allclose(lhs[ok], rhs[ok], rtol=1e-12)

    @pytest.mark.parametrize("b,q", [(1, 1), (0.5, 2), (2, 0.5), (0.25, 0.25), (4, 1.5)])
    def test_truncation_rescales_to_gompertz(self, b, q):
        p = GompertzParams(b, q)
        x = np.linspace(0, 10, 100)
        g = evt.gumbel_reparam_pdf(p, x)
        ok = g > np.finfo(float).tiny
        np.testing.assert_allclose(math.exp(q) * g[ok], pdf(p, x[ok]), rtol=1e-13)

    @pytest.mark.parametrize("b,q", [(1, 1), (0.5, 2), (2, 0.5)])
    def test_truncation_constant(self, b, q):
        p = GompertzParams(b, q)
        res = integrate_semi_infinite(lambda x: evt.gumbel_reparam_pdf(p, x), 0.0,
                                      rel_tol=1e-12, scale=1 / b)
        assert res.value == pytest.approx(math.exp(-q), rel=1e-10)


class TestSampler:
    def test_gumbel_ks(self):
        n = 100_000
        y = np.sort(evt.truncated_transform_sample("gumbel_min", GumbelMinParams(0, 1), n, seed=1))
        assert y.size == n and np.all(y >= 0)
        assert ks_distance(y, lambda t: cdf(GompertzParams(1, 1), t)) < 0.006

    @pytest.mark.parametrize("source,params", [
        ("neg_log_frechet", FrechetParams(2, 1)),
        ("log_weibull", WeibullParams(1.5, 0.8)),
    ])
    def test_bridge_ks(self, source, params):
        n = 50_000
        gp = evt.to_gompertz(source, params)
        y = np.sort(evt.truncated_transform_sample(source, params, n, seed=2))
        assert ks_distance(y, lambda t: cdf(gp, t)) < 1.36 / math.sqrt(n)

    def test_frechet_accepts_x_le_1(self):
        x = evt.base_draws("neg_log_frechet", FrechetParams(2, 1), 10_000, np.random.default_rng(0))
        y = evt.transform("neg_log_frechet", x)
        np.testing.assert_array_equal(y >= 0, x <= 1)

    def test_weibull_accepts_x_ge_1(self):
        x = evt.base_draws("log_weibull", WeibullParams(1, 1), 10_000, np.random.default_rng(0))
        y = evt.transform("log_weibull", x)
        np.testing.assert_array_equal(y >= 0, x >= 1)

    def test_seeded(self):
        g = GumbelMinParams(0, 1)
        a = evt.truncated_transform_sample("gumbel_min", g, 500, seed=9)
        b = evt.truncated_transform_sample("gumbel_min", g, 500, seed=9)
        np.testing.assert_array_equal(a, b)

    def test_small_batch_loops(self):
        y = evt.truncated_transform_sample("gumbel_min", GumbelMinParams(0, 1), 5000, seed=3, batch=64)
        assert y.size == 5000

    def test_rejection_budget(self):
        # q = e^3 ~ 20 gives acceptance ~ 2e-9
        with pytest.raises(RejectionBudgetError):
            evt.truncated_transform_sample("gumbel_min", GumbelMinParams(-3, 1), 10)

    @pytest.mark.parametrize("n", [0, -2, 1.5])
    def test_bad_n(self, n):
        with pytest.raises(DomainError):
            evt.truncated_transform_sample("gumbel_min", GumbelMinParams(0, 1), n)

    def test_open_uniform_never_hits_endpoints(self):
        u = evt._open_uniform(np.random.default_rng(0), 100_000)
        assert u.min() > 0 and u.max() < 1
