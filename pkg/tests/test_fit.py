import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gompertz_kl.errors import ConvergenceError, DegenerateDataError, DomainError
from gompertz_kl.fit import (
    FitConfig,
    log_likelihood,
    mle_fit,
    profile_log_likelihood,
    profile_q,
)
from gompertz_kl.gompertz import GompertzParams, Sampler


def _draw(b, q, n, seed):
    return Sampler(GompertzParams(b, q), seed=seed).sample(n)


@pytest.fixture(scope="module")
def data_11():
    return _draw(1.0, 1.0, 100_000, seed=1)


@pytest.fixture(scope="module")
def fit_11(data_11):
    return mle_fit(data_11)


@pytest.mark.parametrize("b,q,seed", [(1.0, 1.0, 1), (2.0, 0.5, 2)])
def test_recovery(b, q, seed):
    res = mle_fit(_draw(b, q, 100_000, seed))
    assert res.converged
    assert res.params.b == pytest.approx(b, rel=0.05)
    assert res.params.q == pytest.approx(q, rel=0.05)
    assert math.isfinite(res.log_likelihood)


def test_profile_q_is_conditional_max(data_11, fit_11):
    p = fit_11.params
    base = log_likelihood(p, data_11)
    for f in (1 - 1e-6, 1 + 1e-6):
        assert log_likelihood(GompertzParams(p.b, p.q * f), data_11) - base <= 1e-9


def test_stationary_in_b(data_11, fit_11):
    b = fit_11.params.b
    h = 1e-5 * b
    slope = (profile_log_likelihood(data_11, b + h) - profile_log_likelihood(data_11, b - h)) / (2 * h)
    assert abs(slope) < 1e-4 * data_11.size


def test_profile_matches_full_likelihood(data_11):
    for b in (0.5, 1.0, 2.0):
        q = profile_q(data_11, b)
        assert profile_log_likelihood(data_11, b) == pytest.approx(
            log_likelihood(GompertzParams(b, q), data_11), rel=1e-10)


def test_reported_likelihood(data_11, fit_11):
    assert fit_11.log_likelihood == pytest.approx(log_likelihood(fit_11.params, data_11), rel=1e-14)
    lo, hi = fit_11.bracket
    assert lo < fit_11.params.b < hi


def test_scale_equivariance():
    x = _draw(1.3, 0.8, 20_000, seed=5)
    base = mle_fit(x)
    scaled = mle_fit(2.0 * x)
    assert scaled.params.b == pytest.approx(base.params.b / 2.0, rel=1e-3)
    assert scaled.params.q == pytest.approx(base.params.q, rel=1e-3)


def test_degenerate_zeros():
    with pytest.raises(DegenerateDataError):
        mle_fit([0.0, 0.0])


@pytest.mark.parametrize("data", [[1.0], [], [1.0, -0.5], [1.0, math.nan], [math.inf, 1.0]])
def test_bad_data(data):
    with pytest.raises(DomainError):
        mle_fit(data)


def test_profile_guards():
    x = np.array([0.5, 1.0, 2.0])
    assert profile_log_likelihood(x, 0.0) == -math.inf
    # b x well past the overflow guard stays finite through log-sum-exp
    assert math.isfinite(profile_log_likelihood(x, 1000.0))


def test_bracket_cap():
    # one expansion is not enough to bracket a rate far from 1 / mean
    x = _draw(1.0, 0.01, 2000, seed=4)
    with pytest.raises(ConvergenceError, match="bracket"):
        mle_fit(x, FitConfig(expand_factor=1.0001, max_expansions=1))


def test_as_dict(fit_11):
    d = fit_11.as_dict()
    assert set(d) == {"params", "log_likelihood", "iterations", "converged", "bracket"}
    assert set(d["params"]) == {"b", "q"}
    assert len(d["bracket"]) == 2


@given(b=st.floats(0.2, 5.0), q=st.floats(0.2, 5.0), seed=st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_fit_beats_truth(b, q, seed):
    # the maximiser can never score below the generating parameters
    x = _draw(b, q, 500, seed)
    res = mle_fit(x)
    assert res.log_likelihood >= log_likelihood(GompertzParams(b, q), x) - 1e-6
