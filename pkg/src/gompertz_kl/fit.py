"""Maximum-likelihood fit of (b, q) by profiling out q.

For fixed ``b`` the score in ``q`` vanishes at

    q_hat(b) = n / (sum_i e^{b x_i} - n) = 1 / mean(expm1(b x_i)),

and substituting back leaves a one-dimensional profile

    l_p(b) = n [ln b - ln mean(expm1(b x_i)) + b mean(x) - 1]

which is maximised over ``ln b`` with Brent's method after a geometric
bracket search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from .errors import ConvergenceError, DegenerateDataError, DomainError
from .gompertz import EXP_OVERFLOW_GUARD, GompertzParams, log_pdf

__all__ = [
    "FitConfig",
    "FitResult",
    "mle_fit",
    "log_likelihood",
    "profile_log_likelihood",
    "profile_q",
]


@dataclass(frozen=True)
class FitConfig:
    expand_factor: float = 4.0
    max_expansions: int = 60
    xtol: float = 1e-10
    max_iter: int = 500


@dataclass(frozen=True)
class FitResult:
    params: GompertzParams
    log_likelihood: float
    iterations: int
    converged: bool
    bracket: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "params": {"b": self.params.b, "q": self.params.q},
            "log_likelihood": self.log_likelihood,
            "iterations": self.iterations,
            "converged": self.converged,
            "bracket": list(self.bracket),
        }


def _validate(data) -> np.ndarray:
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 2:
        raise DomainError(f"need at least 2 observations, got {x.size}")
    bad = ~np.isfinite(x) | (x < 0)
    if np.any(bad):
        idx = int(np.flatnonzero(bad)[0])
        raise DomainError(f"observation {idx} must be finite and >= 0, got {x[idx]!r}")
    if not np.any(x > 0):
        raise DegenerateDataError("all observations are 0; sum(e^{b x}) - n vanishes for every b")
    return x


def _log_mean_expm1(x: np.ndarray, b: float) -> float:
    z = b * x
    if z.max() < EXP_OVERFLOW_GUARD:
        d = float(np.mean(np.expm1(z)))
        return math.log(d) if d > 0 else -math.inf
    # ln expm1(z) = z + ln(1 - e^{-z}); zeros contribute nothing
    pos = z[z > 0]
    terms = np.where(pos > 1.0, pos + np.log1p(-np.exp(-pos)), np.log(np.expm1(np.minimum(pos, 1.0))))
    return float(logsumexp(terms)) - math.log(x.size)


def profile_q(data, b: float) -> float:
    """Conditional maximiser ``q_hat(b)``."""
    x = _validate(data)
    return math.exp(-_log_mean_expm1(x, b))


def profile_log_likelihood(data, b: float) -> float:
    x = np.asarray(data, dtype=float)
    if not b > 0:
        return -math.inf
    log_d = _log_mean_expm1(x, b)
    if not math.isfinite(log_d):
        return -math.inf
    return x.size * (math.log(b) - log_d + b * float(np.mean(x)) - 1.0)


def log_likelihood(params: GompertzParams, data) -> float:
    """Full log-likelihood ``sum_i ln f(x_i | b, q)``."""
    return float(np.sum(log_pdf(params, np.asarray(data, dtype=float))))


def _bracket(objective, t0: float, step: float, max_expansions: int):
    lo, mid, hi = t0 - step, t0, t0 + step
    f_lo, f_mid, f_hi = objective(lo), objective(mid), objective(hi)
    expansions = 0
    while not (f_mid < f_lo and f_mid < f_hi):
        if expansions >= max_expansions:
            raise ConvergenceError(
                f"no interior maximum of the profile likelihood found after {max_expansions} "
                f"bracket expansions (b in [{math.exp(lo):.3g}, {math.exp(hi):.3g}])"
            )
        if f_lo < f_hi:
            lo, mid, hi = lo - step, lo, mid
            f_lo, f_mid, f_hi = objective(lo), f_lo, f_mid
        else:
            lo, mid, hi = mid, hi, hi + step
            f_lo, f_mid, f_hi = f_mid, f_hi, objective(hi)
        expansions += 1
    return (lo, mid, hi), expansions


def mle_fit(data, config: FitConfig = FitConfig()) -> FitResult:
    """Profile-likelihood MLE of Gompertz ``(b, q)`` from non-negative data.

    Raises
    ------
    DomainError
        Fewer than two points, or a negative / non-finite observation.
    DegenerateDataError
        Every observation is 0.
    ConvergenceError
        No bracket found within ``config.max_expansions`` steps, or Brent's
        method hit its iteration cap.
    """
    x = _validate(data)
    n = x.size

    def objective(t: float) -> float:
        value = profile_log_likelihood(x, math.exp(t))
        # minimise -l_p / n; -inf likelihood becomes a wall
        return -value / n if math.isfinite(value) else math.inf

    t0 = -math.log(float(np.mean(x)))
    (lo, mid, hi), expansions = _bracket(objective, t0, math.log(config.expand_factor),
                                         config.max_expansions)
    res = minimize_scalar(
        objective,
        bracket=(lo, mid, hi),
        method="brent",
        options={"xtol": config.xtol, "maxiter": config.max_iter},
    )
    if not res.success:
        raise ConvergenceError(f"Brent search did not converge: {res.message}")
    b_hat = math.exp(float(res.x))
    params = GompertzParams(b=b_hat, q=profile_q(x, b_hat))
    return FitResult(
        params=params,
        log_likelihood=log_likelihood(params, x),
        iterations=int(res.nit) + expansions,
        converged=bool(res.success),
        bracket=(math.exp(lo), math.exp(hi)),
    )
