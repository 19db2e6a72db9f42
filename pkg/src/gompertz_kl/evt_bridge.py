"""Gompertz as a truncated extreme value distribution.

Three routes lead to a Gompertz(b, q) law on ``[0, inf)``:

* Gumbel-min(m, s) left-truncated at 0, with ``b = 1/s`` and ``q = exp(-m/s)``;
* the negative log of a Frechet(a, r) variate, truncated at 0, with
  ``b = a`` and ``q = r**a``;
* the log of a Weibull(k, l) variate, truncated at 0, with ``b = k`` and
  ``q = l**(-k)``.

The samplers here draw from the *base* distribution through its own inverse
CDF, transform, and reject negatives. They never call the Gompertz quantile,
so agreement with :mod:`gompertz_kl.gompertz` is a genuine check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .errors import DomainError, RejectionBudgetError
from .gompertz import GompertzParams

__all__ = [
    "GumbelMinParams",
    "FrechetParams",
    "WeibullParams",
    "EVTParams",
    "Source",
    "SOURCES",
    "gumbel_to_gompertz",
    "frechet_to_gompertz",
    "weibull_to_gompertz",
    "to_gompertz",
    "base_pdf",
    "base_quantile",
    "base_draws",
    "transform",
    "transformed_pdf",
    "gumbel_reparam_pdf",
    "truncated_transform_sample",
    "MIN_ACCEPTANCE",
]

Source = Literal["gumbel_min", "neg_log_frechet", "log_weibull"]
SOURCES: tuple[str, ...] = ("gumbel_min", "neg_log_frechet", "log_weibull")

MIN_ACCEPTANCE = 1e-6
_EXP_LIMIT = 700.0


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


@dataclass(frozen=True)
class GumbelMinParams:
    m: float
    s: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.m):
            raise DomainError(f"Gumbel location m must be finite, got {self.m!r}")
        _positive("Gumbel scale s", self.s)


@dataclass(frozen=True)
class FrechetParams:
    a: float
    r: float

    def __post_init__(self) -> None:
        _positive("Frechet shape a", self.a)
        _positive("Frechet scale r", self.r)


@dataclass(frozen=True)
class WeibullParams:
    k: float
    l: float  # noqa: E741

    def __post_init__(self) -> None:
        _positive("Weibull shape k", self.k)
        _positive("Weibull scale l", self.l)


EVTParams = Union[GumbelMinParams, FrechetParams, WeibullParams]

_PARAM_TYPE = {
    "gumbel_min": GumbelMinParams,
    "neg_log_frechet": FrechetParams,
    "log_weibull": WeibullParams,
}


# -- parameter maps ----------------------------------------------------------


def gumbel_to_gompertz(g: GumbelMinParams) -> GompertzParams:
    """``b = 1/s``, ``q = exp(-m/s)``."""
    exponent = -g.m / g.s
    if exponent > _EXP_LIMIT:
        raise OverflowError(f"q = exp(-m/s) overflows for -m/s = {exponent!r}")
    return GompertzParams(b=1.0 / g.s, q=math.exp(exponent))


def frechet_to_gompertz(f: FrechetParams) -> GompertzParams:
    """``b = a``, ``q = r**a``."""
    log_q = f.a * math.log(f.r)
    if not -_EXP_LIMIT < log_q < _EXP_LIMIT:
        raise OverflowError(f"q = r**a is out of floating range (ln q = {log_q!r})")
    return GompertzParams(b=f.a, q=f.r ** f.a)


def weibull_to_gompertz(w: WeibullParams) -> GompertzParams:
    """``b = k``, ``q = l**(-k)``."""
    log_q = -w.k * math.log(w.l)
    if not -_EXP_LIMIT < log_q < _EXP_LIMIT:
        raise OverflowError(f"q = l**(-k) is out of floating range (ln q = {log_q!r})")
    return GompertzParams(b=w.k, q=w.l ** (-w.k))


def _check_source(source: str, params) -> None:
    if source not in _PARAM_TYPE:
        raise DomainError(f"unknown source {source!r}; expected one of {SOURCES}")
    if not isinstance(params, _PARAM_TYPE[source]):
        raise DomainError(
            f"source {source!r} needs {_PARAM_TYPE[source].__name__}, got {type(params).__name__}"
        )


def to_gompertz(source: Source, params: EVTParams) -> GompertzParams:
    """Dispatch to the parameter map for ``source``."""
    _check_source(source, params)
    if source == "gumbel_min":
        return gumbel_to_gompertz(params)
    if source == "neg_log_frechet":
        return frechet_to_gompertz(params)
    return weibull_to_gompertz(params)


# -- base densities ----------------------------------------------------------


def base_pdf(source: Source, params: EVTParams, x):
    """Density of the untransformed base distribution.

    Gumbel-min lives on the real line, Frechet on ``(0, inf)`` and Weibull on
    ``[0, inf)``; points outside the support raise :class:`DomainError`.
    """
    _check_source(source, params)
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)):
        raise DomainError(f"base_pdf needs finite x, got {float(arr[~np.isfinite(arr)].flat[0])!r}")
    with np.errstate(over="ignore", invalid="ignore"):
        if source == "gumbel_min":
            z = (arr - params.m) / params.s
            out = np.exp(z - np.exp(z)) / params.s
        elif source == "neg_log_frechet":
            if np.any(arr <= 0):
                raise DomainError(f"Frechet support is (0, inf), got {float(arr[arr <= 0].flat[0])!r}")
            z = arr / params.r
            t = z ** -params.a
            out = (params.a / params.r) * (t / z) * np.exp(-t)
            # x -> 0+: the exponential wins; avoid inf * 0
            out = np.where(np.isinf(t), 0.0, out)
        else:
            if np.any(arr < 0):
                raise DomainError(f"Weibull support is [0, inf), got {float(arr[arr < 0].flat[0])!r}")
            z = arr / params.l
            out = (params.k / params.l) * z ** (params.k - 1.0) * np.exp(-(z ** params.k))
    return float(out) if out.ndim == 0 else out


def base_quantile(source: Source, params: EVTParams, u):
    """Inverse CDF of the base distribution for ``u`` in ``(0, 1)``."""
    _check_source(source, params)
    u = np.asarray(u, dtype=float)
    if source == "gumbel_min":
        return params.m + params.s * np.log(-np.log1p(-u))
    if source == "neg_log_frechet":
        return params.r * (-np.log(u)) ** (-1.0 / params.a)
    return params.l * (-np.log1p(-u)) ** (1.0 / params.k)


def _open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    # 53-bit grid shifted by half a step: never 0, never 1
    return (rng.integers(0, 2**53, size=n, dtype=np.int64) + 0.5) / 2.0**53


def base_draws(source: Source, params: EVTParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` draws from the base distribution by inverting its own CDF."""
    return base_quantile(source, params, _open_uniform(rng, n))


def transform(source: Source, x):
    """The monotone map taking base draws to the Gompertz scale (before truncation)."""
    x = np.asarray(x, dtype=float)
    if source == "gumbel_min":
        return x
    with np.errstate(divide="ignore"):
        if source == "neg_log_frechet":
            return -np.log(x)
        if source == "log_weibull":
            return np.log(x)
    raise DomainError(f"unknown source {source!r}; expected one of {SOURCES}")


def transformed_pdf(source: Source, params: EVTParams, y):
    """Density of ``Y = h(X)`` by change of variables, ``f_X(h^{-1}(y)) |d h^{-1}/dy|``."""
    y = np.asarray(y, dtype=float)
    if source == "gumbel_min":
        return base_pdf(source, params, y)
    if source == "neg_log_frechet":
        x = np.exp(-y)
    else:
        x = np.exp(y)
    # |dx/dy| = x for both log maps
    return base_pdf(source, params, x) * x


def gumbel_reparam_pdf(p: GompertzParams, y):
    """Gumbel-min density in Gompertz coordinates, ``b q e^{by} exp(-q e^{by})``, on the real line."""
    y = np.asarray(y, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        eby = np.exp(p.b * y)
        out = p.b * p.q * eby * np.exp(-p.q * eby)
    out = np.where(np.isfinite(eby), out, 0.0)
    return float(out) if out.ndim == 0 else out


# -- rejection sampler -------------------------------------------------------


def truncated_transform_sample(
    source: Source,
    params: EVTParams,
    n: int,
    seed: int | np.random.Generator | None = 0,
    *,
    batch: int | None = None,
) -> np.ndarray:
    """Draw ``n`` values whose law is Gompertz under the parameter map of ``source``.

    Base variates are transformed and everything below 0 is rejected; the
    expected acceptance rate is ``exp(-q)``. Raises
    :class:`RejectionBudgetError` when that rate is below ``MIN_ACCEPTANCE``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    gp = to_gompertz(source, params)
    accept = math.exp(-gp.q)
    if accept < MIN_ACCEPTANCE:
        raise RejectionBudgetError(
            f"expected acceptance exp(-q) = {accept:.3g} is below {MIN_ACCEPTANCE:g} (q = {gp.q:.6g})"
        )
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if batch is None:
        batch = max(1024, int(1.2 * n / accept))
    chunks: list[np.ndarray] = []
    got = 0
    while got < n:
        y = transform(source, base_draws(source, params, batch, rng))
        kept = y[(y >= 0) & np.isfinite(y)]
        chunks.append(kept)
        got += kept.size
    return np.concatenate(chunks)[:n]
