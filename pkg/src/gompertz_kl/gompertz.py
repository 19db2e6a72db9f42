"""The two-parameter Gompertz distribution on ``[0, inf)``.

    f(x | b, q) = e^q b q e^{bx} exp(-q e^{bx})
    F(x | b, q) = 1 - e^q exp(-q e^{bx})

``b > 0`` is a rate (inverse units of ``x``) and ``q > 0`` a dimensionless
shape. All density evaluation goes through :func:`log_pdf`; the factor
``e^q exp(-q e^{bx})`` is rewritten as ``exp(-q expm1(bx))`` so that nothing
overflows for large ``q`` and nothing cancels near ``x = 0``.

Functions accept scalars or array-likes and return a float for scalar input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "GompertzParams",
    "Sampler",
    "pdf",
    "log_pdf",
    "cdf",
    "sf",
    "quantile",
    "isf",
    "mode",
    "sample",
    "EXP_OVERFLOW_GUARD",
]

# e^{bx} is only formed for b*x below this; above it the density is exactly 0
EXP_OVERFLOW_GUARD = 700.0


@dataclass(frozen=True)
class GompertzParams:
    """Rate ``b`` and shape ``q`` of a Gompertz distribution."""

    b: float
    q: float

    def __post_init__(self) -> None:
        for name in ("b", "q"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.floating, np.integer))
                    and math.isfinite(value) and value > 0):
                raise DomainError(f"Gompertz parameter {name} must be finite and > 0, got {value!r}")
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "q", float(self.q))


def _support(x, *, name: str = "x") -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    bad = ~np.isfinite(arr) | (arr < 0)
    if np.any(bad):
        offending = float(arr[bad].flat[0]) if arr.ndim else float(arr)
        raise DomainError(f"{name} must be finite and >= 0, got {offending!r}")
    return arr, arr.ndim == 0


def _out(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


def _q_expm1_bx(p: GompertzParams, x: np.ndarray) -> np.ndarray:
    """``q * (e^{bx} - 1)``, +inf where ``b x`` exceeds the overflow guard."""
    bx = p.b * x
    safe = bx < EXP_OVERFLOW_GUARD
    out = np.full_like(bx, np.inf)
    out[safe] = p.q * np.expm1(bx[safe])
    return out


def log_pdf(p: GompertzParams, x):
    """Log-density ``ln b + ln q + b x - q (e^{bx} - 1)``; ``-inf`` past the guard."""
    arr, scalar = _support(x)
    arr = np.atleast_1d(arr)
    with np.errstate(invalid="ignore"):
        out = math.log(p.b) + math.log(p.q) + p.b * arr - _q_expm1_bx(p, arr)
    return _out(out.reshape(()) if scalar else out, scalar)


def pdf(p: GompertzParams, x):
    """Gompertz density, evaluated as ``exp(log_pdf)``."""
    return _out(np.exp(np.asarray(log_pdf(p, x))), np.ndim(x) == 0)


def sf(p: GompertzParams, x):
    """Survival function ``1 - F(x) = exp(-q (e^{bx} - 1))``."""
    arr, scalar = _support(x)
    arr = np.atleast_1d(arr)
    out = np.exp(-_q_expm1_bx(p, arr))
    return _out(out.reshape(()) if scalar else out, scalar)


def cdf(p: GompertzParams, x):
    """Cumulative distribution ``-expm1(-q (e^{bx} - 1))``, exact 0 at ``x = 0``."""
    arr, scalar = _support(x)
    arr = np.atleast_1d(arr)
    out = -np.expm1(-_q_expm1_bx(p, arr))
    return _out(out.reshape(()) if scalar else out, scalar)


def quantile(p: GompertzParams, u):
    """Inverse CDF ``(1/b) ln(1 - ln(1 - u) / q)`` for ``0 <= u < 1``.

    Precision degrades for ``u > 1 - 1e-16`` where ``1 - u`` is no longer
    representable to full relative accuracy.
    """
    arr = np.asarray(u, dtype=float)
    bad = ~np.isfinite(arr) | (arr < 0) | (arr >= 1)
    if np.any(bad):
        offending = float(arr[bad].flat[0]) if arr.ndim else float(arr)
        raise DomainError(f"quantile requires 0 <= u < 1, got {offending!r}")
    out = np.log1p(-np.log1p(-arr) / p.q) / p.b
    return _out(out, arr.ndim == 0)


def isf(p: GompertzParams, s):
    """Inverse survival function, ``(1/b) ln(1 - ln(s) / q)`` for ``0 < s <= 1``.

    Well conditioned in the upper tail where ``quantile`` runs out of digits.
    """
    arr = np.asarray(s, dtype=float)
    bad = ~np.isfinite(arr) | (arr <= 0) | (arr > 1)
    if np.any(bad):
        offending = float(arr[bad].flat[0]) if arr.ndim else float(arr)
        raise DomainError(f"isf requires 0 < s <= 1, got {offending!r}")
    out = np.log1p(-np.log(arr) / p.q) / p.b
    return _out(out, arr.ndim == 0)


def mode(p: GompertzParams) -> float:
    """Mode of the density: 0 for ``q >= 1``, otherwise ``ln(1/q) / b``."""
    if p.q >= 1.0:
        return 0.0
    return -math.log(p.q) / p.b


@dataclass
class Sampler:
    """Seeded inverse-CDF sampler. Not safe to share between threads."""

    params: GompertzParams
    seed: int | None = 42
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.rng = np.random.default_rng(self.seed)

    def sample(self, n: int) -> np.ndarray:
        if int(n) != n or n < 1:
            raise DomainError(f"sample size must be a positive integer, got {n!r}")
        u = self.rng.random(int(n))
        return quantile(self.params, u)


def sample(s: Sampler, n: int) -> np.ndarray:
    """Draw ``n`` values from ``s`` (advances its generator)."""
    return s.sample(n)
