"""Growth/decline reading of the Gompertz density.

Substituting ``e^q exp(-q e^{bx}) = 1 - F(x)`` into the density gives

    f(x) = b q e^{bx} - b q e^{bx} F(x) = f_g(x) - f_d(x),

a growth propensity ``f_g`` minus a decline propensity ``f_d`` that catches up
with it as ``F`` rises from 0 to 1.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .gompertz import EXP_OVERFLOW_GUARD, GompertzParams, cdf, sf

__all__ = ["DecompositionPoint", "decompose", "growth_propensity"]


@dataclass(frozen=True)
class DecompositionPoint:
    x: float
    f_g: float
    f_d: float
    f: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def growth_propensity(p: GompertzParams, x) -> np.ndarray:
    """``f_g(x) = exp(ln b + ln q + b x)``; +inf past the overflow guard."""
    x = np.asarray(x, dtype=float)
    log_fg = math.log(p.b) + math.log(p.q) + p.b * x
    out = np.full_like(log_fg, np.inf)
    safe = p.b * x < EXP_OVERFLOW_GUARD
    out[safe] = np.exp(log_fg[safe])
    return out


def decompose(p: GompertzParams, xs) -> list[DecompositionPoint]:
    """Evaluate ``f_g``, ``f_d`` and ``f = f_g - f_d`` on a grid of ``x >= 0``.

    ``f`` is formed as ``f_g * S`` with the survival function ``S = 1 - F``
    evaluated directly, which avoids the cancellation of ``f_g - f_d`` once
    ``F`` is near 1.
    Past the overflow guard ``f_g`` and ``f_d`` are infinite and ``f`` is 0.
    """
    arr = np.atleast_1d(np.asarray(xs, dtype=float))
    bad = ~np.isfinite(arr) | (arr < 0)
    if np.any(bad):
        raise DomainError(f"decompose needs finite x >= 0, got {float(arr[bad][0])!r}")
    fg = growth_propensity(p, arr)
    fd = fg * cdf(p, arr)
    with np.errstate(invalid="ignore"):
        f = np.where(np.isfinite(fg), fg * sf(p, arr), 0.0)
    return [
        DecompositionPoint(float(x), float(g), float(d), float(v))
        for x, g, d, v in zip(arr, fg, fd, f)
    ]
