"""Kullback-Leibler divergence between two Gompertz distributions.

Writing ``r = b2 / b1``, the divergence ``KL(F1 || F2)`` splits into four
additive pieces:

    term_const  = ln(e^{q1} b1 q1 / (e^{q2} b2 q2))
    term_ei     = e^{q1} (r - 1) Ei(-q1)
    term_gamma  = e^{q1} q2 q1^{-r} Gamma(r + 1, q1)
    term_linear = -(q1 + 1)

Each piece comes from one integral after substituting ``y = e^{b1 x}``; the
three ``term_integral_*`` helpers expose those integrals so they can be
checked against quadrature on their own.

For ``q1 > LOG_SPACE_THRESHOLD`` the factor ``e^{q1}`` is folded into the
log-space companions of the special functions instead of being formed, since
it overflows near ``q1 = 709`` while the products stay finite.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .gompertz import GompertzParams, log_pdf
from .numeric_oracle import QuadratureResult, integrate_semi_infinite
from .special_fn import (
    DEFAULT_CONFIG,
    SpecialFnConfig,
    exp_integral_ei,
    log_abs_ei,
    log_upper_incomplete_gamma,
    upper_incomplete_gamma,
)

__all__ = [
    "KLBreakdown",
    "LOG_SPACE_THRESHOLD",
    "kl_closed_form",
    "kl_numeric",
    "term_integral_ln",
    "term_integral_pow",
    "term_integral_linear",
]

LOG_SPACE_THRESHOLD = 500.0
_EXP_MAX = 709.0


@dataclass(frozen=True)
class KLBreakdown:
    """The four additive terms of the closed form and their sum."""

    term_const: float
    term_ei: float
    term_gamma: float
    term_linear: float
    total: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


def _exp_checked(log_value: float, what: str) -> float:
    if log_value > _EXP_MAX:
        raise OverflowError(f"{what} overflows (log magnitude {log_value:.6g})")
    return math.exp(log_value)


def _ei_term(q1: float, r: float, cfg: SpecialFnConfig) -> float:
    if r == 1.0:
        return 0.0
    if q1 <= LOG_SPACE_THRESHOLD:
        return math.exp(q1) * (r - 1.0) * exp_integral_ei(-q1, cfg)
    # e^{q1} |Ei(-q1)| straight from the scaled companion; Ei(-q1) < 0
    return -(r - 1.0) * math.exp(log_abs_ei(-q1, cfg, scaled=True))


def _gamma_term(q1: float, q2: float, r: float, cfg: SpecialFnConfig) -> float:
    s = r + 1.0
    log_factor = q1 - r * math.log(q1)
    if q1 <= LOG_SPACE_THRESHOLD and abs(log_factor) < _EXP_MAX:
        g = upper_incomplete_gamma(s, q1, cfg)
        if 0.0 < g < math.inf:
            value = q2 * math.exp(log_factor) * g
            if math.isfinite(value):
                return value
    log_value = math.log(q2) - r * math.log(q1) + log_upper_incomplete_gamma(s, q1, cfg, scaled=True)
    return _exp_checked(log_value, "incomplete-gamma term")


def kl_closed_form(
    p1: GompertzParams, p2: GompertzParams, config: SpecialFnConfig = DEFAULT_CONFIG
) -> KLBreakdown:
    """Closed-form ``KL(p1 || p2)`` returned term by term.

    Raises ``OverflowError`` when the divergence itself is beyond double range.
    """
    b1, q1, b2, q2 = p1.b, p1.q, p2.b, p2.q
    r = b2 / b1
    term_const = math.fsum((q1, -q2, math.log(b1), -math.log(b2), math.log(q1), -math.log(q2)))
    term_ei = _ei_term(q1, r, config)
    term_gamma = _gamma_term(q1, q2, r, config)
    term_linear = -(q1 + 1.0)
    total = math.fsum((term_const, term_ei, term_gamma, term_linear))
    return KLBreakdown(term_const, term_ei, term_gamma, term_linear, total)


def kl_numeric(p1: GompertzParams, p2: GompertzParams, tol: float = 1e-10) -> QuadratureResult:
    """Quadrature of ``f1 (ln f1 - ln f2)`` over ``[0, inf)``.

    Converges once the error estimate is below ``tol * max(1, |KL|)``.
    Where ``f1`` underflows to 0 the integrand is taken as 0.
    """
    if not (1e-13 <= tol <= 1e-6):
        raise DomainError(f"tol must lie in [1e-13, 1e-6], got {tol!r}")

    def integrand(x: np.ndarray) -> np.ndarray:
        lp1 = log_pdf(p1, x)
        lp2 = log_pdf(p2, x)
        f1 = np.exp(lp1)
        live = f1 > 0
        out = np.zeros_like(f1)
        out[live] = f1[live] * (lp1[live] - lp2[live])
        return out

    return integrate_semi_infinite(integrand, 0.0, rel_tol=tol, abs_tol=tol, scale=1.0 / p1.b)


def term_integral_ln(q1: float, config: SpecialFnConfig = DEFAULT_CONFIG) -> float:
    """``int_1^inf ln(y) e^{-q1 y} dy = -Ei(-q1) / q1``."""
    q1 = _positive("q1", q1)
    return -exp_integral_ei(-q1, config) / q1


def term_integral_pow(ratio: float, q1: float, config: SpecialFnConfig = DEFAULT_CONFIG) -> float:
    """``int_1^inf y^ratio e^{-q1 y} dy = q1^{-(ratio+1)} Gamma(ratio + 1, q1)``; ``ratio >= 0``."""
    ratio = float(ratio)
    if not (math.isfinite(ratio) and ratio >= 0):
        raise DomainError(f"ratio must be finite and >= 0, got {ratio!r}")
    q1 = _positive("q1", q1)
    s = ratio + 1.0
    log_value = -s * math.log(q1) + log_upper_incomplete_gamma(s, q1, config)
    if abs(log_value) < _EXP_MAX and abs(s * math.log(q1)) < _EXP_MAX:
        g = upper_incomplete_gamma(s, q1, config)
        if g > 0:
            return q1 ** (-s) * g
    return _exp_checked(log_value, "power integral")


def term_integral_linear(q1: float) -> float:
    """``int_1^inf y e^{-q1 y} dy = e^{-q1} (q1 + 1) / q1^2``."""
    q1 = _positive("q1", q1)
    return math.exp(-q1) * (q1 + 1.0) / (q1 * q1)
