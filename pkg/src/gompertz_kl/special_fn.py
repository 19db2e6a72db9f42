"""Exponential integral and upper incomplete gamma function.

Only the pieces the Gompertz KL divergence needs are provided:

* ``Ei(x)`` for ``x < 0``, evaluated through ``E1(-x)``; a power series
  covers ``-x <= 1`` and a modified Lentz continued fraction covers the rest.
* ``Gamma(s, x)`` for ``s, x > 0``; the lower series is used when
  ``x < s + 1`` and the Legendre continued fraction otherwise.
* ``ln Gamma(s)`` through an upward shift into the Stirling series.

Log-space companions (``log_abs_ei`` and ``log_upper_incomplete_gamma``) stay
finite where the plain values underflow, which is what callers multiplying by
``exp(q)`` need for large ``q``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = [
    "SpecialFnConfig",
    "DEFAULT_CONFIG",
    "exp_integral_ei",
    "exp_integral_e1",
    "upper_incomplete_gamma",
    "log_gamma",
    "log_abs_ei",
    "log_upper_incomplete_gamma",
]

EULER_GAMMA = 0.57721566490153286061
HALF_LOG_2PI = 0.91893853320467274178
# smallest positive normal double and its log; values below are flushed to 0
TINY = sys.float_info.min
LOG_TINY = math.log(TINY)
# Lentz guard against zero denominators
FPMIN = 1e-300

# B_{2k} / (2k (2k - 1)) for k = 1..8
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 12.0

# ln 2 split so that e * _LN2_HI is exact for |e| < 2**11
_LN2_HI = 0.6931471803691238
_LN2_LO = 1.9082149292705877e-10


@dataclass(frozen=True)
class SpecialFnConfig:
    """Tolerance and iteration cap shared by the series and continued fractions."""

    rel_tol: float = 1e-14
    max_iter: int = 500

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1e-6):
            raise ValueError(f"rel_tol must lie in (0, 1e-6), got {self.rel_tol!r}")
        if self.max_iter < 50:
            raise ValueError(f"max_iter must be >= 50, got {self.max_iter!r}")


DEFAULT_CONFIG = SpecialFnConfig()


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


# -- log-gamma ---------------------------------------------------------------


def _split(a: float) -> tuple[float, float]:
    # Veltkamp split into two 26-bit halves
    c = 134217729.0 * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    # Dekker's exact product: a * b == p + e
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _log_parts(x: float) -> tuple[float, float]:
    """Return ``(hi, lo)`` with ``ln x = hi + lo`` carried beyond double precision."""
    m, e = math.frexp(x)
    # m in [0.5, 1); keep ln m small in magnitude
    if m < 0.7071067811865476:
        m *= 2.0
        e -= 1
    return e * _LN2_HI, e * _LN2_LO + math.log(m)


def _log_gamma_stirling(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING_COEFFS):
        series = series * inv2 + c
    series *= inv
    # (x - 1/2) ln x accumulated exactly, then summed with fsum
    log_hi, log_lo = _log_parts(x)
    xm = x - 0.5
    p1, e1 = _two_prod(xm, log_hi)
    p2, e2 = _two_prod(xm, log_lo)
    return math.fsum((p1, e1, p2, e2, -x, HALF_LOG_2PI, series))


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``.

    Arguments below 12 are shifted upward, ``ln G(x) = ln G(x + n) - ln(x (x+1) ... (x+n-1))``,
    and the Stirling series is summed at ``x + n``.
    """
    x = _require_finite("x", x)
    if x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if x >= _STIRLING_MIN:
        return _log_gamma_stirling(x)
    prod = 1.0
    z = x
    while z < _STIRLING_MIN:
        prod *= z
        z += 1.0
    return _log_gamma_stirling(z) - math.log(prod)


# -- exponential integral ----------------------------------------------------


def _e1_series(z: float, cfg: SpecialFnConfig) -> float:
    # E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
    term = 1.0
    total = 0.0
    for k in range(1, cfg.max_iter + 1):
        term *= -z / k
        contrib = term / k
        total += contrib
        if abs(contrib) <= abs(total) * cfg.rel_tol:
            return -EULER_GAMMA - math.log(z) - total
    raise ConvergenceError(f"E1 series did not converge for z={z!r} in {cfg.max_iter} terms")


def _e1_cf(z: float, cfg: SpecialFnConfig) -> float:
    # E1(z) = exp(-z) * h, h from the even contraction of the continued fraction
    b = z + 1.0
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, cfg.max_iter + 1):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= cfg.rel_tol:
            return h
    raise ConvergenceError(f"E1 continued fraction did not converge for z={z!r}")


def _check_e1_arg(z: float) -> float:
    z = _require_finite("z", z)
    if z <= 0.0:
        raise DomainError(f"E1 is only provided for z > 0, got {z!r}")
    return z


def exp_integral_e1(z: float, config: SpecialFnConfig = DEFAULT_CONFIG) -> float:
    """``E1(z) = int_z^inf e^{-t} / t dt`` for ``z > 0``; flushes to 0 on underflow."""
    z = _check_e1_arg(z)
    if z <= 1.0:
        return _e1_series(z, config)
    log_val = -z + math.log(_e1_cf(z, config))
    return math.exp(log_val) if log_val >= LOG_TINY else 0.0


def exp_integral_ei(x: float, config: SpecialFnConfig = DEFAULT_CONFIG) -> float:
    """Exponential integral ``Ei(x)`` on the negative half-line.

    Parameters
    ----------
    x : float
        Strictly negative, finite argument.
    config : SpecialFnConfig, optional
        Series / continued fraction tolerance and iteration cap.

    Returns
    -------
    float
        ``Ei(x) = -E1(-x)``, which is negative. Returns ``-0.0`` once the
        magnitude drops below the smallest normal double.

    Raises
    ------
    DomainError
        If ``x >= 0`` or ``x`` is not finite.
    """
    x = _require_finite("x", x)
    if x >= 0.0:
        raise DomainError(f"exp_integral_ei is only defined here for x < 0, got {x!r}")
    return -exp_integral_e1(-x, config)


def log_abs_ei(x: float, config: SpecialFnConfig = DEFAULT_CONFIG, *, scaled: bool = False) -> float:
    """``ln |Ei(x)|`` for ``x < 0``, finite even where ``Ei(x)`` underflows.

    With ``scaled=True`` returns ``ln(e^{-x} |Ei(x)|)``; on the continued
    fraction branch this never forms the large ``-x`` term at all.
    """
    x = _require_finite("x", x)
    if x >= 0.0:
        raise DomainError(f"log_abs_ei is only defined here for x < 0, got {x!r}")
    z = -x
    if z <= 1.0:
        val = math.log(_e1_series(z, config))
        return val + z if scaled else val
    log_h = math.log(_e1_cf(z, config))
    return log_h if scaled else log_h - z


# -- upper incomplete gamma --------------------------------------------------


def _check_gamma_args(s: float, x: float) -> tuple[float, float]:
    s = _require_finite("s", s)
    x = _require_finite("x", x)
    if s <= 0.0:
        raise DomainError(f"upper_incomplete_gamma requires s > 0, got s={s!r}")
    if x <= 0.0:
        raise DomainError(f"upper_incomplete_gamma requires x > 0, got x={x!r}")
    return s, x


def _lower_series_sum(s: float, x: float, cfg: SpecialFnConfig) -> float:
    # gamma(s, x) = x^s e^{-x} * sum_{n>=0} x^n / (s (s+1) ... (s+n))
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(cfg.max_iter):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) <= abs(total) * cfg.rel_tol:
            return total
    raise ConvergenceError(
        f"incomplete gamma series did not converge for s={s!r}, x={x!r} in {cfg.max_iter} terms"
    )


def _upper_cf(s: float, x: float, cfg: SpecialFnConfig) -> float:
    # Gamma(s, x) = x^s e^{-x} * h, modified Lentz
    b = x + 1.0 - s
    c = 1.0 / FPMIN
    d = 1.0 / b if abs(b) >= FPMIN else 1.0 / FPMIN
    h = d
    for i in range(1, cfg.max_iter + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) <= cfg.rel_tol:
            return h
    raise ConvergenceError(
        f"incomplete gamma continued fraction did not converge for s={s!r}, x={x!r}"
    )


def log_upper_incomplete_gamma(
    s: float, x: float, config: SpecialFnConfig = DEFAULT_CONFIG, *, scaled: bool = False
) -> float:
    """``ln Gamma(s, x)``; stays finite where ``Gamma(s, x)`` itself underflows.

    With ``scaled=True`` returns ``ln(e^x Gamma(s, x))``.
    """
    s, x = _check_gamma_args(s, x)
    if x < s + 1.0:
        lg = log_gamma(s)
        # P(s, x) = gamma(s, x) / Gamma(s), then Gamma(s, x) = Gamma(s) (1 - P)
        p = math.exp(s * math.log(x) - x - lg) * _lower_series_sum(s, x, config)
        val = lg + math.log1p(-p)
        return val + x if scaled else val
    log_rest = s * math.log(x) + math.log(_upper_cf(s, x, config))
    return log_rest if scaled else log_rest - x


def upper_incomplete_gamma(s: float, x: float, config: SpecialFnConfig = DEFAULT_CONFIG) -> float:
    """Upper incomplete gamma ``Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt``.

    Values below the smallest normal double are returned as 0. Raises
    :class:`DomainError` for non-positive or non-finite arguments and
    :class:`ConvergenceError` if ``config.max_iter`` is exhausted.
    """
    s, x = _check_gamma_args(s, x)
    if x < s + 1.0:
        lg = log_gamma(s)
        if lg > 700.0:
            # math.exp raises OverflowError past ~709.78
            return math.exp(log_upper_incomplete_gamma(s, x, config))
        lower = math.exp(s * math.log(x) - x) * _lower_series_sum(s, x, config)
        value = math.exp(lg) - lower
        return value if value >= TINY else 0.0
    log_val = s * math.log(x) - x + math.log(_upper_cf(s, x, config))
    return math.exp(log_val) if log_val >= LOG_TINY else 0.0
