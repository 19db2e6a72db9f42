"""Self-verification suite: every closed form against an independent oracle.

Each check returns a :class:`CheckResult` carrying the measured statistic and
the threshold it was held to. ``run_all`` drives the suite for the ``check``
CLI command; the test-suite calls the individual checks.

``perturb`` is a negative-control hook. It scales ``b`` by ``1 + perturb`` on
the closed-form side of the comparisons, which must make the affected checks
fail.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import evt_bridge as evt
from .growth_decomp import decompose
from .gompertz import GompertzParams, cdf, mode, pdf, quantile
from .kl_divergence import (
    kl_closed_form,
    kl_numeric,
    term_integral_linear,
    term_integral_ln,
    term_integral_pow,
)
from .numeric_oracle import integrate_semi_infinite, ks_distance
from .special_fn import exp_integral_ei, upper_incomplete_gamma

__all__ = ["CheckResult", "CHECKS", "run_all", "format_result"]

GRID = (0.25, 0.5, 1.0, 2.0, 4.0)
# high-precision quadrature reference for Ei(-1)
EI_MINUS_ONE = -0.21938393439552027368
KS_ALPHA05 = 1.36


@dataclass
class CheckResult:
    name: str
    criterion: int
    passed: bool
    statistic: float
    threshold: float
    detail: str = ""
    seconds: float = field(default=0.0, compare=False)


def format_result(r: CheckResult) -> str:
    tag = "PASS" if r.passed else "FAIL"
    return (f"[{tag}] c{r.criterion:<2d} {r.name:<34s} stat={r.statistic:.3e} "
            f"threshold={r.threshold:.3e} ({r.detail}; {r.seconds:.2f}s)")


def _shift(p: GompertzParams, perturb: float) -> GompertzParams:
    return p if perturb == 0.0 else GompertzParams(p.b * (1.0 + perturb), p.q)


def _rel(a, b, floor: float = 0.0):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.abs(b), floor)


def _result(name: str, criterion: int, stat: float, threshold: float, detail: str,
            *, upper: bool = True) -> CheckResult:
    ok = stat <= threshold if upper else stat > threshold
    return CheckResult(name, criterion, bool(ok and math.isfinite(stat)), float(stat),
                       threshold, detail)


# -- criterion 1: closed form vs quadrature on the grid ----------------------


def check_kl_grid(perturb: float = 0.0) -> list[CheckResult]:
    worst = 0.0
    worst_pair = None
    lowest = math.inf
    for b1, q1, b2, q2 in itertools.product(GRID, repeat=4):
        p1, p2 = GompertzParams(b1, q1), GompertzParams(b2, q2)
        closed = kl_closed_form(_shift(p1, perturb), p2).total
        numeric = kl_numeric(p1, p2, tol=1e-10).value
        err = abs(closed - numeric) / max(1.0, abs(closed))
        lowest = min(lowest, closed)
        if err > worst:
            worst, worst_pair = err, (b1, q1, b2, q2)
    return [
        _result("kl_closed_form_vs_quadrature", 1, worst, 1e-8,
                f"625 pairs, worst at (b1,q1,b2,q2)={worst_pair}"),
        _result("kl_nonnegative_on_grid", 1, -lowest, 1e-9, f"min KL={lowest:.3e}"),
    ]


# -- criterion 2: self-divergence --------------------------------------------


def check_self_divergence(perturb: float = 0.0, seed: int = 2024) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    bs = np.exp(rng.uniform(math.log(0.1), math.log(10.0), 50))
    qs = np.exp(rng.uniform(math.log(0.1), math.log(10.0), 50))
    worst = max(
        abs(kl_closed_form(_shift(GompertzParams(b, q), perturb), GompertzParams(b, q)).total)
        for b, q in zip(bs, qs)
    )
    return [_result("kl_self_divergence", 2, worst, 1e-12, "50 random (b, q) in [0.1, 10]^2")]


# -- criterion 3: spot values ------------------------------------------------


def check_spot_values(perturb: float = 0.0) -> list[CheckResult]:
    cases = [
        ((1.0, 1.0), (1.0, 2.0), 1.0 - math.log(2.0)),
        ((1.0, 1.0), (2.0, 1.0), -math.log(2.0) + math.e * EI_MINUS_ONE + 3.0),
    ]
    out = []
    for (b1, q1), (b2, q2), analytic in cases:
        p1, p2 = GompertzParams(b1, q1), GompertzParams(b2, q2)
        closed = kl_closed_form(_shift(p1, perturb), p2).total
        numeric = kl_numeric(p1, p2, tol=1e-12).value
        label = f"KL(({b1:g},{q1:g})||({b2:g},{q2:g}))"
        out.append(_result(f"spot_{label}_vs_analytic", 3, abs(closed - analytic), 1e-10,
                           f"closed={closed:.15g}, analytic={analytic:.15g}"))
        out.append(_result(f"spot_{label}_vs_quadrature", 3, abs(closed - numeric), 1e-8,
                           f"quadrature={numeric:.15g}"))
    return out


# -- criterion 4: intermediate integrals -------------------------------------


def check_term_integrals(perturb: float = 0.0) -> list[CheckResult]:
    q1s = (0.1, 0.5, 1.0, 2.0, 5.0)
    ratios = (0.5, 1.0, 2.0, 3.0)
    worst = {"ln": 0.0, "pow": 0.0, "linear": 0.0}
    scale_q = 1.0 + perturb
    for q1 in q1s:
        quad = lambda g: integrate_semi_infinite(g, 1.0, rel_tol=1e-13, scale=1.0 / q1).value
        ref_ln = quad(lambda y: np.log(y) * np.exp(-q1 * y))
        ref_lin = quad(lambda y: y * np.exp(-q1 * y))
        worst["ln"] = max(worst["ln"], float(_rel(term_integral_ln(q1 * scale_q), ref_ln)))
        worst["linear"] = max(worst["linear"],
                              float(_rel(term_integral_linear(q1 * scale_q), ref_lin)))
        for r in ratios:
            ref_pow = quad(lambda y: y ** r * np.exp(-q1 * y))
            worst["pow"] = max(worst["pow"],
                               float(_rel(term_integral_pow(r, q1 * scale_q), ref_pow)))
    detail = "q1 in {0.1,0.5,1,2,5}, ratio in {0.5,1,2,3}"
    return [
        _result("term_integral_ln_vs_quadrature", 4, worst["ln"], 1e-10, detail),
        _result("term_integral_pow_vs_quadrature", 4, worst["pow"], 1e-10, detail),
        _result("term_integral_linear_vs_quadrature", 4, worst["linear"], 1e-10, detail),
    ]


# -- criterion 5: extreme value characterization -----------------------------

# pairs keep q e^{b x} moderate on [0, 10] so the comparison is not dominated
# by exponent rounding next to the underflow threshold
TRUNCATION_PAIRS = ((0.25, 0.5), (0.25, 2.0), (0.5, 0.5), (0.4, 1.0), (0.3, 1.5))


def check_truncation_identity(perturb: float = 0.0) -> list[CheckResult]:
    xs = np.linspace(0.0, 10.0, 100)
    worst = 0.0
    worst_mass = 0.0
    for b, q in TRUNCATION_PAIRS:
        p = GompertzParams(b, q)
        lhs = math.exp(q) * evt.gumbel_reparam_pdf(_shift(p, perturb), xs)
        worst = max(worst, float(np.max(_rel(lhs, pdf(p, xs)))))
        mass = integrate_semi_infinite(lambda y: evt.gumbel_reparam_pdf(p, y), 0.0,
                                       rel_tol=1e-13, scale=1.0 / b).value
        worst_mass = max(worst_mass, abs(mass - math.exp(-q)))
    return [
        _result("truncated_gumbel_equals_gompertz", 5, worst, 1e-13, "100 x in [0,10], 5 pairs"),
        _result("gumbel_mass_above_zero_is_exp(-q)", 5, worst_mass, 1e-10, "quadrature, 5 pairs"),
    ]


def check_change_of_variables(perturb: float = 0.0, seed: int = 11) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    ys = np.linspace(-5.0, 5.0, 200)
    tiny = np.finfo(float).tiny
    out = []
    for source in ("neg_log_frechet", "log_weibull"):
        worst = 0.0
        for shape, sc in zip(rng.uniform(0.5, 2.0, 5), rng.uniform(0.5, 2.0, 5)):
            params = (evt.FrechetParams(shape, sc) if source == "neg_log_frechet"
                      else evt.WeibullParams(shape, sc))
            gp = evt.to_gompertz(source, params)
            transformed = evt.transformed_pdf(source, params, ys)
            reference = evt.gumbel_reparam_pdf(_shift(gp, perturb), ys)
            normal = reference >= tiny
            err = float(np.max(_rel(transformed[normal], reference[normal])))
            # below the normal range both sides must have underflowed
            if np.any(transformed[~normal] >= 1e3 * tiny):
                err = math.inf
            worst = max(worst, err)
        out.append(_result(f"{source}_transform_equals_gumbel_form", 5, worst, 1e-12,
                           "200 y in [-5,5], 5 random parameter pairs"))
    return out


BRIDGE_CASES = (
    ("gumbel_min", evt.GumbelMinParams(0.0, 1.0)),
    ("neg_log_frechet", evt.FrechetParams(2.0, 1.0)),
    ("log_weibull", evt.WeibullParams(1.5, 0.8)),
)


def check_bridge_samplers(perturb: float = 0.0, n: int = 100_000, seed: int = 101) -> list[CheckResult]:
    out = []
    bound = KS_ALPHA05 / math.sqrt(n)
    for i, (source, params) in enumerate(BRIDGE_CASES):
        gp = evt.to_gompertz(source, params)
        draws = np.sort(evt.truncated_transform_sample(source, params, n, seed=seed + i))
        stat = ks_distance(draws, lambda x: cdf(_shift(gp, perturb), x))
        out.append(_result(f"{source}_rejection_sample_ks", 5, stat, bound,
                           f"n={n}, Gompertz(b={gp.b:.4g}, q={gp.q:.4g})"))
    return out


def check_acceptance_rates(perturb: float = 0.0, n_base: int = 1_000_000,
                           seed: int = 17) -> list[CheckResult]:
    out = []
    for i, (source, params) in enumerate(BRIDGE_CASES):
        gp = _shift(evt.to_gompertz(source, params), perturb)
        rng = np.random.default_rng(seed + i)
        y = evt.transform(source, evt.base_draws(source, params, n_base, rng))
        rate = float(np.mean(y >= 0))
        expected = math.exp(-gp.q)
        se = math.sqrt(expected * (1.0 - expected) / n_base)
        out.append(_result(f"{source}_acceptance_rate", 5, abs(rate - expected) / se, 3.0,
                           f"rate={rate:.5f}, exp(-q)={expected:.5f}, in standard errors"))
    return out


# -- criterion 6: core distribution ------------------------------------------


def check_core_distribution(perturb: float = 0.0, seed: int = 3) -> list[CheckResult]:
    worst_norm = 0.0
    for b, q in itertools.product(GRID, repeat=2):
        p = GompertzParams(b, q)
        mass = integrate_semi_infinite(lambda x: pdf(_shift(p, perturb), x), 0.0,
                                       rel_tol=1e-13, scale=1.0 / b).value
        worst_norm = max(worst_norm, abs(mass - 1.0))

    rng = np.random.default_rng(seed)
    u = rng.random(1000)
    worst_rt = 0.0
    for b, q in itertools.product(GRID, repeat=2):
        p = GompertzParams(b, q)
        worst_rt = max(worst_rt, float(np.max(np.abs(cdf(_shift(p, perturb), quantile(p, u)) - u))))

    step = 1e-5
    grid = np.arange(0.0, 20.0 + step / 2, step)
    worst_mode = 0.0
    for q in (0.1, 0.5, 0.9, 1.0, 2.0):
        p = GompertzParams(1.0, q)
        argmax = grid[int(np.argmax(pdf(p, grid)))]
        worst_mode = max(worst_mode, abs(mode(_shift(p, perturb)) - argmax))
    return [
        _result("pdf_normalization", 6, worst_norm, 1e-10, "25 (b, q) pairs"),
        _result("cdf_of_quantile_round_trip", 6, worst_rt, 1e-9, "1000 u x 25 (b, q) pairs"),
        _result("mode_vs_dense_grid_argmax", 6, worst_mode, step,
                "b=1, q in {0.1,0.5,0.9,1,2}, grid step 1e-5 on [0,20]"),
    ]


# -- criterion 7: growth decomposition ---------------------------------------

# b <= 1 keeps f_g small enough on [0, 5] for an absolute 1e-12 comparison
DECOMP_PAIRS = ((1.0, 1.0), (0.5, 2.0), (1.0, 0.5), (0.25, 4.0), (0.75, 0.25))


def check_growth_decomposition(perturb: float = 0.0) -> list[CheckResult]:
    xs = np.linspace(0.0, 5.0, 100)
    worst = 0.0
    monotone = True
    for b, q in DECOMP_PAIRS:
        p = GompertzParams(b, q)
        rows = decompose(_shift(p, perturb), xs)
        fg = np.array([r.f_g for r in rows])
        fd = np.array([r.f_d for r in rows])
        ref = pdf(p, xs)
        worst = max(worst, float(np.max(np.abs(fg - fd - ref) / np.maximum(1.0, ref))))
        monotone &= bool(np.all(np.diff(fd / fg) >= 0))
    return [
        _result("growth_minus_decline_equals_pdf", 7, worst, 1e-12, "100 x in [0,5], 5 pairs"),
        CheckResult("decline_over_growth_nondecreasing", 7, monotone, 0.0 if monotone else 1.0,
                    0.0, "f_d / f_g on sorted grid"),
    ]


# -- criterion 8: special functions ------------------------------------------


def check_special_functions(perturb: float = 0.0) -> list[CheckResult]:
    worst_ei = 0.0
    for z in np.geomspace(1e-3, 50.0, 50):
        ref = -integrate_semi_infinite(lambda t: np.exp(-t) / t, float(z), rel_tol=1e-13).value
        worst_ei = max(worst_ei, float(_rel(exp_integral_ei(-z * (1.0 + perturb)), ref)))

    s_values = (0.5, 1.0, 1.5, 2.0, 3.0, 5.0)
    xs = np.geomspace(1e-3, 30.0, 20)
    worst_g = 0.0
    worst_rec = 0.0
    for s in s_values:
        for x in xs:
            x = float(x)
            ref = integrate_semi_infinite(lambda t: t ** (s - 1.0) * np.exp(-t), x,
                                          rel_tol=1e-13, scale=max(1.0, s)).value
            g = upper_incomplete_gamma(s, x * (1.0 + perturb))
            worst_g = max(worst_g, float(_rel(g, ref)))
            lhs = upper_incomplete_gamma(s + 1.0, x)
            rhs = s * g + x ** s * math.exp(-x)
            worst_rec = max(worst_rec, float(_rel(rhs, lhs)))
    return [
        _result("ei_vs_quadrature", 8, worst_ei, 1e-11, "50 x log-spaced in [-50,-1e-3]"),
        _result("upper_gamma_vs_quadrature", 8, worst_g, 1e-11, "6 s x 20 x in [1e-3,30]"),
        _result("upper_gamma_recurrence", 8, worst_rec, 1e-12, "same grid"),
    ]


CHECKS: tuple[Callable[..., list[CheckResult]], ...] = (
    check_kl_grid,
    check_self_divergence,
    check_spot_values,
    check_term_integrals,
    check_truncation_identity,
    check_change_of_variables,
    check_bridge_samplers,
    check_acceptance_rates,
    check_core_distribution,
    check_growth_decomposition,
    check_special_functions,
)


def run_all(perturb: float = 0.0, report: Callable[[CheckResult], None] | None = None
            ) -> list[CheckResult]:
    results: list[CheckResult] = []
    for check in CHECKS:
        t0 = time.perf_counter()
        batch = check(perturb=perturb)
        elapsed = (time.perf_counter() - t0) / max(1, len(batch))
        for r in batch:
            r.seconds = elapsed
            results.append(r)
            if report is not None:
                report(r)
    return results
