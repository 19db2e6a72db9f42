"""Gompertz distribution toolkit with a closed-form Kullback-Leibler divergence."""

from .errors import ConvergenceError, DegenerateDataError, DomainError, RejectionBudgetError
from .fit import FitResult, mle_fit
from .gompertz import GompertzParams, Sampler, cdf, log_pdf, mode, pdf, quantile, sf
from .growth_decomp import DecompositionPoint, decompose
from .kl_divergence import KLBreakdown, kl_closed_form, kl_numeric
from .numeric_oracle import QuadratureResult, integrate_semi_infinite, ks_distance

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegenerateDataError",
    "DomainError",
    "RejectionBudgetError",
    "FitResult",
    "mle_fit",
    "GompertzParams",
    "Sampler",
    "cdf",
    "log_pdf",
    "mode",
    "pdf",
    "quantile",
    "sf",
    "DecompositionPoint",
    "decompose",
    "KLBreakdown",
    "kl_closed_form",
    "kl_numeric",
    "QuadratureResult",
    "integrate_semi_infinite",
    "ks_distance",
]
