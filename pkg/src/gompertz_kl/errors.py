"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function being evaluated."""


class ConvergenceError(RuntimeError):
    """An iterative method failed to reach its tolerance within its budget."""


class RejectionBudgetError(ValueError):
    """A rejection sampler would accept too rarely to terminate in practice."""


class DegenerateDataError(ValueError):
    """The data carry no information about the parameters being fitted."""
