"""Exception hierarchy shared by the library and the CLI."""


class DpcError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DpcError, ValueError):
    """A parameter lies outside the domain of a formula."""


class DegenerateInstanceError(DomainError):
    """The instance is degenerate and the requested quantity is undefined."""


class RateDomainError(DomainError):
    """A rate function failed at a specific coefficient ``t``."""

    def __init__(self, t, cause):
        self.t = t
        self.cause = cause
        super().__init__(f"rate function failed at t={t!r}: {cause}")


class EstimationError(DpcError):
    """Monte Carlo estimation hit a singular empirical covariance."""


class BudgetExceededError(DpcError):
    """A brute-force search would exceed its configured evaluation budget."""

    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(
            f"search needs {required} rate evaluations, budget is {budget}"
        )
