"""Exception types shared across the package.

All domain violations (bad quantum numbers, degenerate parameters, indices
outside their contract) raise DomainError so callers can map them to a single
exit path; numerical failures get their own types.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """A quadrature or iterative check failed to converge."""


class IllConditionedError(RuntimeError):
    """A linear system was too ill-conditioned to solve reliably.

    The estimated condition number is stored in .condition.
    """

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition
