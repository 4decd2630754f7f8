"""Exception types shared across the package."""


class LKernelError(Exception):
    """Base class for all errors raised by lkernel."""


class DomainError(LKernelError, ValueError):
    """Argument outside the domain of an operation."""


class PoleError(DomainError):
    """Argument sits on a pole of the function."""


class AccuracyError(LKernelError, ArithmeticError):
    """A series or quadrature did not meet its accuracy budget.

    ``estimate`` carries the achieved error estimate when one is known.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class PrecisionError(LKernelError, ValueError):
    """A q-expansion does not carry enough coefficients."""


class ValidationError(LKernelError, ValueError):
    """Parameters violate the hypotheses of the average-value identity."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class DependencyError(LKernelError):
    """A required upstream object (e.g. an eigenbasis) is missing."""


class OracleFailure(LKernelError, AssertionError):
    """Two independent evaluation routes disagree beyond their budget."""
