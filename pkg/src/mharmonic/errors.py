"""Exception types shared by all modules."""


class MharmonicError(Exception):
    """Base class for all library errors."""


class DomainError(MharmonicError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DimensionMismatch(MharmonicError, ValueError):
    """Two points that must live in the same C^n have different lengths."""


class NonConvergent(MharmonicError, ArithmeticError):
    """A series failed to meet its tail bound within the term budget."""


class QuadratureFailure(MharmonicError, ArithmeticError):
    """Adaptive quadrature stalled before reaching the requested tolerance."""


class TruncationBudgetExceeded(MharmonicError, ArithmeticError):
    """A truncated-expansion oracle ran out of degree budget."""
