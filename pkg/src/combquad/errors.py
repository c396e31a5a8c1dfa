"""Exception types shared across the package."""


class CombquadError(Exception):
    """Base class for all domain errors raised by this package."""


class DomainError(CombquadError):
    """Input violates a documented precondition (bad range, mismatched degrees, ...)."""


class RepresentationError(CombquadError):
    """A value cannot be represented in the exact scalar ring or a file format."""


class IndeterminateSignError(CombquadError):
    """Exact sign determination failed and the numeric certificate was inconclusive."""


class EvaluationError(CombquadError):
    """Integrand evaluation failed (pole at a node, function domain error)."""


class ExactnessError(CombquadError):
    """Exact evaluation was requested for an expression that is not exactly evaluable."""


class ExprSyntaxError(CombquadError):
    """Expression text failed to parse; ``offset`` is the byte position of the error."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class NumericError(CombquadError):
    """A numeric procedure failed to converge."""


class InternalError(CombquadError):
    """Invariant violation that indicates corrupted data or a bug, not user error."""
