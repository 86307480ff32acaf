"""
Exception hierarchy for lambda-moments.

Every error raised by the library derives from LambdaMomentsError and
carries the offending quantities in ``context``. Errors split into input
problems (exit code 2 on the command line) and numerical or verification
failures (exit code 3).
"""

from typing import Any

EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL_FAILURE = 3


class LambdaMomentsError(Exception):
    """Base exception for library errors."""

    exit_code: int = EXIT_INVALID_INPUT

    def __init__(self, message: str, **context: Any):
        self.context = context
        super().__init__(message)


class InputError(LambdaMomentsError):
    """Raised when an argument or file violates a precondition."""

    exit_code = EXIT_INVALID_INPUT


class NumericalError(LambdaMomentsError):
    """Raised when a computation on valid input cannot complete."""

    exit_code = EXIT_NUMERICAL_FAILURE


# =============================================================================
# Input errors
# =============================================================================


class NotSquare(InputError):
    """Raised when a square matrix is required."""

    pass


class NotHermitian(InputError):
    """Raised when a matrix is not Hermitian within tolerance."""

    def __init__(self, residual: float, tol: float):
        self.residual = residual
        super().__init__(
            f"Matrix is not Hermitian: residual {residual:.3e} exceeds {tol:.1e}",
            residual=residual,
            tol=tol,
        )


class DimensionMismatch(InputError):
    """Raised when operand dimensions are incompatible."""

    pass


class SizeOverflow(InputError):
    """Raised when a tensor-power operator would exceed the dimension limit."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(
            f"Operator dimension {size} exceeds the limit {limit} "
            f"(raise LAMOM_DIM_LIMIT to allow it)",
            size=size,
            limit=limit,
        )


class ParamOutOfRange(InputError):
    """Raised when a scalar parameter lies outside its admissible range."""

    def __init__(self, name: str, value: float, allowed: str):
        self.name = name
        self.value = value
        super().__init__(
            f"Parameter {name}={value} outside {allowed}",
            name=name,
            value=value,
        )


class ParseError(InputError):
    """Raised when a state or map file cannot be parsed."""

    pass


class InvariantViolation(InputError):
    """Raised when a constructed value breaks one of its invariants."""

    def __init__(self, name: str, residual: float):
        self.name = name
        self.residual = residual
        super().__init__(
            f"Invariant '{name}' violated (residual {residual:.3e})",
            name=name,
            residual=residual,
        )


class OrderTooLarge(InputError):
    """Raised when a Hankel order needs moments that were not computed."""

    pass


class Q2OutOfRange(InputError):
    """Raised when q2 lies outside (0, 1]."""

    pass


class BadTrace(InputError):
    """Raised when moments are requested from an operator without unit trace."""

    pass


class NoTraceScale(InputError):
    """Raised when a map has no state-independent trace-scaling constant."""

    pass


class UnknownMap(InputError):
    """Raised when a map name is neither registered nor a readable file."""

    pass


# =============================================================================
# Numerical errors
# =============================================================================


class DegenerateNormalization(NumericalError):
    """Raised when Tr[(I⊗Λ)(ρ)] is too close to zero to normalize."""

    def __init__(self, trace: float):
        self.trace = trace
        super().__init__(
            f"Normalization trace {trace:.3e} is degenerate",
            trace=trace,
        )


class NegativeNormalization(NumericalError):
    """Raised when Tr[(I⊗Λ)(ρ)] is negative, which no positive map produces."""

    def __init__(self, trace: float):
        self.trace = trace
        super().__init__(
            f"Normalization trace {trace:.6g} is negative: "
            f"the map is not positive or the input is not a state",
            trace=trace,
        )


class Infeasible(NumericalError):
    """Raised when no spectrum satisfies the moment constraints."""

    pass


class ProbabilityDefect(NumericalError):
    """Raised when Born probabilities do not sum to one."""

    def __init__(self, total: float, tol: float):
        self.total = total
        super().__init__(
            f"Outcome probabilities sum to {total:.12g} (tolerance {tol:.1e})",
            total=total,
            tol=tol,
        )


class NoSignChange(NumericalError):
    """Raised when a criterion margin does not change sign exactly once."""

    pass


class VerificationFailed(NumericalError):
    """Raised when two routes to the same quantity disagree."""

    pass
