from typing import Any, Optional


class SatkfError(Exception):
    message: str = "Estimation error"
    error_code: str = "SATKF_ERROR"
    exit_code: int = 1
    data: Any = None

    def __init__(
        self,
        message: Optional[str] = None,
        *,
        data: Any = None,
        error_code: Optional[str] = None,
    ):
        if message:
            self.message = message
        if error_code:
            self.error_code = error_code
        self.data = data
        super().__init__(self.message)


"""Matrix kernel errors"""


class SingularMatrix(SatkfError):
    error_code = "SINGULAR_MATRIX"
    message = "Matrix is numerically singular"
    exit_code = 3


class NonFiniteEntries(SatkfError):
    error_code = "NON_FINITE"
    message = "Matrix or vector holds NaN or Inf entries"
    exit_code = 3


class ShapeMismatch(SatkfError):
    error_code = "SHAPE_MISMATCH"
    message = "Operand has the wrong shape"
    exit_code = 3


class NoConvergence(SatkfError):
    error_code = "NO_CONVERGENCE"
    message = "Iteration did not converge"
    exit_code = 4


class NotPSD(SatkfError):
    error_code = "NOT_PSD"
    message = "Covariance is not positive semi-definite"
    exit_code = 3


"""Model and noise errors"""


class DomainError(SatkfError):
    error_code = "DOMAIN_ERROR"
    message = "Radius must stay positive"
    exit_code = 3


class InvalidVariance(SatkfError):
    error_code = "INVALID_VARIANCE"
    message = "Variance must be non-negative"
    exit_code = 3


"""Filter errors"""


class DegenerateInnovation(SatkfError):
    error_code = "DEGENERATE_INNOVATION"
    message = "Innovation variance is not positive"
    exit_code = 4


"""Metric errors"""


class LengthMismatch(SatkfError):
    error_code = "LENGTH_MISMATCH"
    message = "Sequences differ in length"
    exit_code = 3


class EmptyTrace(SatkfError):
    error_code = "EMPTY_TRACE"
    message = "Error trace holds no steps"
    exit_code = 3


class EmptySequence(SatkfError):
    error_code = "EMPTY_SEQUENCE"
    message = "No records to average"
    exit_code = 3


class DegenerateSeries(SatkfError):
    error_code = "DEGENERATE_SERIES"
    message = "Series has zero sample variance"
    exit_code = 3


"""Configuration and output errors"""


class ParseError(SatkfError):
    error_code = "PARSE_ERROR"
    message = "Could not parse configuration"
    exit_code = 2


class ValidationError(SatkfError):
    error_code = "VALIDATION_ERROR"
    message = "Invalid configuration"
    exit_code = 2


class OutputError(SatkfError):
    error_code = "OUTPUT_ERROR"
    message = "Could not write output"
    exit_code = 5
