"""Exception types shared across the library.

The CLI maps these onto its exit codes: DomainError -> 3,
RelaxationDivergedError / InstabilityError / IterationLimitError -> 4,
VerificationError -> 5.
"""


class GeodesyError(Exception):
    """Base class for all library errors."""


class DomainError(GeodesyError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class DegenerateMetricError(DomainError):
    """A metric determinant fell below the degeneracy threshold."""


class RelaxationDivergedError(GeodesyError, RuntimeError):
    """The relaxation residual grew well past its running minimum."""


class IterationLimitError(GeodesyError, RuntimeError):
    """An iterative solver hit its iteration budget before converging."""


class InstabilityError(GeodesyError, RuntimeError):
    """An evolution blew up (CFL violation or non-finite fields)."""

    def __init__(self, message, frame_index=None):
        super().__init__(message)
        self.frame_index = frame_index


class VerificationError(GeodesyError, RuntimeError):
    """A verification suite check failed its threshold."""
