"""Exception hierarchy shared by the library and the CLI."""

from typing import Any, Optional


class FncGaloisError(Exception):
    """Base class for every error raised by fnc_galois."""


class InvalidParams(FncGaloisError, ValueError):
    """Curve parameters or run settings violate their constraints."""


class FieldError(FncGaloisError):
    """Invalid field construction or arithmetic (e.g. inverse of zero)."""


class FieldMismatchError(FieldError):
    """Operands belong to different field contexts."""


class NotDivisible(FncGaloisError):
    """Polynomial long division left a nonzero remainder."""

    def __init__(self, message: str, remainder: Any = None):
        super().__init__(message)
        self.remainder = remainder


class InfiniteOrder(FncGaloisError):
    """Vanishing order requested for the zero binary form."""


class NotOnCurve(FncGaloisError):
    """A local operation was asked about a point where F does not vanish."""


class ConsistencyError(FncGaloisError):
    """Two independent computations disagree, or an identity that must hold failed."""


class UnsplitFiber(FncGaloisError):
    """F ∩ L does not split completely over the working field.

    Attributes:
        fiber: the partial fiber over the points that were found
        residual: binary form of the unfound intersections
        needed_ext: extension degree over the working field that splits the
            residual, when it was computed
    """

    def __init__(self, message: str, fiber: Any = None, residual: Any = None,
                 needed_ext: Optional[int] = None):
        super().__init__(message)
        self.fiber = fiber
        self.residual = residual
        self.needed_ext = needed_ext
