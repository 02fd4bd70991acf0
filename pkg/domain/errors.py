from __future__ import annotations

from typing import Optional


class OvershearError(Exception):
    """Base exception for every failure raised by the engine."""


class ExpressionSyntaxError(OvershearError, ValueError):
    """Raised when an expression, point or word file does not parse."""

    def __init__(
        self,
        message: str,
        *,
        position: int = 0,
        line: int = 1,
        column: Optional[int] = None,
    ) -> None:
        self.position = position
        self.line = line
        self.column = column if column is not None else position + 1
        super().__init__(f"{message} (line {self.line}, column {self.column})")
        self.message = message


class ConstantTermError(OvershearError, ValueError):
    """Raised when an exponent polynomial has a nonzero constant term."""

    def __init__(self, message: str, *, position: Optional[int] = None) -> None:
        super().__init__(message)
        self.position = position


class NotDivisibleError(OvershearError, ArithmeticError):
    """Raised when an exact division leaves a remainder."""


class ZeroInputError(OvershearError, ValueError):
    """Raised when an operation requires a nonzero input and received zero."""


class SurfaceError(OvershearError, ValueError):
    """Base exception for rejected surface polynomials."""


class DegreeTooLowError(SurfaceError):
    """Raised when deg(p) < 4."""


class NonSimpleRootsError(SurfaceError):
    """Raised when p shares a root with p'."""


class OffSurfaceError(OvershearError, ValueError):
    """Raised when a point violates the on-surface precondition."""

    def __init__(self, message: str, *, residual: float) -> None:
        super().__init__(message)
        self.residual = residual


class NotCommutingError(OvershearError, ValueError):
    """Raised when two words were expected to commute and do not."""


class MatrixShapeError(OvershearError, ValueError):
    """Raised when a matrix is not of the required triangular shape or size."""


class InvalidElementError(OvershearError, ValueError):
    """Raised when overshear data violates its defining invariant."""


__all__ = [
    "OvershearError",
    "ExpressionSyntaxError",
    "ConstantTermError",
    "NotDivisibleError",
    "ZeroInputError",
    "SurfaceError",
    "DegreeTooLowError",
    "NonSimpleRootsError",
    "OffSurfaceError",
    "NotCommutingError",
    "MatrixShapeError",
    "InvalidElementError",
]
