from __future__ import annotations

from typing import Sequence


class BMPoissonError(Exception):
    """Base exception for bmpoisson."""


class ConfigError(BMPoissonError):
    pass


class UsageError(BMPoissonError):
    """Bad command-line input. The CLI maps it to exit code 2."""


class StorageError(BMPoissonError):
    pass


class PolynomialParseError(BMPoissonError, ValueError):
    pass


class GradeError(BMPoissonError):
    pass


class ModelError(BMPoissonError):
    pass


class UnknownModelError(ModelError, UsageError):
    pass


class LieAlgebraError(BMPoissonError):
    pass


class LeafGeometryError(BMPoissonError):
    pass


class SingularPointError(LeafGeometryError):
    pass


class NotTangentError(LeafGeometryError):
    """
    Raised when a vector handed to the leaf-form evaluation is not in the image
    of the bundle map at the evaluation point.

    Parameters
    ----------
    message : str | None
        Optional explicit message. Built from the structured fields when omitted.
    vector_name : str | None
        Which argument failed (``"u"`` or ``"v"``).
    residual : float | None
        Norm of ``B(alpha) - vector`` for the least-squares ``alpha``.
    tolerance : float | None
        Residual threshold that was exceeded.
    """

    def __init__(
        self,
        message: str | None = None,
        *,
        vector_name: str | None = None,
        residual: float | None = None,
        tolerance: float | None = None,
    ) -> None:
        self.vector_name = vector_name
        self.residual = residual
        self.tolerance = tolerance
        if message is None:
            details = []
            if vector_name:
                details.append(f"vector={vector_name}")
            if residual is not None:
                details.append(f"residual={residual:.3e}")
            if tolerance is not None:
                details.append(f"tol={tolerance:.1e}")
            extra = f" ({', '.join(details)})" if details else ""
            message = f"vector not tangent to leaf{extra}"
        super().__init__(message)


class GlueError(BMPoissonError):
    pass


class FoliationMismatchError(GlueError):
    """The two bivectors handed to the transition function are not proportional."""

    def __init__(
        self,
        message: str | None = None,
        *,
        point: Sequence[float] | None = None,
        residual: float | None = None,
    ) -> None:
        self.point = tuple(float(x) for x in point) if point is not None else None
        self.residual = residual
        if message is None:
            where = f" {self.point}" if self.point is not None else ""
            extra = f" (relative residual={residual:.3e})" if residual is not None else ""
            message = f"foliations disagree at point{where}{extra}"
        super().__init__(message)


class CohomologyError(BMPoissonError):
    pass
