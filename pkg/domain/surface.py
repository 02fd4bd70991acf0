"""Danielewski surfaces ``{xy - p(z) = 0}`` and points on them."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from domain.errors import DegreeTooLowError, NonSimpleRootsError, OffSurfaceError
from domain.exppoly import Poly, poly_gcd
from domain.grammar import format_complex, format_poly, parse_complex_triple, parse_poly
from domain.settings import get_settings

MIN_DEGREE = 4


@dataclass(frozen=True)
class Surface:
    p: Poly
    derivative: Poly = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "derivative", self.p.derivative())

    @property
    def degree(self) -> int:
        return self.p.degree

    def p_at(self, z: complex | np.ndarray) -> complex | np.ndarray:
        return self.p.evaluate_numeric(z)

    def dp_at(self, z: complex | np.ndarray) -> complex | np.ndarray:
        return self.derivative.evaluate_numeric(z)

    def __str__(self) -> str:
        return format_poly(self.p, "z")


@dataclass(frozen=True)
class SurfacePoint:
    x: complex
    y: complex
    z: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.complex128)

    def distance(self, other: "SurfacePoint") -> float:
        return float(np.linalg.norm(self.as_array() - other.as_array()))

    def __str__(self) -> str:
        return format_point(self)


def make_surface(p: Poly | str) -> Surface:
    """Validate ``p`` (degree at least 4, simple roots) and build the surface."""

    poly = parse_poly(p, "z") if isinstance(p, str) else p
    if poly.degree < MIN_DEGREE:
        raise DegreeTooLowError(
            f"surface polynomial {format_poly(poly, 'z')} has degree {poly.degree}; need at least {MIN_DEGREE}"
        )
    common = poly_gcd(poly, poly.derivative())
    if common.degree > 0:
        raise NonSimpleRootsError(
            f"surface polynomial {format_poly(poly, 'z')} shares the factor "
            f"{format_poly(common, 'z')} with its derivative"
        )
    return Surface(poly)


def residual(s: Surface, q: SurfacePoint) -> float:
    return abs(q.x * q.y - complex(s.p_at(q.z)))


def relative_residual(s: Surface, q: SurfacePoint) -> float:
    xy = q.x * q.y
    pz = complex(s.p_at(q.z))
    return abs(xy - pz) / (1.0 + abs(xy) + abs(pz))


def is_on_surface(s: Surface, q: SurfacePoint, tol: Optional[float] = None) -> bool:
    limit = get_settings().surface_tol if tol is None else tol
    return relative_residual(s, q) <= limit


def require_on_surface(s: Surface, q: SurfacePoint, tol: Optional[float] = None) -> SurfacePoint:
    if not is_on_surface(s, q, tol):
        raise OffSurfaceError(
            f"point {format_point(q)} is not on the surface xy = {s}",
            residual=residual(s, q),
        )
    return q


def lift_point(s: Surface, x: complex, z: complex) -> SurfacePoint:
    if x == 0:
        raise ValueError("lift_point needs x != 0; over x = 0 the fibre is not a graph")
    return SurfacePoint(complex(x), complex(s.p_at(z)) / x, complex(z))


def apply_hyperbolic(s: Surface, fz: Poly, t: complex, q: SurfacePoint) -> SurfacePoint:
    """Time-``t`` flow of ``f(z)(x d/dx - y d/dy)``; z is invariant along it."""

    require_on_surface(s, q)
    rate = complex(fz.evaluate_numeric(q.z)) * t
    return SurfacePoint(q.x * cmath.exp(rate), q.y * cmath.exp(-rate), q.z)


def hyperbolic_field(s: Surface, fz: Poly, q: SurfacePoint) -> SurfacePoint:
    """Tangent vector ``(f(z) x, -f(z) y, 0)`` at ``q``."""

    value = complex(fz.evaluate_numeric(q.z))
    return SurfacePoint(value * q.x, -value * q.y, 0j)


def cstar_action(lam: complex, q: SurfacePoint) -> SurfacePoint:
    if lam == 0:
        raise ValueError("the C* action needs a nonzero scalar")
    return SurfacePoint(lam * q.x, q.y / lam, q.z)


def parse_point(text: str) -> SurfacePoint:
    x, y, z = parse_complex_triple(text)
    return SurfacePoint(x, y, z)


def format_point(q: SurfacePoint) -> str:
    return ",".join(format_complex(value) for value in (q.x, q.y, q.z))


__all__ = [
    "MIN_DEGREE",
    "Surface",
    "SurfacePoint",
    "make_surface",
    "residual",
    "relative_residual",
    "is_on_surface",
    "require_on_surface",
    "lift_point",
    "apply_hyperbolic",
    "hyperbolic_field",
    "cstar_action",
    "parse_point",
    "format_point",
]
