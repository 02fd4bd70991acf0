"""Overshear and shear vector fields and their Lie brackets.

Fields are written in coordinates as ``A(x, z) d/dy + B(x, z) d/dz``. Neither
component depends on y and there is no d/dx part, so the bracket stays in this
class:

    [V, W] = (B_V dA_W/dz - B_W dA_V/dz) d/dy + (B_V dB_W/dz - B_W dB_V/dz) d/dz
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Dict, Iterable, List, Literal, Sequence, Tuple

import numpy as np
from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from domain.errors import ZeroInputError
from domain.exppoly import (
    X_POLY,
    ZERO,
    ZERO_EXP,
    ExpPoly,
    GaussianRational,
    Poly,
    ep_add,
    ep_eval_many,
    ep_mul,
    ep_neg,
    ep_scale,
    ep_sub,
)
from domain.grammar import format_exppoly
from domain.surface import Surface, SurfacePoint

LOGGER = logging.getLogger("sim.fields")

Verdict = Literal["match", "sign_flipped", "mismatch"]


# ----------------------------------------------------------------------
# Polynomials in z over exp-polynomials in x
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ZPoly:
    coeffs: Tuple[ExpPoly, ...] = ()

    def __post_init__(self) -> None:
        end = len(self.coeffs)
        while end and self.coeffs[end - 1].is_zero:
            end -= 1
        object.__setattr__(self, "coeffs", tuple(self.coeffs[:end]))

    @staticmethod
    def from_z_poly(p: Poly) -> "ZPoly":
        return ZPoly(tuple(ExpPoly.constant(c) for c in p.coeffs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "ZPoly") -> "ZPoly":
        size = max(len(self.coeffs), len(other.coeffs))
        return ZPoly(
            tuple(ep_add(self._at(k), other._at(k)) for k in range(size))
        )

    def __neg__(self) -> "ZPoly":
        return ZPoly(tuple(ep_neg(c) for c in self.coeffs))

    def __sub__(self, other: "ZPoly") -> "ZPoly":
        return self + (-other)

    def __mul__(self, other: "ZPoly") -> "ZPoly":
        if self.is_zero or other.is_zero:
            return ZPoly()
        product = [ZERO_EXP] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                product[i + j] = ep_add(product[i + j], ep_mul(a, b))
        return ZPoly(tuple(product))

    def times(self, factor: ExpPoly) -> "ZPoly":
        return ZPoly(tuple(ep_mul(c, factor) for c in self.coeffs))

    def dz(self) -> "ZPoly":
        return ZPoly(tuple(ep_scale(self.coeffs[k], k) for k in range(1, len(self.coeffs))))

    def _at(self, k: int) -> ExpPoly:
        return self.coeffs[k] if k < len(self.coeffs) else ZERO_EXP

    def evaluate(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        xs = np.asarray(x, dtype=np.complex128)
        zs = np.asarray(z, dtype=np.complex128)
        total = np.zeros(np.broadcast(xs, zs).shape, dtype=np.complex128)
        for coefficient in reversed(self.coeffs):
            total = total * zs + ep_eval_many(coefficient, xs)
        return total

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for power, coefficient in enumerate(self.coeffs):
            if coefficient.is_zero:
                continue
            factor = "" if power == 0 else ("*z" if power == 1 else f"*z^{power}")
            parts.append(f"({format_exppoly(coefficient)}){factor}")
        return " + ".join(parts)


X_EXP = ExpPoly.from_poly(X_POLY)


@dataclass(frozen=True)
class CoordField:
    """``A d/dy + B d/dz`` with A, B polynomial in z."""

    A: ZPoly = ZPoly()
    B: ZPoly = ZPoly()

    @property
    def is_zero(self) -> bool:
        return self.A.is_zero and self.B.is_zero

    def __add__(self, other: "CoordField") -> "CoordField":
        return CoordField(self.A + other.A, self.B + other.B)

    def __neg__(self) -> "CoordField":
        return CoordField(-self.A, -self.B)

    def __sub__(self, other: "CoordField") -> "CoordField":
        return self + (-other)

    def times(self, factor: ExpPoly) -> "CoordField":
        return CoordField(self.A.times(factor), self.B.times(factor))

    def scale_by_x(self) -> "CoordField":
        return self.times(X_EXP)

    def evaluate(self, x: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.A.evaluate(x, z), self.B.evaluate(x, z)

    def __str__(self) -> str:
        return f"({self.A}) d/dy + ({self.B}) d/dz"


@dataclass(frozen=True)
class OvershearField:
    """``OF_{f,g}``; the shear field ``SF_g`` is the case f = 0."""

    f: ExpPoly = ZERO_EXP
    g: ExpPoly = ZERO_EXP

    @property
    def is_shear(self) -> bool:
        return self.f.is_zero

    def linear_part(self) -> ZPoly:
        """``z f + g``."""

        return ZPoly((self.g, self.f))


def overshear_field(f: ExpPoly, g: ExpPoly) -> OvershearField:
    return OvershearField(f, g)


def shear_field(h: ExpPoly) -> OvershearField:
    return OvershearField(ZERO_EXP, h)


def to_coord(s: Surface, V: OvershearField) -> CoordField:
    linear = V.linear_part()
    return CoordField(
        A=ZPoly.from_z_poly(s.derivative) * linear,
        B=linear.times(X_EXP),
    )


def bracket(V: CoordField, W: CoordField) -> CoordField:
    return CoordField(
        A=V.B * W.A.dz() - W.B * V.A.dz(),
        B=V.B * W.B.dz() - W.B * V.B.dz(),
    )


def field_at(s: Surface, V: OvershearField, q: SurfacePoint) -> np.ndarray:
    """Tangent vector ``(0, A, B)`` of ``V`` at ``q``."""

    x = np.array([q.x], dtype=np.complex128)
    fx = ep_eval_many(V.f, x)[0]
    gx = ep_eval_many(V.g, x)[0]
    linear = q.z * fx + gx
    return np.array([0.0, complex(s.dp_at(q.z)) * linear, q.x * linear], dtype=np.complex128)


# ----------------------------------------------------------------------
# Bracket identities
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class BracketComparison:
    lhs: CoordField
    rhs: CoordField
    verdict: Verdict

    @property
    def equal(self) -> bool:
        return self.verdict == "match"


def _compare(lhs: CoordField, rhs: CoordField) -> BracketComparison:
    if lhs == rhs:
        verdict: Verdict = "match"
    elif lhs == -rhs:
        verdict = "sign_flipped"
    else:
        verdict = "mismatch"
    return BracketComparison(lhs, rhs, verdict)


def compare_of_bracket(
    f: ExpPoly, g: ExpPoly, h: ExpPoly, k: ExpPoly, s: Surface
) -> BracketComparison:
    """``[OF_{f,g}, OF_{h,k}]`` against ``x SF_{gh - kf}``."""

    lhs = bracket(to_coord(s, OvershearField(f, g)), to_coord(s, OvershearField(h, k)))
    rhs = to_coord(s, shear_field(ep_sub(ep_mul(g, h), ep_mul(k, f)))).scale_by_x()
    return _compare(lhs, rhs)


def verify_of_bracket_identity(
    f: ExpPoly, g: ExpPoly, h: ExpPoly, k: ExpPoly, s: Surface
) -> bool:
    return compare_of_bracket(f, g, h, k, s).equal


def compare_sf_of_bracket(h: ExpPoly, f: ExpPoly, g: ExpPoly, s: Surface) -> BracketComparison:
    """``[SF_h, OF_{f,g}]`` against ``x SF_{f h}``."""

    lhs = bracket(to_coord(s, shear_field(h)), to_coord(s, OvershearField(f, g)))
    rhs = to_coord(s, shear_field(ep_mul(f, h))).scale_by_x()
    return _compare(lhs, rhs)


def verify_sf_of_identity(h: ExpPoly, f: ExpPoly, g: ExpPoly, s: Surface) -> Verdict:
    return compare_sf_of_bracket(h, f, g, s).verdict


# ----------------------------------------------------------------------
# Exact rank
# ----------------------------------------------------------------------
BasisKey = Tuple[int, int, Poly, int]


def _coordinates(field: CoordField) -> Dict[BasisKey, GaussianRational]:
    entries: Dict[BasisKey, GaussianRational] = {}
    for component, zpoly in enumerate((field.A, field.B)):
        for z_power, coefficient in enumerate(zpoly.coeffs):
            for exponent, poly in coefficient.terms:
                for x_power, value in enumerate(poly.coeffs):
                    if value:
                        entries[(component, z_power, exponent, x_power)] = value
    return entries


def _key_order(key: BasisKey) -> tuple:
    component, z_power, exponent, x_power = key
    return (component, z_power, exponent.sort_key(), x_power)


def vectorize(fields: Sequence[CoordField]) -> Tuple[List[BasisKey], List[List[GaussianRational]]]:
    """Coordinates of ``fields`` over the union of their monomial supports.

    The functions ``z^a x^b e^{q(x)}`` are linearly independent, so the rank of the
    returned rows equals the dimension of the span of ``fields``.
    """

    coordinates = [_coordinates(field) for field in fields]
    basis = sorted({key for entry in coordinates for key in entry}, key=_key_order)
    rows = [[entry.get(key, ZERO) for key in basis] for entry in coordinates]
    return basis, rows


def exact_rank(fields: Sequence[CoordField]) -> int:
    basis, rows = vectorize(fields)
    if not basis:
        return 0
    matrix = DomainMatrix(
        rows,
        (len(rows), len(basis)),
        QQ_I,
    )
    return int(matrix.rank())


def iterated_brackets(s: Surface, f: ExpPoly, g: ExpPoly, h: ExpPoly, N: int) -> List[CoordField]:
    """``[OF_{f,g}, S_0, ..., S_N]`` with ``S_0 = SF_h`` and ``S_{n+1} = [S_n, OF_{f,g}]``."""

    overshear = to_coord(s, OvershearField(f, g))
    current = to_coord(s, shear_field(h))
    family = [overshear, current]
    for _ in range(N):
        current = bracket(current, overshear)
        family.append(current)
    return family


def iterated_bracket_rank(s: Surface, f: ExpPoly, g: ExpPoly, h: ExpPoly, N: int) -> int:
    if f.is_zero:
        raise ZeroInputError("iterated_bracket_rank needs f != 0")
    if h.is_zero:
        raise ZeroInputError("iterated_bracket_rank needs h != 0")
    if N < 0:
        raise ValueError("N must be nonnegative")
    rank = exact_rank(iterated_brackets(s, f, g, h, N))
    LOGGER.debug("iterated bracket rank N=%d -> %d", N, rank)
    return rank


def are_commuting_family(pairs: Iterable[Tuple[ExpPoly, ExpPoly]]) -> bool:
    """True iff ``f_i g_j - f_j g_i = 0`` for every pair of members."""

    members = list(pairs)
    return all(
        ep_sub(ep_mul(fi, gj), ep_mul(fj, gi)).is_zero
        for (fi, gi), (fj, gj) in combinations(members, 2)
    )


def field_sum(fields: Iterable[CoordField]) -> CoordField:
    return reduce(lambda a, b: a + b, fields, CoordField())


__all__ = [
    "Verdict",
    "ZPoly",
    "CoordField",
    "OvershearField",
    "BracketComparison",
    "overshear_field",
    "shear_field",
    "to_coord",
    "bracket",
    "field_at",
    "compare_of_bracket",
    "verify_of_bracket_identity",
    "compare_sf_of_bracket",
    "verify_sf_of_identity",
    "vectorize",
    "exact_rank",
    "iterated_brackets",
    "iterated_bracket_rank",
    "are_commuting_family",
    "field_sum",
]
