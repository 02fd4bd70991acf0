"""Overshear maps of a Danielewski surface and the word engine over them.

An O1 element with data ``(f, g)`` acts by

    (x, y, z) -> (x, y + (p(z e^{x f(x)} + x g(x)) - p(z)) / x, z e^{x f(x)} + x g(x))

and an O2 element is the same map conjugated by the involution ``(x, y) -> (y, x)``.
The z-translation ``x g(x)`` is stored directly as ``shift`` so that time-t flows,
whose translation is not always divisible by x inside the exp-polynomial ring,
stay exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from domain.errors import InvalidElementError, NotDivisibleError
from domain.exppoly import (
    X_POLY,
    ZERO_EXP,
    ZERO_POLY,
    ExpPoly,
    Poly,
    as_complex,
    ep_derivative,
    ep_div_by_poly,
    ep_eval,
    ep_exp_of,
    ep_mul,
    ep_neg,
)
from domain.settings import get_settings
from domain.surface import Surface, SurfacePoint
from sim.amalgam import AmalgamatedProduct, FactorGroup, Letter, Word

LOGGER = logging.getLogger("sim.osgroup")

O1_TAG = "O1"
O2_TAG = "O2"


@dataclass(frozen=True)
class O1Element:
    f: Poly = ZERO_POLY
    shift: ExpPoly = ZERO_EXP

    def __post_init__(self) -> None:
        if self.shift.value_at_zero():
            raise InvalidElementError(
                f"z-translation {self.shift} must vanish at x = 0"
            )

    @property
    def is_identity(self) -> bool:
        return self.f.is_zero and self.shift.is_zero

    @property
    def g(self) -> ExpPoly:
        """``shift / x``; raises ``NotDivisibleError`` for flow elements that have no such g."""

        return ep_div_by_poly(self.shift, X_POLY)

    @property
    def has_g(self) -> bool:
        try:
            self.g
        except NotDivisibleError:
            return False
        return True

    def growth(self) -> ExpPoly:
        """The factor ``e^{x f(x)}`` multiplying z."""

        return ep_exp_of(X_POLY * self.f)


@dataclass(frozen=True)
class O2Element:
    inner: O1Element

    @property
    def is_identity(self) -> bool:
        return self.inner.is_identity


OSElement = Union[O1Element, O2Element]

O1_IDENTITY = O1Element()


def o1_element(f: Poly, g: ExpPoly) -> O1Element:
    return O1Element(f, ep_mul(ExpPoly.from_poly(X_POLY), g))


def o1_identity() -> O1Element:
    return O1_IDENTITY


def o1_compose(a: O1Element, b: O1Element) -> O1Element:
    """``a`` after ``b``: ``(f_a + f_b, g_b e^{x f_a} + g_a)``."""

    return O1Element(a.f + b.f, ep_mul(b.shift, a.growth()) + a.shift)


def o1_invert(a: O1Element) -> O1Element:
    return O1Element(-a.f, ep_neg(ep_mul(a.shift, ep_exp_of(X_POLY * -a.f))))


def o1_power(a: O1Element, n: int) -> O1Element:
    base = a if n >= 0 else o1_invert(a)
    result = O1_IDENTITY
    for _ in range(abs(n)):
        result = o1_compose(result, base)
    return result


def o1_apply(s: Surface, a: O1Element, q: SurfacePoint) -> SurfacePoint:
    """Image of ``q``; overflow yields non-finite coordinates instead of raising."""

    x, y, z = q.x, q.y, q.z
    with np.errstate(over="ignore", invalid="ignore"):
        exponent = complex(x) * complex(a.f.evaluate_numeric(x))
        z_new = complex(z * np.exp(exponent) + ep_eval(a.shift, x))
        if abs(x) < get_settings().limit_threshold:
            g0 = as_complex(ep_derivative(a.shift).value_at_zero())
            f0 = as_complex(a.f.constant_term)
            return SurfacePoint(x, y + complex(s.dp_at(z)) * (z * f0 + g0), z_new)
        y_new = y + (complex(s.p_at(z_new)) - complex(s.p_at(z))) / x
    return SurfacePoint(x, y_new, z_new)


def involution(q: SurfacePoint) -> SurfacePoint:
    return SurfacePoint(q.y, q.x, q.z)


def o2_compose(a: O2Element, b: O2Element) -> O2Element:
    return O2Element(o1_compose(a.inner, b.inner))


def o2_invert(a: O2Element) -> O2Element:
    return O2Element(o1_invert(a.inner))


def o2_apply(s: Surface, a: O2Element, q: SurfacePoint) -> SurfacePoint:
    return involution(o1_apply(s, a.inner, involution(q)))


@lru_cache(maxsize=1)
def _announce_trivial_amalgam() -> None:
    LOGGER.warning(
        "Treating O1 and O2 as intersecting trivially: a y-preserving O1 map needs "
        "p(z e^{x f} + x g) = p(z), and the leading z-coefficient forces "
        "e^{deg(p) x f(x)} = 1, so f = 0 and then g = 0. This holds for "
        "exp-polynomial data only."
    )


def is_in_amalgam(a: OSElement) -> bool:
    _announce_trivial_amalgam()
    return a.is_identity


class O1Factor(FactorGroup[O1Element]):
    tag = O1_TAG

    def compose(self, a: O1Element, b: O1Element) -> O1Element:
        return o1_compose(a, b)

    def invert(self, a: O1Element) -> O1Element:
        return o1_invert(a)

    def identity(self) -> O1Element:
        return O1_IDENTITY

    def is_identity(self, a: O1Element) -> bool:
        return a.is_identity

    def is_in_amalgam(self, a: O1Element) -> bool:
        return is_in_amalgam(a)

    def transfer(self, a: O1Element) -> O2Element:
        if not a.is_identity:
            raise InvalidElementError("only the identity lies in both factors")
        return O2Element(O1_IDENTITY)

    def describe(self, a: O1Element) -> str:
        from sim.wordfile import format_letter

        return format_letter(Letter(self.tag, a))


class O2Factor(FactorGroup[O2Element]):
    tag = O2_TAG

    def compose(self, a: O2Element, b: O2Element) -> O2Element:
        return o2_compose(a, b)

    def invert(self, a: O2Element) -> O2Element:
        return o2_invert(a)

    def identity(self) -> O2Element:
        return O2Element(O1_IDENTITY)

    def is_identity(self, a: O2Element) -> bool:
        return a.is_identity

    def is_in_amalgam(self, a: O2Element) -> bool:
        return is_in_amalgam(a)

    def transfer(self, a: O2Element) -> O1Element:
        if not a.is_identity:
            raise InvalidElementError("only the identity lies in both factors")
        return O1_IDENTITY

    def describe(self, a: O2Element) -> str:
        from sim.wordfile import format_letter

        return format_letter(Letter(self.tag, a))


OS_GROUP = AmalgamatedProduct(O1Factor(), O2Factor())


def o1_letter(f: Poly, g: ExpPoly) -> Letter:
    return Letter(O1_TAG, o1_element(f, g))


def o2_letter(f: Poly, g: ExpPoly) -> Letter:
    return Letter(O2_TAG, O2Element(o1_element(f, g)))


def letter_apply(s: Surface, letter: Letter, q: SurfacePoint) -> SurfacePoint:
    if letter.tag == O1_TAG:
        if not isinstance(letter.elem, O1Element):
            raise InvalidElementError(f"O1 letter carries {type(letter.elem).__name__}")
        return o1_apply(s, letter.elem, q)
    if letter.tag == O2_TAG:
        if not isinstance(letter.elem, O2Element):
            raise InvalidElementError(f"O2 letter carries {type(letter.elem).__name__}")
        return o2_apply(s, letter.elem, q)
    raise InvalidElementError(f"unknown factor tag {letter.tag!r}")


def word_apply(s: Surface, w: Word, q: SurfacePoint) -> SurfacePoint:
    point = q
    for letter in reversed(w.letters):
        point = letter_apply(s, letter, point)
    return point


__all__ = [
    "O1_TAG",
    "O2_TAG",
    "O1Element",
    "O2Element",
    "OSElement",
    "O1_IDENTITY",
    "O1Factor",
    "O2Factor",
    "OS_GROUP",
    "o1_element",
    "o1_identity",
    "o1_compose",
    "o1_invert",
    "o1_power",
    "o1_apply",
    "involution",
    "o2_compose",
    "o2_invert",
    "o2_apply",
    "is_in_amalgam",
    "o1_letter",
    "o2_letter",
    "letter_apply",
    "word_apply",
]
