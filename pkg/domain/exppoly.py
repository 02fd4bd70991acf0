"""Exact exp-polynomials over the Gaussian rationals.

An exp-polynomial is a finite sum ``sum_i p_i(x) * exp(q_i(x))`` with polynomial
coefficients ``p_i`` and polynomial exponents ``q_i`` satisfying ``q_i(0) = 0``.
Functions ``exp(q)`` for distinct such ``q`` are linearly independent over the
polynomial ring, so the canonical form below decides equality structurally.

Scalars are elements of sympy's ``QQ_I`` domain; polynomial division and gcds
are delegated to ``sympy.Poly`` over that domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from sympy import Poly as SympyPoly
from sympy import Symbol
from sympy.polys.domains import QQ, QQ_I

from domain.errors import ConstantTermError, NotDivisibleError, ZeroInputError

GaussianRational = QQ_I.dtype
Scalar = Union[GaussianRational, Fraction, int]

_GENERATOR = Symbol("x")


def _rational(value: Union[Fraction, int]):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ.convert(value)


def gaussian(re: Union[Fraction, int] = 0, im: Union[Fraction, int] = 0) -> GaussianRational:
    """The Gaussian rational ``re + im*i``."""

    return QQ_I(_rational(re), _rational(im))


def to_gaussian(value: Scalar) -> GaussianRational:
    if QQ_I.of_type(value):
        return value
    if isinstance(value, Fraction):
        return gaussian(value)
    return QQ_I.convert(value)


def _fraction(value) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def real_part(value: GaussianRational) -> Fraction:
    return _fraction(value.x)


def imag_part(value: GaussianRational) -> Fraction:
    return _fraction(value.y)


def as_complex(value: GaussianRational) -> complex:
    return complex(float(real_part(value)), float(imag_part(value)))


def scalar_key(value: GaussianRational) -> Tuple[Fraction, Fraction]:
    return (real_part(value), imag_part(value))


ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = gaussian(0, 1)


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies the k-th power."""

    coeffs: Tuple[GaussianRational, ...] = ()

    def __post_init__(self) -> None:
        coeffs = tuple(to_gaussian(c) for c in self.coeffs)
        end = len(coeffs)
        while end and not coeffs[end - 1]:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @staticmethod
    def constant(value: Scalar) -> "Poly":
        return Poly((to_gaussian(value),))

    @staticmethod
    def monomial(value: Scalar, power: int) -> "Poly":
        if power < 0:
            raise ValueError("monomial power must be nonnegative")
        return Poly((ZERO,) * power + (to_gaussian(value),))

    @staticmethod
    def x() -> "Poly":
        return Poly((ZERO, ONE))

    @staticmethod
    def from_ints(*values: Scalar) -> "Poly":
        """Build from coefficients in ascending power order."""

        return Poly(tuple(to_gaussian(v) for v in values))

    @staticmethod
    def from_sympy(poly: SympyPoly) -> "Poly":
        return Poly(tuple(reversed(poly.rep.to_list())))

    def to_sympy(self) -> SympyPoly:
        return SympyPoly.from_list(list(reversed(self.coeffs)), _GENERATOR, domain=QQ_I)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def constant_term(self) -> GaussianRational:
        return self.coeffs[0] if self.coeffs else ZERO

    @property
    def leading(self) -> GaussianRational:
        if not self.coeffs:
            raise ZeroInputError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def sort_key(self) -> Tuple[int, Tuple[Tuple[Fraction, Fraction], ...]]:
        return (self.degree, tuple(scalar_key(c) for c in self.coeffs))

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        o = other if isinstance(other, Poly) else Poly.constant(other)
        longer, shorter = (self.coeffs, o.coeffs) if len(self.coeffs) >= len(o.coeffs) else (o.coeffs, self.coeffs)
        summed = list(longer)
        for k, c in enumerate(shorter):
            summed[k] = summed[k] + c
        return Poly(tuple(summed))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        o = other if isinstance(other, Poly) else Poly.constant(other)
        return self + (-o)

    def __rsub__(self, other: Scalar) -> "Poly":
        return Poly.constant(other) - self

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return Poly()
        product: List[GaussianRational] = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] = product[i + j] + a * b
        return Poly(tuple(product))

    def __rmul__(self, other: Scalar) -> "Poly":
        return self.scale(other)

    def scale(self, value: Scalar) -> "Poly":
        factor = to_gaussian(value)
        return Poly(tuple(c * factor for c in self.coeffs))

    def derivative(self) -> "Poly":
        return Poly(tuple(self.coeffs[k] * k for k in range(1, len(self.coeffs))))

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self.scale(ONE / self.leading)

    def divmod(self, divisor: "Poly") -> Tuple["Poly", "Poly"]:
        """Exact division over Q(i); returns ``(quotient, remainder)``."""

        if divisor.is_zero:
            raise ZeroInputError("division by the zero polynomial")
        quotient, remainder = self.to_sympy().div(divisor.to_sympy())
        return Poly.from_sympy(quotient), Poly.from_sympy(remainder)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------
    def evaluate(self, point: Scalar) -> GaussianRational:
        value = to_gaussian(point)
        result = ZERO
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    @cached_property
    def _descending(self) -> np.ndarray:
        return np.array([as_complex(c) for c in reversed(self.coeffs)], dtype=np.complex128)

    def evaluate_numeric(self, points: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
        if self.is_zero:
            return np.zeros_like(np.asarray(points, dtype=np.complex128))
        return np.polyval(self._descending, points)

    def __str__(self) -> str:
        from domain.grammar import format_poly

        return format_poly(self, "x")


ZERO_POLY = Poly()
ONE_POLY = Poly((ONE,))
X_POLY = Poly.x()


def poly_divmod(a: Poly, d: Poly) -> Tuple[Poly, Poly]:
    return a.divmod(d)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor over Q(i)."""

    if a.is_zero and b.is_zero:
        raise ZeroInputError("gcd(0, 0) is undefined")
    return Poly.from_sympy(a.to_sympy().gcd(b.to_sympy())).monic()


@dataclass(frozen=True)
class ExpPoly:
    """Canonical exp-polynomial: sorted ``(exponent, coefficient)`` pairs.

    Construction always canonicalizes, so two instances are equal iff they
    represent the same function.
    """

    terms: Tuple[Tuple[Poly, Poly], ...] = ()

    def __post_init__(self) -> None:
        merged: Dict[Poly, Poly] = {}
        for exponent, coefficient in self.terms:
            if exponent.constant_term:
                raise ConstantTermError(
                    f"exponent {exponent} has a nonzero constant term"
                )
            merged[exponent] = merged.get(exponent, ZERO_POLY) + coefficient
        ordered = sorted(
            ((e, c) for e, c in merged.items() if not c.is_zero),
            key=lambda term: term[0].sort_key(),
        )
        object.__setattr__(self, "terms", tuple(ordered))

    @staticmethod
    def from_poly(p: Poly) -> "ExpPoly":
        return ExpPoly(((ZERO_POLY, p),))

    @staticmethod
    def constant(value: Scalar) -> "ExpPoly":
        return ExpPoly.from_poly(Poly.constant(value))

    @staticmethod
    def x() -> "ExpPoly":
        return ExpPoly.from_poly(X_POLY)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def value_at_zero(self) -> GaussianRational:
        """Exact value at x = 0 (every exponential equals 1 there)."""

        total = ZERO
        for _, coefficient in self.terms:
            total = total + coefficient.constant_term
        return total

    def __add__(self, other: "ExpLike") -> "ExpPoly":
        return ep_add(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other: "ExpLike") -> "ExpPoly":
        return ep_sub(self, _lift(other))

    def __rsub__(self, other: "ExpLike") -> "ExpPoly":
        return ep_sub(_lift(other), self)

    def __mul__(self, other: "ExpLike") -> "ExpPoly":
        return ep_mul(self, _lift(other))

    __rmul__ = __mul__

    def __neg__(self) -> "ExpPoly":
        return ep_neg(self)

    def __str__(self) -> str:
        return ep_print(self)


ExpLike = Union[ExpPoly, Poly, GaussianRational, Fraction, int]


def _lift(value: ExpLike) -> ExpPoly:
    if isinstance(value, ExpPoly):
        return value
    if isinstance(value, Poly):
        return ExpPoly.from_poly(value)
    return ExpPoly.constant(value)


ZERO_EXP = ExpPoly()
ONE_EXP = ExpPoly.constant(1)


def ep_add(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return ExpPoly(a.terms + b.terms)


def ep_neg(a: ExpPoly) -> ExpPoly:
    return ExpPoly(tuple((e, -c) for e, c in a.terms))


def ep_sub(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return ep_add(a, ep_neg(b))


def ep_is_zero(a: ExpPoly) -> bool:
    return a.is_zero


def ep_scale(a: ExpPoly, value: Scalar) -> ExpPoly:
    return ExpPoly(tuple((e, c.scale(value)) for e, c in a.terms))


def ep_mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    return ExpPoly(
        tuple((ea + eb, ca * cb) for ea, ca in a.terms for eb, cb in b.terms)
    )


def ep_exp_of(q: Poly) -> ExpPoly:
    """The single term ``1 * exp(q)``; ``q(0)`` must vanish."""

    if q.constant_term:
        raise ConstantTermError(f"exponent {q} has a nonzero constant term")
    return ExpPoly(((q, ONE_POLY),))


def ep_derivative(a: ExpPoly) -> ExpPoly:
    return ExpPoly(
        tuple((e, c.derivative() + c * e.derivative()) for e, c in a.terms)
    )


def ep_eval_many(a: ExpPoly, points: Iterable[complex] | np.ndarray) -> np.ndarray:
    """Evaluate at many points; non-finite results become ``inf+inf*j``."""

    xs = np.asarray(points, dtype=np.complex128)
    total = np.zeros_like(xs)
    with np.errstate(over="ignore", invalid="ignore"):
        for exponent, coefficient in a.terms:
            total = total + coefficient.evaluate_numeric(xs) * np.exp(
                exponent.evaluate_numeric(xs)
            )
    finite = np.isfinite(total)
    if not np.all(finite):
        total = np.where(finite, total, complex(np.inf, np.inf))
    return total


def ep_eval(a: ExpPoly, x: complex) -> complex:
    return complex(ep_eval_many(a, np.array([x], dtype=np.complex128))[0])


def ep_div_by_poly(a: ExpPoly, d: Poly) -> ExpPoly:
    """Divide every coefficient by ``d`` exactly or raise ``NotDivisibleError``."""

    if d.is_zero:
        raise ZeroInputError("division by the zero polynomial")
    quotients = []
    for exponent, coefficient in a.terms:
        quotient, remainder = coefficient.divmod(d)
        if not remainder.is_zero:
            raise NotDivisibleError(
                f"coefficient {coefficient} of exp({exponent}) is not divisible by {d}"
            )
        quotients.append((exponent, quotient))
    return ExpPoly(tuple(quotients))


def ep_as_poly(a: ExpPoly) -> Optional[Poly]:
    """Return the polynomial when ``a`` has no exponential part."""

    if a.is_zero:
        return ZERO_POLY
    if len(a.terms) == 1 and a.terms[0][0].is_zero:
        return a.terms[0][1]
    return None


def ep_validate(a: ExpPoly) -> ExpPoly:
    """Walk the stored terms and check every canonical-form invariant."""

    previous: Optional[Poly] = None
    for exponent, coefficient in a.terms:
        if exponent.constant_term:
            raise ConstantTermError(f"stored exponent {exponent} has a constant term")
        if coefficient.is_zero:
            raise ValueError("stored coefficient is zero")
        if previous is not None and not previous.sort_key() < exponent.sort_key():
            raise ValueError("terms are not strictly ordered by exponent")
        previous = exponent
    return a


def ep_parse(text: str) -> ExpPoly:
    from domain.grammar import parse_exppoly

    return parse_exppoly(text)


def ep_print(a: ExpPoly) -> str:
    from domain.grammar import format_exppoly

    return format_exppoly(a)


__all__ = [
    "GaussianRational",
    "gaussian",
    "to_gaussian",
    "real_part",
    "imag_part",
    "as_complex",
    "scalar_key",
    "Poly",
    "ExpPoly",
    "ExpLike",
    "Scalar",
    "ZERO",
    "ONE",
    "I_UNIT",
    "ZERO_POLY",
    "ONE_POLY",
    "X_POLY",
    "ZERO_EXP",
    "ONE_EXP",
    "poly_divmod",
    "poly_gcd",
    "ep_add",
    "ep_neg",
    "ep_sub",
    "ep_is_zero",
    "ep_scale",
    "ep_mul",
    "ep_exp_of",
    "ep_derivative",
    "ep_eval",
    "ep_eval_many",
    "ep_div_by_poly",
    "ep_as_poly",
    "ep_validate",
    "ep_parse",
    "ep_print",
]
