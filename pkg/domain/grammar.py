"""Parser and printer for the ASCII expression grammar.

::

    expr     := [sign] term (sign term)*
    term     := coeff ["*" power] ["*" exp]
              | power ["*" exp]
              | "(" poly ")" ["*" power] ["*" exp]
              | exp
    exp      := "exp" "(" poly ")"
    poly     := [sign] monomial (sign monomial)*
    monomial := coeff ["*" power] | power
    power    := VAR ["^" uint]
    coeff    := rational | rational "i" | rational sign rational "i"
    rational := uint ["/" uint]

``VAR`` is ``x`` for exp-polynomials and ``z`` for surface polynomials. A
complex coefficient such as ``1-2/3i`` is a single token and may not contain
whitespace; elsewhere whitespace is ignored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from domain.errors import ConstantTermError, ExpressionSyntaxError
from domain.exppoly import (
    ONE,
    ExpPoly,
    GaussianRational,
    Poly,
    ZERO_EXP,
    ep_add,
    ep_as_poly,
    ep_exp_of,
    ep_mul,
    ep_neg,
    gaussian,
    imag_part,
    real_part,
)

_GRAMMAR = r"""
start: expr

expr: [SIGN] term (SIGN term)*

term: coeff ["*" power] ["*" exp_factor]       -> coeff_term
    | power ["*" exp_factor]                   -> power_term
    | "(" poly ")" ["*" power] ["*" exp_factor] -> group_term
    | exp_factor                               -> exp_term

exp_factor: "exp" "(" exponent ")"
exponent: poly

poly: [SIGN] monomial (SIGN monomial)*

monomial: coeff ["*" power]                    -> coeff_monomial
        | power                                -> power_monomial

power: VAR ["^" INT]

coeff: COMPLEX | IMAGINARY | RATIONAL

SIGN: "+" | "-"
COMPLEX.3: /\d+(\/\d+)?[+-]\d+(\/\d+)?i/
IMAGINARY.2: /\d+(\/\d+)?i/
RATIONAL.1: /\d+(\/\d+)?/
INT: /\d+/
VAR: @VARIABLE@

%ignore /\s+/
"""

_RATIONAL_PART = re.compile(r"(\d+)(?:/(\d+))?")
_COMPLEX_SPLIT = re.compile(r"(?<=[\d])([+-])")


@lru_cache(maxsize=None)
def expression_grammar(variable: str = "x") -> Lark:
    """The LALR parser for expressions in ``variable``."""

    if not re.fullmatch(r"[a-df-hj-z]", variable):
        raise ValueError(f"unsupported expression variable {variable!r}")
    return Lark(
        _GRAMMAR.replace("@VARIABLE@", f'"{variable}"'),
        parser="lalr",
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _rational(text: str, position: int) -> Fraction:
    match = _RATIONAL_PART.fullmatch(text)
    if match is None:
        raise ExpressionSyntaxError(f"malformed number {text!r}", position=position)
    numerator, denominator = match.group(1), match.group(2)
    if denominator is None:
        return Fraction(int(numerator))
    if int(denominator) == 0:
        raise ExpressionSyntaxError("zero denominator", position=position + match.start(2))
    return Fraction(int(numerator), int(denominator))


def _scalar(token: Token) -> GaussianRational:
    text = str(token)
    start = token.start_pos or 0
    if token.type == "RATIONAL":
        return gaussian(_rational(text, start))
    if token.type == "IMAGINARY":
        return gaussian(0, _rational(text[:-1], start))
    real_text, sign, imaginary_text = _COMPLEX_SPLIT.split(text[:-1], maxsplit=1)
    real = _rational(real_text, start)
    imaginary = _rational(imaginary_text, start + len(real_text) + 1)
    return gaussian(real, imaginary if sign == "+" else -imaginary)


def _signed_sum(children: Sequence, zero, negate, add):
    total = zero
    for sign, value in zip(children[::2], children[1::2]):
        total = add(total, negate(value) if sign == "-" else value)
    return total


def _with_exp(value: Poly, exp_factor: Optional[ExpPoly]) -> ExpPoly:
    lifted = ExpPoly.from_poly(value)
    return lifted if exp_factor is None else ep_mul(lifted, exp_factor)


class _ExpressionBuilder(Transformer):
    def __init__(self, variable: str) -> None:
        super().__init__()
        self._variable = variable

    def start(self, children: List[ExpPoly]) -> ExpPoly:
        return children[0]

    def expr(self, children: List) -> ExpPoly:
        return _signed_sum(children, ZERO_EXP, ep_neg, ep_add)

    def coeff_term(self, children: List) -> ExpPoly:
        coefficient, power, exp_factor = children
        return _with_exp(Poly.monomial(coefficient, power or 0), exp_factor)

    def power_term(self, children: List) -> ExpPoly:
        power, exp_factor = children
        return _with_exp(Poly.monomial(ONE, power), exp_factor)

    def group_term(self, children: List) -> ExpPoly:
        inner, power, exp_factor = children
        return _with_exp(inner * Poly.monomial(ONE, power or 0), exp_factor)

    def exp_term(self, children: List) -> ExpPoly:
        return children[0]

    def exp_factor(self, children: List) -> ExpPoly:
        return children[0]

    @v_args(meta=True)
    def exponent(self, meta, children: List[Poly]) -> ExpPoly:
        exponent = children[0]
        if exponent.constant_term:
            raise ConstantTermError(
                f"exponent {format_poly(exponent, self._variable)} has a nonzero constant term",
                position=meta.start_pos,
            )
        return ep_exp_of(exponent)

    def poly(self, children: List) -> Poly:
        return _signed_sum(children, Poly(), lambda p: -p, lambda a, b: a + b)

    def coeff_monomial(self, children: List) -> Poly:
        coefficient, power = children
        return Poly.monomial(coefficient, power or 0)

    def power_monomial(self, children: List) -> Poly:
        return Poly.monomial(ONE, children[0])

    def power(self, children: List) -> int:
        _, exponent = children
        return 1 if exponent is None else int(exponent)

    def coeff(self, children: List[Token]) -> GaussianRational:
        return _scalar(children[0])


def _error_position(exc: UnexpectedInput, text: str) -> int:
    if isinstance(exc, UnexpectedEOF):
        return len(text)
    token = getattr(exc, "token", None)
    if token is not None and token.type == "$END":
        return len(text)
    position = getattr(exc, "pos_in_stream", None)
    return len(text) if position is None or position < 0 else position


def _error_message(exc: UnexpectedInput, text: str, position: int) -> str:
    if isinstance(exc, UnexpectedCharacters):
        return f"unexpected character {text[position]!r}"
    token = getattr(exc, "token", None)
    if token is None or token.type == "$END" or position >= len(text):
        return "unexpected end of input"
    return f"unexpected {str(token)!r}"


def parse_exppoly(text: str, variable: str = "x") -> ExpPoly:
    try:
        tree = expression_grammar(variable).parse(text)
    except UnexpectedInput as exc:
        position = _error_position(exc, text)
        raise ExpressionSyntaxError(
            _error_message(exc, text, position), position=position
        ) from exc
    try:
        return _ExpressionBuilder(variable).transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from None


def parse_poly(text: str, variable: str = "z") -> Poly:
    """Parse a plain polynomial; exponential terms are rejected."""

    value = parse_exppoly(text, variable)
    poly = ep_as_poly(value)
    if poly is None:
        raise ExpressionSyntaxError(
            "expected a polynomial without exp(...) terms", position=0
        )
    return poly


# ----------------------------------------------------------------------
# Printing
# ----------------------------------------------------------------------
def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _split_sign(value: GaussianRational) -> Tuple[int, GaussianRational]:
    re, im = real_part(value), imag_part(value)
    if re < 0 or (re == 0 and im < 0):
        return -1, -value
    return 1, value


def _format_magnitude(value: GaussianRational) -> str:
    re, im = real_part(value), imag_part(value)
    if im == 0:
        return _format_rational(re)
    joiner = "+" if im > 0 else "-"
    return f"{_format_rational(re)}{joiner}{_format_rational(abs(im))}i"


def _monomial_chunks(poly: Poly, variable: str) -> List[Tuple[int, str]]:
    chunks: List[Tuple[int, str]] = []
    for power, coefficient in enumerate(poly.coeffs):
        if not coefficient:
            continue
        sign, magnitude = _split_sign(coefficient)
        if power == 0:
            text = _format_magnitude(magnitude)
        else:
            factor = variable if power == 1 else f"{variable}^{power}"
            text = factor if magnitude == ONE else f"{_format_magnitude(magnitude)}*{factor}"
        chunks.append((sign, text))
    return chunks


def _join(chunks: List[Tuple[int, str]]) -> str:
    if not chunks:
        return "0"
    first_sign, first_text = chunks[0]
    parts = [("-" if first_sign < 0 else "") + first_text]
    for sign, text in chunks[1:]:
        parts.append(f" {'-' if sign < 0 else '+'} {text}")
    return "".join(parts)


def format_poly(poly: Poly, variable: str = "x") -> str:
    return _join(_monomial_chunks(poly, variable))


def format_exppoly(value: ExpPoly, variable: str = "x") -> str:
    chunks: List[Tuple[int, str]] = []
    for exponent, coefficient in value.terms:
        if exponent.is_zero:
            chunks.extend(_monomial_chunks(coefficient, variable))
            continue
        exp_text = f"exp({format_poly(exponent, variable)})"
        monomials = _monomial_chunks(coefficient, variable)
        single_real = len(monomials) == 1 and all(imag_part(c) == 0 for c in coefficient.coeffs)
        if single_real:
            sign, text = monomials[0]
            chunks.append((sign, exp_text if text == "1" else f"{text}*{exp_text}"))
        else:
            chunks.append((1, f"({format_poly(coefficient, variable)})*{exp_text}"))
    return _join(chunks)


# ----------------------------------------------------------------------
# Numeric triples
# ----------------------------------------------------------------------
def parse_complex(text: str, *, position: int = 0) -> complex:
    cleaned = text.strip().replace(" ", "")
    if cleaned.endswith("i"):
        cleaned = cleaned[:-1] + "j"
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise ExpressionSyntaxError(
            f"invalid complex number {text.strip()!r}", position=position
        ) from exc


def parse_complex_triple(text: str) -> Tuple[complex, complex, complex]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ExpressionSyntaxError(
            f"expected three comma-separated complex numbers, found {len(parts)}",
            position=0,
        )
    values: List[complex] = []
    offset = 0
    for part in parts:
        values.append(parse_complex(part, position=offset))
        offset += len(part) + 1
    return values[0], values[1], values[2]


def format_complex(value: complex) -> str:
    return f"{value.real:.17g}{value.imag:+.17g}i"


__all__ = [
    "parse_exppoly",
    "parse_poly",
    "expression_grammar",
    "format_poly",
    "format_exppoly",
    "parse_complex",
    "parse_complex_triple",
    "format_complex",
]
