"""Random inputs for property checks and the acceptance suite.

Coefficients are small Gaussian rationals. Words that are applied numerically
can be damped toward the identity so that their orbits stay in a fixed ball.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import List, Sequence

import numpy as np
from sympy import ImmutableMatrix, Rational, eye, zeros

from domain.exppoly import (
    ZERO,
    as_complex,
    ExpPoly,
    GaussianRational,
    Poly,
    ep_add,
    ep_exp_of,
    ep_mul,
    gaussian,
)
from domain.surface import Surface, SurfacePoint
from sim.amalgam import Letter, Word
from sim.osgroup import O1_TAG, O2_TAG, O1Element, O2Element, letter_apply, o1_element


@dataclass(frozen=True)
class SamplerConfig:
    """Shape of random data; the defaults keep repeated exponentials bounded."""

    coefficient_bound: int = 2
    denominator: int = 8
    exponent_degree: int = 2
    exp_terms: int = 1
    point_min_radius: float = 0.15
    point_max_radius: float = 0.7


DEFAULT_SAMPLER = SamplerConfig()
EXACT_SAMPLER = SamplerConfig(coefficient_bound=3, denominator=1, exp_terms=2)


def random_scalar(rng: Random, config: SamplerConfig = DEFAULT_SAMPLER) -> GaussianRational:
    bound = config.coefficient_bound
    return gaussian(
        Fraction(rng.randint(-bound, bound), config.denominator),
        Fraction(rng.randint(-bound, bound), config.denominator),
    )


def random_poly(
    rng: Random,
    max_degree: int,
    config: SamplerConfig = DEFAULT_SAMPLER,
    *,
    zero_constant: bool = False,
    nonzero: bool = False,
) -> Poly:
    while True:
        coeffs = [random_scalar(rng, config) for _ in range(max_degree + 1)]
        if zero_constant:
            coeffs[0] = ZERO
        poly = Poly(tuple(coeffs))
        if not nonzero or not poly.is_zero:
            return poly


def random_exponent(rng: Random, config: SamplerConfig = DEFAULT_SAMPLER) -> Poly:
    return random_poly(rng, max(1, config.exponent_degree), config, zero_constant=True)


def random_exppoly(
    rng: Random,
    max_degree: int,
    config: SamplerConfig = DEFAULT_SAMPLER,
    *,
    nonzero: bool = False,
) -> ExpPoly:
    while True:
        value = ExpPoly.from_poly(random_poly(rng, max_degree, config))
        for _ in range(config.exp_terms):
            term = ep_mul(
                ExpPoly.from_poly(random_poly(rng, max_degree, config)),
                ep_exp_of(random_exponent(rng, config)),
            )
            value = ep_add(value, term)
        if not nonzero or not value.is_zero:
            return value


def random_o1(
    rng: Random, max_degree: int, config: SamplerConfig = DEFAULT_SAMPLER
) -> O1Element:
    while True:
        element = o1_element(
            random_poly(rng, max_degree, config), random_exppoly(rng, max_degree, config)
        )
        if not element.is_identity:
            return element


def random_letter(
    rng: Random, tag: str, max_degree: int, config: SamplerConfig = DEFAULT_SAMPLER
) -> Letter:
    element = random_o1(rng, max_degree, config)
    return Letter(tag, element if tag == O1_TAG else O2Element(element))


def random_alternating_word(
    rng: Random,
    length: int,
    max_degree: int,
    config: SamplerConfig = DEFAULT_SAMPLER,
    *,
    start: str | None = None,
) -> Word:
    """A reduced word of exactly ``length`` letters with alternating factors."""

    first = start or rng.choice((O1_TAG, O2_TAG))
    second = O2_TAG if first == O1_TAG else O1_TAG
    tags = [first if index % 2 == 0 else second for index in range(length)]
    return Word(tuple(random_letter(rng, tag, max_degree, config) for tag in tags))


def random_word(
    rng: Random, max_length: int, max_degree: int, config: SamplerConfig = DEFAULT_SAMPLER
) -> Word:
    """A word with random tags, so neighbouring letters may need merging."""

    length = rng.randint(0, max_length)
    tags = [rng.choice((O1_TAG, O2_TAG)) for _ in range(length)]
    return Word(tuple(random_letter(rng, tag, max_degree, config) for tag in tags))


def random_cyclically_reduced(
    rng: Random, length: int, max_degree: int, config: SamplerConfig = DEFAULT_SAMPLER
) -> Word:
    if length % 2:
        raise ValueError("cyclically reduced words of length >= 2 have even length")
    return random_alternating_word(rng, length, max_degree, config)


def damp_o1(a: O1Element, factor: Fraction) -> O1Element:
    """Scale f and every coefficient and exponent of the translation by ``factor``."""

    scalar = gaussian(factor)
    shift = ExpPoly(tuple((e.scale(scalar), c.scale(scalar)) for e, c in a.shift.terms))
    return O1Element(a.f.scale(scalar), shift)


def damp_letter(letter: Letter, factor: Fraction) -> Letter:
    if isinstance(letter.elem, O2Element):
        return Letter(letter.tag, O2Element(damp_o1(letter.elem.inner, factor)))
    return Letter(letter.tag, damp_o1(letter.elem, factor))


def _orbit_within(s: Surface, w: Word, q: SurfacePoint, radius: float) -> bool:
    point = q
    for letter in reversed(w.letters):
        point = letter_apply(s, letter, point)
        coordinates = np.abs(point.as_array())
        if not np.all(np.isfinite(coordinates)) or coordinates.max() > radius:
            return False
    return True


def random_bounded_word(
    rng: Random,
    s: Surface,
    points: Sequence[SurfacePoint],
    max_length: int,
    max_degree: int,
    config: SamplerConfig = DEFAULT_SAMPLER,
    *,
    radius: float = 8.0,
    halvings: int = 40,
) -> Word:
    """A ``random_word`` damped until every orbit through ``points`` stays within ``radius``.

    Each halving of the damping factor pulls every letter toward the identity
    while keeping its tag and degrees, so the loop ends once the orbits are as
    small as the starting points.
    """

    word = random_word(rng, max_length, max_degree, config)
    factor = Fraction(1)
    for _ in range(halvings):
        damped = Word(tuple(damp_letter(letter, factor) for letter in word.letters))
        if all(_orbit_within(s, damped, q, radius) for q in points):
            return damped
        factor /= 2
    raise ValueError(f"orbits leave radius {radius} even after {halvings} halvings")


def _random_radius_angle(rng: Random, low: float, high: float) -> complex:
    return cmath.rect(rng.uniform(low, high), rng.uniform(0.0, 2.0 * math.pi))


def random_surface_point(
    rng: Random, s: Surface, config: SamplerConfig = DEFAULT_SAMPLER
) -> SurfacePoint:
    """Choose x and y, then a root z of ``p(z) = xy``."""

    x = _random_radius_angle(rng, config.point_min_radius, config.point_max_radius)
    y = _random_radius_angle(rng, config.point_min_radius, config.point_max_radius)
    shifted = [as_complex(c) for c in reversed(s.p.coeffs)]
    shifted[-1] -= x * y
    roots = np.roots(np.array(shifted, dtype=np.complex128))
    z = complex(roots[rng.randrange(len(roots))])
    # Re-solve y from z so the point is on the surface to rounding.
    return SurfacePoint(x, complex(s.p_at(z)) / x, z)


def random_surface_points(
    rng: Random, s: Surface, count: int, config: SamplerConfig = DEFAULT_SAMPLER
) -> List[SurfacePoint]:
    return [random_surface_point(rng, s, config) for _ in range(count)]


def random_rational(rng: Random, bound: int = 5, denominator: int = 4) -> Rational:
    return Rational(rng.randint(-bound, bound), rng.randint(1, denominator))


def random_nil_matrix(rng: Random, n: int, bound: int = 5, denominator: int = 4) -> ImmutableMatrix:
    matrix = zeros(n, n)
    for i in range(n):
        for j in range(i + 1, n):
            matrix[i, j] = random_rational(rng, bound, denominator)
    return ImmutableMatrix(matrix)


def random_unipotent(rng: Random, n: int, bound: int = 5, denominator: int = 4) -> ImmutableMatrix:
    return ImmutableMatrix(eye(n) + random_nil_matrix(rng, n, bound, denominator))


__all__ = [
    "SamplerConfig",
    "DEFAULT_SAMPLER",
    "EXACT_SAMPLER",
    "random_scalar",
    "random_poly",
    "random_exponent",
    "random_exppoly",
    "random_o1",
    "random_letter",
    "random_alternating_word",
    "random_word",
    "random_cyclically_reduced",
    "damp_o1",
    "damp_letter",
    "random_bounded_word",
    "random_surface_point",
    "random_surface_points",
    "random_rational",
    "random_nil_matrix",
    "random_unipotent",
]
