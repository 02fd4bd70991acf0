import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from domain.errors import NotDivisibleError
from domain.exppoly import ONE_EXP, ZERO_EXP, ExpPoly, Poly, ep_scale, gaussian
from domain.grammar import parse_exppoly
from domain.settings import get_settings
from domain.surface import SurfacePoint, relative_residual
from sim.fields import OvershearField
from sim.flows import (
    flow_closed_form,
    flow_closed_form_many,
    flow_numeric,
    flow_symbolic,
    flow_symbolic_or_none,
    flows_commute,
    generator_check,
    phi1,
)
from sim.osgroup import o1_apply, o1_compose, o1_element
from sim.samplers import random_surface_point, random_surface_points

START = SurfacePoint(1, 0, 1)


def _gap(a: SurfacePoint, b: SurfacePoint) -> float:
    return a.distance(b) / (1.0 + float(np.linalg.norm(b.as_array())))


def test_phi1_series_and_direct_agree() -> None:
    cutoff = get_settings().phi1_cutoff
    below = complex(phi1(cutoff * 0.999))
    above = complex(phi1(cutoff * 1.001))
    assert below == pytest.approx(above, rel=1e-6)
    assert complex(phi1(0.0)) == pytest.approx(1.0)
    assert complex(phi1(1.0)) == pytest.approx(math.e - 1)
    values = phi1(np.array([1e-9, 0.5j, -2.0]))
    assert complex(values[0]) == pytest.approx(1 + 5e-10)
    assert complex(values[2]) == pytest.approx((math.exp(-2) - 1) / -2)


def test_closed_form_example(quartic) -> None:
    image = flow_closed_form(quartic, ONE_EXP, ONE_EXP, 1.0, START)
    z = 2 * math.e - 1
    assert image.x == 1
    assert image.z == pytest.approx(z)
    assert image.y == pytest.approx(z**4 - 1)
    assert relative_residual(quartic, image) < 1e-12


def test_closed_form_shear_and_zero_time(quartic) -> None:
    g = parse_exppoly("1 + x")
    image = flow_closed_form(quartic, ZERO_EXP, g, 0.5, START)
    assert image.z == pytest.approx(1 + 1 * 2 * 0.5)
    q = SurfacePoint(0.5, complex(quartic.p_at(0.3)) / 0.5, 0.3)
    assert _gap(flow_closed_form(quartic, ONE_EXP, g, 0.0, q), q) < 1e-15


def test_closed_form_on_x_zero_fibre(quartic) -> None:
    image = flow_closed_form(quartic, ONE_EXP, ZERO_EXP, 1.0, SurfacePoint(0, 5, 1))
    assert image.z == 1
    assert image.y == pytest.approx(9)


def test_closed_form_vectorised(quartic, rng) -> None:
    points = random_surface_points(rng, quartic, 8)
    x = np.array([q.x for q in points])
    y = np.array([q.y for q in points])
    z = np.array([q.z for q in points])
    f, g = parse_exppoly("x"), parse_exppoly("exp(x)")
    xs, ys, zs = flow_closed_form_many(quartic, f, g, 0.7, x, y, z)
    for index, q in enumerate(points):
        single = flow_closed_form(quartic, f, g, 0.7, q)
        assert _gap(single, SurfacePoint(xs[index], ys[index], zs[index])) < 1e-14


def test_one_parameter_law(quartic, rng) -> None:
    f, g = parse_exppoly("1 - x"), parse_exppoly("x*exp(x)")
    for _ in range(20):
        q = random_surface_point(rng, quartic)
        s_time, t_time = rng.uniform(-1, 1), rng.uniform(-1, 1)
        composed = flow_closed_form(quartic, f, g, s_time, flow_closed_form(quartic, f, g, t_time, q))
        direct = flow_closed_form(quartic, f, g, s_time + t_time, q)
        assert _gap(composed, direct) < 1e-9


def test_rk4_matches_closed_form(quartic) -> None:
    closed = flow_closed_form(quartic, ONE_EXP, ONE_EXP, 1.0, START)
    numeric = flow_numeric(quartic, OvershearField(ONE_EXP, ONE_EXP), START, 1.0, 10_000)
    assert _gap(numeric, closed) < 1e-6


def test_rk4_trivial_cases(quartic) -> None:
    assert flow_numeric(quartic, OvershearField(ONE_EXP, ONE_EXP), START, 0.0, 5) == START
    assert flow_numeric(quartic, OvershearField(), START, 3.0, 5) == START
    with pytest.raises(ValueError):
        flow_numeric(quartic, OvershearField(), START, 1.0, 0)


def test_generator_check(quartic) -> None:
    assert generator_check(quartic, ZERO_EXP, ZERO_EXP, START) < 1e-12
    assert generator_check(quartic, ZERO_EXP, ONE_EXP, START) < 1e-5
    assert generator_check(quartic, ONE_EXP, ZERO_EXP, SurfacePoint(0, 5, 1)) < 1e-5


def test_symbolic_shear_flow() -> None:
    g = parse_exppoly("1 + exp(x)")
    element = flow_symbolic(Poly(), g, gaussian(3))
    assert element == o1_element(Poly(), ep_scale(g, 3))


def test_symbolic_group_law() -> None:
    one = Poly.from_ints(1)
    for s_time, t_time in ((Fraction(1, 2), Fraction(1, 3)), (Fraction(-2), Fraction(5, 4))):
        s, t = gaussian(s_time), gaussian(t_time)
        composed = o1_compose(flow_symbolic(one, ONE_EXP, s), flow_symbolic(one, ONE_EXP, t))
        assert composed == flow_symbolic(one, ONE_EXP, s + t)


def test_symbolic_flow_matches_closed_form(quartic, rng) -> None:
    f, g = Poly.x(), parse_exppoly("x^2")
    element = flow_symbolic(f, g, gaussian(1))
    for q in random_surface_points(rng, quartic, 20):
        expected = flow_closed_form(quartic, ExpPoly.from_poly(f), g, 1.0, q)
        assert _gap(o1_apply(quartic, element, q), expected) < 1e-9


def test_symbolic_flow_not_available(caplog) -> None:
    with pytest.raises(NotDivisibleError):
        flow_symbolic(Poly.from_ints(1, 1), ONE_EXP, gaussian(1))
    with caplog.at_level(logging.INFO, logger="sim.flows"):
        assert flow_symbolic_or_none(parse_exppoly("1 + x"), ONE_EXP, gaussian(1)) is None
        assert flow_symbolic_or_none(parse_exppoly("exp(x)"), ONE_EXP, gaussian(1)) is None
    assert len(caplog.records) == 2


def test_commuting_flows(quartic, rng) -> None:
    h = parse_exppoly("1 - exp(x)")
    v = OvershearField(ONE_EXP, h)
    w = OvershearField(parse_exppoly("x"), parse_exppoly("x - x*exp(x)"))
    for q in random_surface_points(rng, quartic, 10):
        scale = 1.0 + float(np.linalg.norm(q.as_array()))
        assert flows_commute(quartic, v, w, 0.4, -0.3, q) / scale < 1e-8
