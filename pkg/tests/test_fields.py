import numpy as np
import pytest

from domain.errors import ZeroInputError
from domain.exppoly import I_UNIT, ONE_EXP, ZERO_EXP, ExpPoly, Poly, ep_mul
from domain.grammar import parse_exppoly
from domain.surface import SurfacePoint
from sim.fields import (
    CoordField,
    OvershearField,
    ZPoly,
    are_commuting_family,
    bracket,
    compare_of_bracket,
    compare_sf_of_bracket,
    exact_rank,
    field_at,
    field_sum,
    iterated_bracket_rank,
    iterated_brackets,
    shear_field,
    to_coord,
    verify_of_bracket_identity,
    verify_sf_of_identity,
)
from sim.samplers import EXACT_SAMPLER, random_exppoly

X = ExpPoly.x()


def _z(*coeffs) -> ZPoly:
    return ZPoly(tuple(ExpPoly.constant(c) if isinstance(c, int) else c for c in coeffs))


def test_to_coord_examples(quartic) -> None:
    shear = to_coord(quartic, shear_field(ONE_EXP))
    assert shear == CoordField(_z(0, 0, 0, 4), _z(X))
    overshear = to_coord(quartic, OvershearField(ONE_EXP, ZERO_EXP))
    assert overshear == CoordField(_z(0, 0, 0, 0, 4), _z(0, X))
    assert to_coord(quartic, OvershearField()).is_zero


def test_bracket_of_overshear_with_shear(quartic) -> None:
    a = to_coord(quartic, OvershearField(ONE_EXP, ZERO_EXP))
    b = to_coord(quartic, OvershearField(ZERO_EXP, ONE_EXP))
    expected = to_coord(quartic, shear_field(ExpPoly.constant(-1))).scale_by_x()
    assert bracket(a, b) == expected
    assert verify_of_bracket_identity(ONE_EXP, ZERO_EXP, ZERO_EXP, ONE_EXP, quartic)


def test_bracket_of_field_with_itself(quartic) -> None:
    v = to_coord(quartic, OvershearField(parse_exppoly("1 + x"), parse_exppoly("exp(x)")))
    assert bracket(v, v).is_zero
    assert verify_of_bracket_identity(X, ONE_EXP, X, ONE_EXP, quartic)


def test_shear_fields_commute(quartic, rng) -> None:
    for _ in range(10):
        a = to_coord(quartic, shear_field(random_exppoly(rng, 3, EXACT_SAMPLER)))
        b = to_coord(quartic, shear_field(random_exppoly(rng, 3, EXACT_SAMPLER)))
        assert bracket(a, b).is_zero


def test_antisymmetry_and_jacobi(quartic, rng) -> None:
    for _ in range(5):
        u, v, w = (
            to_coord(
                quartic,
                OvershearField(random_exppoly(rng, 2, EXACT_SAMPLER), random_exppoly(rng, 2, EXACT_SAMPLER)),
            )
            for _ in range(3)
        )
        assert bracket(u, v) == -bracket(v, u)
        jacobi = field_sum(
            [bracket(u, bracket(v, w)), bracket(v, bracket(w, u)), bracket(w, bracket(u, v))]
        )
        assert jacobi.is_zero


def test_of_bracket_identity_on_random_data(quartic, rng) -> None:
    for _ in range(20):
        f, g, h, k = (random_exppoly(rng, 4, EXACT_SAMPLER) for _ in range(4))
        comparison = compare_of_bracket(f, g, h, k, quartic)
        assert comparison.equal, str(comparison.lhs)


def test_sf_of_identity_verdicts(quartic, rng) -> None:
    assert verify_sf_of_identity(ONE_EXP, ONE_EXP, ZERO_EXP, quartic) == "match"
    zero = compare_sf_of_bracket(ONE_EXP, ZERO_EXP, ZERO_EXP, quartic)
    assert zero.lhs.is_zero and zero.rhs.is_zero
    verdicts = {
        verify_sf_of_identity(*(random_exppoly(rng, 3, EXACT_SAMPLER) for _ in range(3)), quartic)
        for _ in range(10)
    }
    assert verdicts == {"match"}


def test_identities_on_another_surface(rng) -> None:
    from domain.surface import make_surface

    surface = make_surface("z^5 + 2*z - 1/3")
    for _ in range(5):
        f, g, h, k = (random_exppoly(rng, 3, EXACT_SAMPLER) for _ in range(4))
        assert verify_of_bracket_identity(f, g, h, k, surface)


def test_iterated_bracket_rank_examples(quartic) -> None:
    assert iterated_bracket_rank(quartic, ONE_EXP, ZERO_EXP, ONE_EXP, 3) == 5
    assert iterated_bracket_rank(quartic, ONE_EXP, ZERO_EXP, ONE_EXP, 0) == 2
    assert iterated_bracket_rank(quartic, ONE_EXP, ONE_EXP, ONE_EXP, 5) == 7
    assert iterated_bracket_rank(quartic, parse_exppoly("exp(x)"), X, parse_exppoly("1 - x"), 4) == 6


def test_iterated_brackets_follow_x_f_powers(quartic) -> None:
    family = iterated_brackets(quartic, ONE_EXP, ZERO_EXP, ONE_EXP, 2)
    assert family[3] == to_coord(quartic, shear_field(ep_mul(X, X)))


def test_iterated_bracket_rank_rejects_zero(quartic) -> None:
    with pytest.raises(ZeroInputError):
        iterated_bracket_rank(quartic, ZERO_EXP, ONE_EXP, ONE_EXP, 2)
    with pytest.raises(ZeroInputError):
        iterated_bracket_rank(quartic, ONE_EXP, ONE_EXP, ZERO_EXP, 2)
    with pytest.raises(ValueError):
        iterated_bracket_rank(quartic, ONE_EXP, ONE_EXP, ONE_EXP, -1)


def test_exact_rank_over_gaussian_rationals(quartic) -> None:
    v = to_coord(quartic, OvershearField(ONE_EXP, X))
    w = v.times(ExpPoly.constant(I_UNIT))
    assert exact_rank([v, w]) == 1
    assert exact_rank([v, w, to_coord(quartic, shear_field(ONE_EXP))]) == 2
    assert exact_rank([]) == 0
    assert exact_rank([CoordField()]) == 0


def test_commuting_family_examples() -> None:
    h = parse_exppoly("1 + exp(x^2)")
    assert are_commuting_family([(ZERO_EXP, ONE_EXP), (ZERO_EXP, X), (ZERO_EXP, h)])
    assert are_commuting_family([(ONE_EXP, h), (X, ep_mul(X, h))])
    assert not are_commuting_family([(ONE_EXP, ZERO_EXP), (ZERO_EXP, ONE_EXP)])
    assert are_commuting_family([])


def test_commuting_family_means_zero_brackets(quartic) -> None:
    h = parse_exppoly("2 - exp(x)")
    fields = [OvershearField(f, ep_mul(f, h)) for f in (ONE_EXP, X, parse_exppoly("1 + x^2"))]
    assert are_commuting_family([(v.f, v.g) for v in fields])
    for a in fields:
        for b in fields:
            assert bracket(to_coord(quartic, a), to_coord(quartic, b)).is_zero


def test_field_at_matches_coordinates(quartic) -> None:
    field = OvershearField(parse_exppoly("1 + x"), parse_exppoly("exp(x)"))
    q = SurfacePoint(0.5, complex(quartic.p_at(0.2)) / 0.5, 0.2)
    vector = field_at(quartic, field, q)
    A, B = to_coord(quartic, field).evaluate(np.array([q.x]), np.array([q.z]))
    assert vector[0] == 0
    assert vector[1] == pytest.approx(A[0])
    assert vector[2] == pytest.approx(B[0])


def test_zpoly_printing() -> None:
    assert str(ZPoly()) == "0"
    assert str(_z(1, X)) == "(1) + (x)*z"
