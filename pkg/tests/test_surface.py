import cmath

import pytest

from domain.errors import DegreeTooLowError, NonSimpleRootsError, OffSurfaceError
from domain.exppoly import Poly
from domain.surface import (
    SurfacePoint,
    apply_hyperbolic,
    cstar_action,
    format_point,
    hyperbolic_field,
    is_on_surface,
    lift_point,
    make_surface,
    parse_point,
    relative_residual,
    require_on_surface,
    residual,
)
from sim.samplers import random_surface_point


def test_make_surface_validates_polynomial() -> None:
    assert make_surface("z^4 - 1").degree == 4
    with pytest.raises(DegreeTooLowError):
        make_surface("z^3 - 1")
    with pytest.raises(NonSimpleRootsError):
        make_surface("z^4 - 2*z^2 + 1")


def test_points_on_quartic(quartic) -> None:
    assert is_on_surface(quartic, SurfacePoint(0, 5, 1))
    assert is_on_surface(quartic, SurfacePoint(2, 0, 1j))
    assert not is_on_surface(quartic, SurfacePoint(1, 1, 1))
    assert residual(quartic, SurfacePoint(1, 1, 1)) == pytest.approx(1.0)


def test_require_on_surface_raises_with_residual(quartic) -> None:
    with pytest.raises(OffSurfaceError) as excinfo:
        require_on_surface(quartic, SurfacePoint(1, 1, 1))
    assert excinfo.value.residual == pytest.approx(1.0)


def test_tolerance_override(quartic) -> None:
    point = SurfacePoint(1, 1e-7, 1)
    assert not is_on_surface(quartic, point)
    assert is_on_surface(quartic, point, tol=1e-6)


def test_lift_point(quartic) -> None:
    q = lift_point(quartic, 0.5, 1.2)
    assert relative_residual(quartic, q) < 1e-15
    with pytest.raises(ValueError):
        lift_point(quartic, 0, 1.2)


def test_hyperbolic_flow_keeps_z_and_product(quartic, rng) -> None:
    fz = Poly.from_ints(1, 0, 2)
    for _ in range(20):
        q = random_surface_point(rng, quartic)
        image = apply_hyperbolic(quartic, fz, rng.uniform(-1, 1), q)
        assert image.z == q.z
        assert relative_residual(quartic, image) < 1e-12


def test_hyperbolic_field_is_tangent(quartic) -> None:
    q = SurfacePoint(0.5, complex(quartic.p_at(0.3)) / 0.5, 0.3)
    v = hyperbolic_field(quartic, Poly.from_ints(2), q)
    assert v.x == pytest.approx(1.0)
    assert v.y == pytest.approx(-2 * q.y)
    # d(xy - p(z)) = y dx + x dy - p'(z) dz vanishes along the field
    assert q.y * v.x + q.x * v.y == pytest.approx(0)


def test_cstar_action(quartic) -> None:
    q = SurfacePoint(1, 0, 1)
    image = cstar_action(cmath.exp(0.3j), q)
    assert is_on_surface(quartic, image)
    with pytest.raises(ValueError):
        cstar_action(0, q)


def test_point_text_round_trip() -> None:
    q = SurfacePoint(0.1 + 0.2j, -3e-9, 1)
    assert parse_point(format_point(q)) == q


def test_hyperbolic_flow_rejects_points_off_the_surface(quartic) -> None:
    with pytest.raises(OffSurfaceError):
        apply_hyperbolic(quartic, Poly.from_ints(1), 0.5, SurfacePoint(1, 1, 1))
