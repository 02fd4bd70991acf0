"""Flows of overshear fields: closed form, exact symbolic and RK4.

Along ``OF_{f,g}`` the coordinate x is constant and z solves the linear equation
``z' = x (z f(x) + g(x))``, so with ``u = x f(x) t``

    z(t) = e^u z + x g(x) t phi1(u),    phi1(u) = (e^u - 1) / u,

and y follows from ``x y = p(z)``. Over x = 0 the flow is the limit
``y + t p'(z) (z f(0) + g(0))``.
"""

from __future__ import annotations

import logging
from math import factorial
from typing import Optional, Tuple

import numpy as np

from domain.errors import NotDivisibleError
from domain.exppoly import (
    ONE_EXP,
    X_POLY,
    ExpPoly,
    GaussianRational,
    Poly,
    as_complex,
    ep_as_poly,
    ep_div_by_poly,
    ep_eval_many,
    ep_exp_of,
    ep_mul,
    ep_scale,
    ep_sub,
    to_gaussian,
)
from domain.settings import get_settings
from domain.surface import Surface, SurfacePoint
from sim.fields import OvershearField, field_at
from sim.osgroup import O1Element

LOGGER = logging.getLogger("sim.flows")

Arrays = Tuple[np.ndarray, np.ndarray, np.ndarray]


def phi1(u: complex | np.ndarray) -> np.ndarray:
    """``(e^u - 1) / u`` with a truncated series near ``u = 0``."""

    settings = get_settings()
    values = np.asarray(u, dtype=np.complex128)
    series = np.zeros_like(values)
    for k in range(settings.phi1_terms - 1, -1, -1):
        series = series * values + 1.0 / factorial(k + 1)
    small = np.abs(values) < settings.phi1_cutoff
    safe = np.where(small, 1.0, values)
    with np.errstate(over="ignore", invalid="ignore"):
        direct = np.expm1(safe) / safe
    return np.where(small, series, direct)


def _as_arrays(*values: complex | np.ndarray) -> Arrays:
    arrays = np.broadcast_arrays(*(np.asarray(v, dtype=np.complex128) for v in values))
    return tuple(np.array(a, dtype=np.complex128) for a in arrays)  # type: ignore[return-value]


def _y_update(
    s: Surface,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    z_new: np.ndarray,
    limit_rate: np.ndarray,
) -> np.ndarray:
    """y after z moved to ``z_new``; ``limit_rate`` is the x = 0 increment of y."""

    threshold = get_settings().limit_threshold
    regular = np.abs(x) >= threshold
    safe_x = np.where(regular, x, 1.0)
    with np.errstate(over="ignore", invalid="ignore"):
        quotient = y + (s.p_at(z_new) - s.p_at(z)) / safe_x
    return np.where(regular, quotient, y + limit_rate)


def flow_closed_form_many(
    s: Surface,
    f: ExpPoly,
    g: ExpPoly,
    t: complex,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
) -> Arrays:
    x, y, z = _as_arrays(x, y, z)
    fx = ep_eval_many(f, x)
    gx = ep_eval_many(g, x)
    u = x * fx * t
    with np.errstate(over="ignore", invalid="ignore"):
        z_new = np.exp(u) * z + x * gx * t * phi1(u)
    f0 = as_complex(f.value_at_zero())
    g0 = as_complex(g.value_at_zero())
    limit_rate = s.dp_at(z) * t * (z * f0 + g0)
    return x, _y_update(s, x, y, z, z_new, limit_rate), z_new


def flow_closed_form(
    s: Surface, f: ExpPoly, g: ExpPoly, t: complex, q: SurfacePoint
) -> SurfacePoint:
    x, y, z = flow_closed_form_many(s, f, g, t, q.x, q.y, q.z)
    return SurfacePoint(complex(x[()]), complex(y[()]), complex(z[()]))


def flow_symbolic(f: Poly, g: ExpPoly, t: GaussianRational) -> O1Element:
    """The time-``t`` flow of ``OF_{f,g}`` as an exact O1 element.

    Requires f = 0 or ``f | g`` coefficient-wise; otherwise the translation
    ``(g/f)(e^{x f t} - 1)`` is not an exp-polynomial and ``NotDivisibleError``
    is raised.
    """

    scalar = to_gaussian(t)
    x_exp = ExpPoly.from_poly(X_POLY)
    if f.is_zero:
        return O1Element(Poly(), ep_scale(ep_mul(x_exp, g), scalar))
    ratio = ep_div_by_poly(g, f)
    rate = f.scale(scalar)
    shift = ep_mul(ratio, ep_sub(ep_exp_of(X_POLY * rate), ONE_EXP))
    return O1Element(rate, shift)


def flow_symbolic_or_none(f: ExpPoly, g: ExpPoly, t: GaussianRational) -> Optional[O1Element]:
    """``flow_symbolic`` for exp-polynomial ``f``; ``None`` when no exact flow exists."""

    f_poly = ep_as_poly(f)
    if f_poly is None:
        LOGGER.info("f has exponential terms; only numeric flows are available")
        return None
    try:
        return flow_symbolic(f_poly, g, t)
    except NotDivisibleError:
        LOGGER.info("f does not divide g; falling back to numeric flows")
        return None


def _velocity(
    s: Surface, fx: np.ndarray, gx: np.ndarray, x: np.ndarray, z: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    linear = z * fx + gx
    return s.dp_at(z) * linear, x * linear


def flow_numeric_many(
    s: Surface,
    V: OvershearField,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    t: complex,
    steps: int,
) -> Arrays:
    """Classical RK4 on (y, z) for every point at once; x stays fixed."""

    if steps < 1:
        raise ValueError("steps must be at least 1")
    x, y, z = _as_arrays(x, y, z)
    fx = ep_eval_many(V.f, x)
    gx = ep_eval_many(V.g, x)
    h = t / steps
    for _ in range(steps):
        k1y, k1z = _velocity(s, fx, gx, x, z)
        k2y, k2z = _velocity(s, fx, gx, x, z + 0.5 * h * k1z)
        k3y, k3z = _velocity(s, fx, gx, x, z + 0.5 * h * k2z)
        k4y, k4z = _velocity(s, fx, gx, x, z + h * k3z)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z = z + (h / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
    LOGGER.debug("RK4 finished %d steps over %d points", steps, x.size)
    return x, y, z


def flow_numeric(
    s: Surface, V: OvershearField, q: SurfacePoint, t: complex, steps: int
) -> SurfacePoint:
    x, y, z = flow_numeric_many(s, V, q.x, q.y, q.z, t, steps)
    return SurfacePoint(complex(x[()]), complex(y[()]), complex(z[()]))


def generator_check(s: Surface, f: ExpPoly, g: ExpPoly, q: SurfacePoint) -> float:
    """``|(flow_h(q) - q) / h - V(q)|`` for the configured small step h."""

    h = get_settings().generator_step
    moved = flow_closed_form(s, f, g, h, q)
    difference = (moved.as_array() - q.as_array()) / h
    return float(np.linalg.norm(difference - field_at(s, OvershearField(f, g), q)))


def flows_commute(
    s: Surface,
    V: OvershearField,
    W: OvershearField,
    s_time: complex,
    t_time: complex,
    q: SurfacePoint,
) -> float:
    """Distance between ``V_s(W_t(q))`` and ``W_t(V_s(q))``."""

    first = flow_closed_form(s, V.f, V.g, s_time, flow_closed_form(s, W.f, W.g, t_time, q))
    second = flow_closed_form(s, W.f, W.g, t_time, flow_closed_form(s, V.f, V.g, s_time, q))
    return first.distance(second)


__all__ = [
    "phi1",
    "flow_closed_form",
    "flow_closed_form_many",
    "flow_symbolic",
    "flow_symbolic_or_none",
    "flow_numeric",
    "flow_numeric_many",
    "generator_check",
    "flows_commute",
]
