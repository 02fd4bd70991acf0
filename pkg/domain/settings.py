from __future__ import annotations

import logging
import math
import os
from functools import lru_cache
from typing import Mapping, Optional

from pydantic import BaseModel, Field, ValidationError, confloat, conint

LOGGER = logging.getLogger("domain.settings")

TOLERANCE_ENV = "OVERSHEAR_TOL"

PositiveFloat = confloat(gt=0)


class EngineSettings(BaseModel):
    """Numeric thresholds shared by the surface, flow and suite code."""

    surface_tol: PositiveFloat = Field(
        1e-9, description="Relative on-surface tolerance for |xy - p(z)|"
    )
    limit_threshold: PositiveFloat = Field(
        1e-8, description="Below this |x| the difference quotient switches to its limit"
    )
    phi1_cutoff: PositiveFloat = Field(
        1e-4, description="Below this |u| (e^u - 1)/u is summed as a series"
    )
    phi1_terms: conint(ge=2, le=20) = Field(8, description="Series terms used below the cutoff")
    generator_step: PositiveFloat = Field(
        1e-6, description="Step h of the generator finite difference"
    )

    model_config = {"frozen": True}


def _read_tolerance(env: Mapping[str, str]) -> Optional[float]:
    raw = env.get(TOLERANCE_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        value = float(raw)
    except ValueError:
        LOGGER.warning("Ignoring %s=%r: not a number", TOLERANCE_ENV, raw)
        return None
    if not math.isfinite(value) or value <= 0:
        LOGGER.warning("Ignoring %s=%r: tolerance must be positive and finite", TOLERANCE_ENV, raw)
        return None
    return value


def load_settings(env: Optional[Mapping[str, str]] = None, **overrides: object) -> EngineSettings:
    """Build settings from defaults, the environment and explicit overrides.

    Invalid overrides are logged and dropped rather than raised, so a bad
    environment never prevents the engine from starting.
    """

    values: dict[str, object] = {}
    tolerance = _read_tolerance(os.environ if env is None else env)
    if tolerance is not None:
        values["surface_tol"] = tolerance
    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return EngineSettings(**values)
    except ValidationError as exc:
        LOGGER.warning("Ignoring invalid engine settings: %s", exc)
        return EngineSettings()


@lru_cache(maxsize=1)
def get_settings() -> EngineSettings:
    return load_settings()


def reset_settings_cache() -> None:
    get_settings.cache_clear()


__all__ = [
    "EngineSettings",
    "TOLERANCE_ENV",
    "get_settings",
    "load_settings",
    "reset_settings_cache",
]
