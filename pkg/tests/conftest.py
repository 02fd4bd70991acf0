from __future__ import annotations

from random import Random

import pytest

from domain.settings import reset_settings_cache
from domain.surface import Surface, make_surface


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    monkeypatch.delenv("OVERSHEAR_TOL", raising=False)
    reset_settings_cache()
    yield
    reset_settings_cache()


@pytest.fixture
def quartic() -> Surface:
    return make_surface("z^4 - 1")


@pytest.fixture
def rng() -> Random:
    return Random(20240611)
