import logging

from domain.settings import EngineSettings, get_settings, load_settings, reset_settings_cache


def test_defaults() -> None:
    settings = load_settings(env={})
    assert settings == EngineSettings()
    assert settings.surface_tol == 1e-9
    assert settings.limit_threshold == 1e-8


def test_tolerance_from_environment() -> None:
    assert load_settings(env={"OVERSHEAR_TOL": "1e-6"}).surface_tol == 1e-6


def test_bad_tolerance_is_ignored(caplog) -> None:
    with caplog.at_level(logging.WARNING, logger="domain.settings"):
        for raw in ("abc", "-1", "0", "nan", "inf"):
            assert load_settings(env={"OVERSHEAR_TOL": raw}).surface_tol == 1e-9
    assert len(caplog.records) == 5


def test_invalid_override_falls_back(caplog) -> None:
    with caplog.at_level(logging.WARNING, logger="domain.settings"):
        settings = load_settings(env={}, phi1_terms=1)
    assert settings.phi1_terms == 8
    assert "Ignoring invalid engine settings" in caplog.text


def test_get_settings_is_cached(monkeypatch) -> None:
    monkeypatch.setenv("OVERSHEAR_TOL", "1e-5")
    reset_settings_cache()
    first = get_settings()
    monkeypatch.setenv("OVERSHEAR_TOL", "1e-3")
    assert get_settings() is first
    reset_settings_cache()
    assert get_settings().surface_tol == 1e-3
