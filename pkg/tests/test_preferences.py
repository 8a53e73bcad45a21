"""
Unit tests for settings loading.

Core claims:
    - missing, malformed and incomplete TOML files raise the documented errors
    - absent keys fall back to defaults; the worker count can be overridden
      from the environment
"""

import pytest

from utils.load_preferences import DEFAULT_PATH, WORKERS_ENV, PreferencesLoader, RuntimeSettings


# -- Helpers -----------------------------------------------------------------

@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)


def _settings_file(tmp_path, text):
    path = tmp_path / "settings.toml"
    path.write_text(text, encoding="utf-8")
    return path


# == 1. Loading ===============================================================

class TestLoading:
    def test_shipped_defaults(self):
        settings = PreferencesLoader(DEFAULT_PATH).load_runtime_settings()
        assert settings == RuntimeSettings(workers=1, log_level="WARNING", max_n=5, output_format="table")

    def test_missing_required(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            PreferencesLoader(tmp_path / "none.toml")

    def test_missing_optional(self, tmp_path):
        loader = PreferencesLoader(tmp_path / "none.toml", required=False)
        assert loader.preferences == {}
        assert loader.load_runtime_settings() == RuntimeSettings()

    def test_syntax_error(self, tmp_path):
        with pytest.raises(RuntimeError):
            PreferencesLoader(_settings_file(tmp_path, "[runtime\nworkers = 1\n"))

    def test_missing_section(self, tmp_path):
        loader = PreferencesLoader(_settings_file(tmp_path, "[runtime]\nworkers = 2\n"))
        assert loader.load_section("runtime") == {"workers": 2}
        with pytest.raises(KeyError):
            loader.load_section("verify")
        assert loader.load_section("verify", required=False) == {}

    def test_partial_sections_fall_back(self, tmp_path):
        loader = PreferencesLoader(_settings_file(tmp_path, "[verify]\nmax_n = 6\n"))
        assert loader.load_runtime_settings() == RuntimeSettings(max_n=6)


# == 2. Runtime settings ======================================================

class TestRuntimeSettings:
    def test_values(self, tmp_path):
        text = '[runtime]\nworkers = 4\n[logging]\nlevel = "debug"\n[verify]\nmax_n = 4\n[output]\nformat = "json"\n'
        settings = PreferencesLoader(_settings_file(tmp_path, text)).load_runtime_settings()
        assert settings == RuntimeSettings(workers=4, log_level="DEBUG", max_n=4, output_format="json")

    def test_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv(WORKERS_ENV, "8")
        settings = PreferencesLoader(_settings_file(tmp_path, "[runtime]\nworkers = 2\n")).load_runtime_settings()
        assert settings.workers == 8

    def test_env_not_integer(self, tmp_path, monkeypatch):
        monkeypatch.setenv(WORKERS_ENV, "many")
        with pytest.raises(ValueError):
            PreferencesLoader(_settings_file(tmp_path, "")).load_runtime_settings()

    def test_bad_workers(self, tmp_path):
        with pytest.raises(ValueError):
            PreferencesLoader(_settings_file(tmp_path, "[runtime]\nworkers = 0\n")).load_runtime_settings()

    def test_bad_format(self, tmp_path):
        with pytest.raises(ValueError):
            PreferencesLoader(_settings_file(tmp_path, '[output]\nformat = "csv"\n')).load_runtime_settings()
