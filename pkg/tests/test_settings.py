# -*- coding: utf-8 -*-
import json
import os

import pytest

from config.settings import Settings
from src.core.quadrature import QuadratureConfig


def test_defaults_without_environment():
    settings = Settings(use_env=False)
    assert settings.get("rel_tol") == 1e-9
    assert settings.get("abs_tol") == 1e-12
    assert settings.get("regime_ratio") == 1e3
    assert settings.get("missing", "fallback") == "fallback"


def test_environment_overrides():
    settings = Settings(use_env=False)
    settings.apply_env({"MIRRORRAD_RTOL": "1e-6", "MIRRORRAD_JOBS": "3"})
    assert settings.get("rel_tol") == 1e-6
    assert settings.get("jobs") == 3
    assert settings.worker_count() == 3


def test_malformed_environment_is_ignored(caplog):
    settings = Settings(use_env=False)
    settings.apply_env({"MIRRORRAD_RTOL": "fast", "MIRRORRAD_ATOL": "-1"})
    assert settings.get("rel_tol") == 1e-9
    assert settings.get("abs_tol") == 1e-12
    assert "MIRRORRAD_RTOL" in caplog.text


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "settings.json"
    settings = Settings(str(path), use_env=False)
    settings.set("window_margin", 20.0)
    assert json.loads(path.read_text(encoding="utf-8"))["window_margin"] == 20.0
    reloaded = Settings(str(path), use_env=False)
    assert reloaded.get("window_margin") == 20.0
    reloaded.reset()
    assert Settings(str(path), use_env=False).get("window_margin") == 10.0


def test_unknown_and_broken_files(tmp_path, caplog):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"rel_tol": 1e-7, "colour": "red"}), encoding="utf-8")
    settings = Settings(str(path), use_env=False)
    assert settings.get("rel_tol") == 1e-7
    assert settings.get("colour") is None
    path.write_text("{not json", encoding="utf-8")
    assert Settings(str(path), use_env=False).get("rel_tol") == 1e-9
    assert "[Settings]" in caplog.text


def test_quadrature_config():
    settings = Settings(use_env=False)
    cfg = settings.quadrature_config(rel_tol=1e-6, abs_tol=None)
    assert isinstance(cfg, QuadratureConfig)
    assert cfg.rel_tol == 1e-6
    assert cfg.abs_tol == 1e-12
    assert cfg.max_subdivisions == 200000


def test_worker_count_defaults_to_cpus():
    settings = Settings(use_env=False)
    assert settings.worker_count() == (os.cpu_count() or 1)
