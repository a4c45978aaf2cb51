from __future__ import annotations

import json

import pytest

from config import CONFIG_SCHEMA
from utils.config_manager import ConfigManager


def test_defaults_in_memory():
    manager = ConfigManager(CONFIG_SCHEMA, storage_path=None)
    assert manager.get_int("default_seed") == 0
    assert manager.get_int("relational_generator_cap") == 2
    assert manager.get_str("report_format") == "text"
    assert manager.get_float("slow_task_ms") == 10_000.0


def test_set_value_casts_and_validates():
    manager = ConfigManager(CONFIG_SCHEMA, storage_path=None)
    assert manager.set_value("fragment_budget", "500") == 500
    assert manager.get("fragment_budget") == 500
    with pytest.raises(KeyError):
        manager.set_value("gibt_es_nicht", "1")
    with pytest.raises(ValueError):
        manager.set_value("report_format", "yaml")
    with pytest.raises(ValueError):
        manager.set_value("partial_budget", "viel")


def test_save_and_reload(tmp_path):
    path = tmp_path / "config.json"
    manager = ConfigManager(CONFIG_SCHEMA, storage_path=str(path))
    manager.set_value("default_seed", 17)
    assert json.loads(path.read_text(encoding="utf-8"))["default_seed"] == 17
    assert ConfigManager(CONFIG_SCHEMA, storage_path=str(path)).get_int("default_seed") == 17


def test_overrides_win_but_are_not_written_back(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"semigroup_budget": 50}), encoding="utf-8")
    manager = ConfigManager(CONFIG_SCHEMA, storage_path=str(path), overrides={"semigroup_budget": "75", "log_level": None})
    assert manager.get_int("semigroup_budget") == 75
    assert manager.get_str("log_level") == "WARNING"
    manager.set_value("default_seed", 3)
    assert "semigroup_budget" not in json.loads(path.read_text(encoding="utf-8"))


def test_broken_file_keeps_defaults(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{kaputt", encoding="utf-8")
    assert ConfigManager(CONFIG_SCHEMA, storage_path=str(path)).get_int("fragment_budget") == 1_000_000


def test_reset(tmp_path):
    manager = ConfigManager(CONFIG_SCHEMA, storage_path=str(tmp_path / "config.json"))
    manager.set_value("generator_seed", 9)
    manager.reset()
    assert manager.get_int("generator_seed") == 0
