from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from algebra.core import Relation, Table, Universe
from config import config_manager


@pytest.fixture
def u2() -> Universe:
    return Universe(2)


@pytest.fixture
def u3() -> Universe:
    return Universe(3)


@pytest.fixture
def boolean(u2):
    return {
        "AND": Table.from_function(u2, 2, min),
        "OR": Table.from_function(u2, 2, max),
        "NOT": Table.from_function(u2, 1, lambda x: 1 - x),
        "LE": Relation.of(u2, [(0, 0), (0, 1), (1, 1)]),
    }


@pytest.fixture
def isolated_config(tmp_path, monkeypatch):
    """The shared config manager, writing to a temporary file for the duration of a test."""
    monkeypatch.setattr(config_manager, "file_path", tmp_path / "config.json")
    monkeypatch.setattr(config_manager, "_data", dict(config_manager._data))
    monkeypatch.setattr(config_manager, "_overrides", dict(config_manager._overrides))
    return config_manager


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


BOOLEAN_PROBLEM = """\
# Boolesche Operationen
universe 2
op AND builtin=min arity=2
op OR builtin=max arity=2
op NOT table=[1,0] arity=1
op P1 proj 2 1
rel LE arity=2 tuples=[(0,0),(0,1),(1,1)]
check pol-inv gens=AND,OR arity=2
"""

TRANSLATION_PROBLEM = """\
universe 12
group Z12 z-rank=0 torsion=[12]
op G translation 5 group=Z12
op W translation 7 group=Z12
subgroup F_H of=Z12 gens=[2,3]
subgroup F_4 of=Z12 gens=[4]
"""


@pytest.fixture
def problem_path(tmp_path) -> Path:
    path = tmp_path / "boolean.alg"
    path.write_text(BOOLEAN_PROBLEM, encoding="utf-8")
    return path


@pytest.fixture
def translation_path(tmp_path) -> Path:
    path = tmp_path / "translation.alg"
    path.write_text(TRANSLATION_PROBLEM, encoding="utf-8")
    return path


@pytest.fixture
def domains_path(tmp_path) -> Path:
    path = tmp_path / "domains.json"
    path.write_text(json.dumps([[[0]], [[0], [1]], [[3], [8]]]), encoding="utf-8")
    return path
