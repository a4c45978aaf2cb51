from __future__ import annotations

import json

import pytest

from clonebench import cli


@pytest.fixture(autouse=True)
def _config(isolated_config):
    return isolated_config


def test_close_lists_the_fragment(runner, problem_path):
    result = runner.invoke(cli, ["close", "--file", str(problem_path), "--gens", "NOT", "--arity", "1"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0].endswith(": 2")
    assert lines[1:] == ["[0, 1]", "[1, 0]"]


def test_close_as_json(runner, problem_path):
    result = runner.invoke(cli, ["close", "--file", str(problem_path), "--gens", "AND", "--arity", "2", "--json"])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["command"] == "close"
    assert payload["count"] == 3
    assert [0, 0, 0, 1] in payload["tables"]


def test_pol_of_the_order(runner, problem_path):
    result = runner.invoke(cli, ["pol", "--file", str(problem_path), "--rels", "LE", "--arity", "1", "--json"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["tables"] == [[0, 0], [0, 1], [1, 1]]


def test_inv_from_tuples(runner, problem_path):
    result = runner.invoke(cli, ["inv", "--file", str(problem_path), "--gens", "NOT", "--tuples", "[(0,1)]", "--json"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.stdout)["tuples"] == [[0, 1], [1, 0]]


def test_inv_needs_exactly_one_start_set(runner, problem_path):
    result = runner.invoke(cli, ["inv", "--file", str(problem_path), "--gens", "NOT"])
    assert result.exit_code == 2


def test_pol_inv_check_passes(runner, problem_path):
    result = runner.invoke(cli, ["check", "pol-inv", "--file", str(problem_path), "--gens", "AND,OR", "--arity", "2"])
    assert result.exit_code == 0, result.output
    assert result.output.startswith("PASS pol-inv")


def test_check_runs_the_file_directives(runner, problem_path):
    result = runner.invoke(cli, ["check", "--file", str(problem_path), "--json"])
    assert result.exit_code == 0, result.output
    [report] = json.loads(result.stdout)
    assert report["kind"] == "pol-inv"
    assert report["verdict"] == "PASS"


def test_exact_member_no_exits_with_one(runner, problem_path):
    result = runner.invoke(cli, ["member", "--file", str(problem_path), "--op", "NOT", "--gens", "AND,OR"])
    assert result.exit_code == 1
    assert result.output.startswith("FAIL member: NO")
    assert "table: [1, 0]" in result.output


def test_local_member_in_a_translation_clone(runner, translation_path, domains_path):
    args = ["member", "--file", str(translation_path), "--op", "G", "--gens", "F_H", "--domains", str(domains_path)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output
    assert "YES up to tested domains" in result.output


def test_local_member_with_generated_domains(runner, problem_path):
    args = ["local-member", "--file", str(problem_path), "--op", "NOT", "--gens", "AND,OR", "--domain-size", "1", "--json"]
    result = runner.invoke(cli, args)
    assert result.exit_code == 1
    report = json.loads(result.stdout)
    assert report["summary"] == "NO"
    assert report["certificate"]["domain"] == [[0]] or report["certificate"]["domain"] == [[1]]


def test_parse_errors_exit_with_two(runner, tmp_path):
    path = tmp_path / "broken.alg"
    path.write_text("universe 2\nop X arity=2 table=[0,1]\n", encoding="utf-8")
    result = runner.invoke(cli, ["close", "--file", str(path), "--gens", "X", "--arity", "1"])
    assert result.exit_code == 2
    assert "Zeile 2" in result.output


def test_unknown_operation_exits_with_two(runner, problem_path):
    result = runner.invoke(cli, ["close", "--file", str(problem_path), "--gens", "XOR", "--arity", "1"])
    assert result.exit_code == 2


def test_budget_exceeded_exits_with_three(runner, problem_path):
    result = runner.invoke(cli, ["close", "--file", str(problem_path), "--gens", "AND,OR", "--arity", "3", "--budget", "1"])
    assert result.exit_code == 3
    assert "Budget" in result.output


def test_dot_export_of_the_indicator_family(runner, tmp_path):
    target = tmp_path / "meet.dot"
    result = runner.invoke(cli, ["check", "antichain-meet", "--dot", str(target)])
    assert result.exit_code == 0, result.output
    dot = target.read_text(encoding="utf-8")
    assert dot.startswith("digraph antichain_meet {")
    assert dot.count("->") == 7


def test_runs_are_byte_identical(runner):
    args = ["check", "compactness-witness", "--window", "6", "--a", "2", "--trials", "20", "--seed", "3", "--json"]
    first = runner.invoke(cli, args)
    second = runner.invoke(cli, args)
    assert first.exit_code == 0, first.output
    assert first.stdout == second.stdout


def test_config_show_and_set(runner, isolated_config):
    shown = runner.invoke(cli, ["config", "show"])
    assert "report_format = text" in shown.output
    updated = runner.invoke(cli, ["config", "set", "default_seed", "5"])
    assert updated.exit_code == 0, updated.output
    assert isolated_config.get_int("default_seed") == 5
    assert runner.invoke(cli, ["config", "set", "nope", "1"]).exit_code == 2
    assert runner.invoke(cli, ["config", "set", "report_format", "yaml"]).exit_code == 2


def test_report_format_from_config(runner, problem_path, isolated_config):
    isolated_config.set_value("report_format", "json")
    result = runner.invoke(cli, ["close", "--file", str(problem_path), "--gens", "NOT", "--arity", "1"])
    assert json.loads(result.stdout)["count"] == 2
