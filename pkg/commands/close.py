"""``close``, ``pol`` and ``inv``: the two sides of the Pol-Inv connection."""

from __future__ import annotations

import ast
from typing import List, Optional, Tuple

import click

from algebra.galois import clone_fragment, inv_generate, pol
from commands.common import (
    budget_or_default,
    emit_listing,
    guarded,
    load_problem,
    names_option,
    report_options,
    want_json,
)
from utils.problem_file import ProblemFileError


def _parse_tuples(raw: str) -> List[Tuple[int, ...]]:
    try:
        value = ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        raise ProblemFileError(f"--tuples ist nicht lesbar: {raw!r}") from None
    if isinstance(value, tuple) and value and all(isinstance(v, int) for v in value):
        value = [value]
    try:
        return [tuple(int(v) for v in (row if isinstance(row, (tuple, list)) else (row,))) for row in value]
    except TypeError:
        raise ProblemFileError("--tuples muss eine Liste von Tupeln sein") from None


@click.command(name="close", help="n-stelliges Fragment des erzeugten Klons berechnen.")
@click.option("--file", "path", required=True, help="Problemdatei.")
@click.option("--gens", required=True, help="Erzeuger, kommagetrennt.")
@click.option("--arity", type=int, required=True, help="Stelligkeit des Fragments.")
@report_options
@guarded
def close_command(path: str, gens: str, arity: int, as_json: Optional[bool], seed: Optional[int], budget: Optional[int]) -> int:
    problem = load_problem(path)
    universe = problem.require_universe()
    generators = problem.generators(names_option(gens, "--gens"))
    fragment = clone_fragment(generators, arity, universe, budget_or_default(budget))
    return emit_listing(
        f"Fragment der Stelligkeit {arity} über {universe}",
        {"command": "close", "universe": universe.size, "arity": arity, "generators": names_option(gens, "--gens")},
        "tables",
        [list(entries) for entries in fragment.entries()],
        want_json(as_json),
    )


@click.command(name="pol", help="Polymorphismen einer Relationenmenge einer Stelligkeit.")
@click.option("--file", "path", required=True, help="Problemdatei.")
@click.option("--rels", required=True, help="Relationen, kommagetrennt.")
@click.option("--arity", type=int, required=True, help="Stelligkeit der Polymorphismen.")
@report_options
@guarded
def pol_command(path: str, rels: str, arity: int, as_json: Optional[bool], seed: Optional[int], budget: Optional[int]) -> int:
    problem = load_problem(path)
    universe = problem.require_universe()
    names = names_option(rels, "--rels")
    fragment = pol([problem.relation(name) for name in names], arity, universe, budget_or_default(budget))
    return emit_listing(
        f"Polymorphismen der Stelligkeit {arity} über {universe}",
        {"command": "pol", "universe": universe.size, "arity": arity, "relations": names},
        "tables",
        [list(entries) for entries in fragment.entries()],
        want_json(as_json),
    )


@click.command(name="inv", help="Kleinste invariante Relation, die gegebene Tupel enthält.")
@click.option("--file", "path", required=True, help="Problemdatei.")
@click.option("--gens", required=True, help="Erzeuger, kommagetrennt.")
@click.option("--rel", "rel_name", default=None, help="Relation aus der Datei als Startmenge.")
@click.option("--tuples", default=None, help="Startmenge als Liste, z.B. \"[(0,1),(1,0)]\".")
@report_options
@guarded
def inv_command(
    path: str,
    gens: str,
    rel_name: Optional[str],
    tuples: Optional[str],
    as_json: Optional[bool],
    seed: Optional[int],
    budget: Optional[int],
) -> int:
    if (rel_name is None) == (tuples is None):
        raise ProblemFileError("genau eine von --rel und --tuples angeben")
    problem = load_problem(path)
    universe = problem.require_universe()
    names = names_option(gens, "--gens")
    rows = problem.relation(rel_name).rows() if rel_name else _parse_tuples(tuples or "")
    relation = inv_generate(problem.generators(names), rows, universe, budget_or_default(budget, "relation_budget"))
    return emit_listing(
        f"Erzeugte Relation der Stelligkeit {relation.arity} über {universe}",
        {"command": "inv", "universe": universe.size, "arity": relation.arity, "generators": names},
        "tuples",
        [list(row) for row in relation.rows()],
        want_json(as_json),
    )


def setup(cli: click.Group) -> None:
    cli.add_command(close_command)
    cli.add_command(pol_command)
    cli.add_command(inv_command)


__all__ = ["close_command", "pol_command", "inv_command", "setup"]
