"""``member`` and ``local-member``: exact and interpolation-based membership."""

from __future__ import annotations

import itertools
import logging
from typing import List, Optional, Sequence

import click

from algebra.core import Operation, Universe, tabulate
from algebra.galois import Domain, No, clone_fragment, local_member
from algebra.report import CheckReport
from commands.common import (
    budget_or_default,
    emit_reports,
    guarded,
    load_problem,
    names_option,
    report_options,
    want_json,
)
from utils.problem_file import ProblemFileError, load_domains

log = logging.getLogger(__name__)

YES_LOCAL = "YES up to tested domains"


def domains_of_size(universe: Universe, arity: int, size: int) -> List[Domain]:
    """Every ``size``-element subset of u^n, in lexicographic order."""
    points = list(universe.tuples(arity))
    if not 1 <= size <= len(points):
        raise ProblemFileError(f"--domain-size muss zwischen 1 und {len(points)} liegen")
    return [tuple(combo) for combo in itertools.combinations(points, size)]


def exact_report(name: str, g: Operation, gens: Sequence[str], generators: Sequence[Operation], universe: Universe, budget: int) -> CheckReport:
    table = tabulate(g, universe)
    fragment = clone_fragment(generators, g.arity, universe, budget)
    inside = table in fragment
    return CheckReport(
        "member",
        inside,
        "YES" if inside else "NO",
        {"op": name, "generators": list(gens), "arity": g.arity, "fragment": len(fragment)},
        None if inside else {"table": list(table.entries)},
    )


def local_report(
    name: str,
    g: Operation,
    gens: Sequence[str],
    generators: Sequence[Operation],
    domains: Sequence[Domain],
    universe: Universe,
    budget: int,
) -> CheckReport:
    verdict = local_member(g, generators, domains, universe, budget)
    details = {"op": name, "generators": list(gens), "domains": len(domains)}
    if isinstance(verdict, No):
        certificate = {
            "domain": [list(args) for args in verdict.domain],
            "restriction": list(verdict.restriction),
            "exact": verdict.exact,
        }
        return CheckReport("local-member", False, "NO", details, certificate)
    return CheckReport("local-member", True, YES_LOCAL, details)


def _load(path: str, op: str, gens: str):
    problem = load_problem(path)
    universe = problem.require_universe()
    names = names_option(gens, "--gens")
    return universe, problem.operation(op), names, problem.generators(names)


@click.command(name="member", help="Liegt eine Operation im erzeugten Klon?")
@click.option("--file", "path", required=True, help="Problemdatei.")
@click.option("--op", required=True, help="Name der Operation.")
@click.option("--gens", required=True, help="Erzeuger, kommagetrennt.")
@click.option("--domains", "domains_path", default=None, help="JSON-Datei mit endlichen Domänen.")
@report_options
@guarded
def member_command(
    path: str,
    op: str,
    gens: str,
    domains_path: Optional[str],
    as_json: Optional[bool],
    seed: Optional[int],
    budget: Optional[int],
) -> int:
    universe, g, names, generators = _load(path, op, gens)
    if domains_path is None:
        report = exact_report(op, g, names, generators, universe, budget_or_default(budget))
    else:
        report = local_report(op, g, names, generators, load_domains(domains_path), universe, budget_or_default(budget))
    return emit_reports(report, want_json(as_json))


@click.command(name="local-member", help="Interpolationstest auf endlichen Domänen.")
@click.option("--file", "path", required=True, help="Problemdatei.")
@click.option("--op", required=True, help="Name der Operation.")
@click.option("--gens", required=True, help="Erzeuger, kommagetrennt.")
@click.option("--domains", "domains_path", default=None, help="JSON-Datei mit endlichen Domänen.")
@click.option("--domain-size", type=int, default=None, help="Alle Domänen dieser Größe testen.")
@report_options
@guarded
def local_member_command(
    path: str,
    op: str,
    gens: str,
    domains_path: Optional[str],
    domain_size: Optional[int],
    as_json: Optional[bool],
    seed: Optional[int],
    budget: Optional[int],
) -> int:
    if (domains_path is None) == (domain_size is None):
        raise ProblemFileError("genau eine von --domains und --domain-size angeben")
    universe, g, names, generators = _load(path, op, gens)
    if domains_path is not None:
        domains = load_domains(domains_path)
    else:
        domains = domains_of_size(universe, g.arity, domain_size or 0)
    log.debug("%d Domänen für %s", len(domains), op)
    report = local_report(op, g, names, generators, domains, universe, budget_or_default(budget))
    return emit_reports(report, want_json(as_json))


def setup(cli: click.Group) -> None:
    cli.add_command(member_command)
    cli.add_command(local_member_command)


__all__ = ["YES_LOCAL", "domains_of_size", "exact_report", "local_report", "member_command", "local_member_command", "setup"]
