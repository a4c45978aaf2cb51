"""``check``: the property checks, from flags or from the directives of a problem file."""

from __future__ import annotations

import ast
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import click

from algebra import checks
from algebra.core import Universe
from algebra.lattice import CloneHandle, export_dot, leq_pairs
from algebra.report import CheckReport
from commands.common import (
    emit_reports,
    guarded,
    load_problem,
    names_option,
    report_options,
    seed_or_default,
    want_json,
)
from config import config_manager
from utils.problem_file import ProblemFile, ProblemFileError
from utils.run_monitor import default_monitor

log = logging.getLogger(__name__)


@dataclass
class RunSettings:
    seed: int
    budget: int
    partial_budget: int
    semigroup_budget: int
    generator_seed: int
    generator_cap: int = 2

    @classmethod
    def from_config(cls, seed: Optional[int] = None, budget: Optional[int] = None) -> "RunSettings":
        return cls(
            seed=seed_or_default(seed),
            budget=budget if budget is not None else config_manager.get_int("fragment_budget"),
            partial_budget=config_manager.get_int("partial_budget"),
            semigroup_budget=config_manager.get_int("semigroup_budget"),
            generator_seed=config_manager.get_int("generator_seed"),
            generator_cap=config_manager.get_int("relational_generator_cap"),
        )


class CheckParams:
    """Typed access to ``key=value`` parameters coming from flags or file directives."""

    def __init__(self, raw: Mapping[str, Any], line_number: Optional[int] = None) -> None:
        self.raw = {key: value for key, value in raw.items() if value is not None}
        self.line_number = line_number

    def _fail(self, message: str) -> ProblemFileError:
        return ProblemFileError(message, self.line_number)

    def number(self, key: str, default: int) -> int:
        value = self.raw.get(key, default)
        try:
            return int(value)
        except (TypeError, ValueError):
            raise self._fail(f"{key} muss eine ganze Zahl sein, nicht {value!r}") from None

    def numbers(self, key: str, default: Sequence[int]) -> Tuple[int, ...]:
        value = self.raw.get(key)
        if value is None:
            return tuple(default)
        if isinstance(value, str):
            value = self._literal(key, value if value.startswith(("[", "(", "{")) else f"[{value}]")
        if isinstance(value, int):
            value = [value]
        try:
            return tuple(int(v) for v in value)
        except (TypeError, ValueError):
            raise self._fail(f"{key} muss eine Liste ganzer Zahlen sein") from None

    def subsets(self, key: str, default: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
        value = self.raw.get(key)
        if value is None:
            return tuple(tuple(s) for s in default)
        parsed = self._literal(key, value) if isinstance(value, str) else value
        try:
            return tuple(tuple(int(v) for v in (s if isinstance(s, (list, tuple, set, frozenset)) else [s])) for s in parsed)
        except (TypeError, ValueError):
            raise self._fail(f"{key} muss eine Liste von Teilmengen sein") from None

    def names(self, key: str) -> List[str]:
        value = self.raw.get(key)
        if value is None:
            return []
        return [part.strip() for part in str(value).strip("[]").split(",") if part.strip()]

    def _literal(self, key: str, value: str) -> Any:
        try:
            return ast.literal_eval(value)
        except (ValueError, SyntaxError):
            raise self._fail(f"{key}={value!r} ist nicht lesbar") from None


# ----------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------
def _pol_inv(params: CheckParams, problem: Optional[ProblemFile], settings: RunSettings) -> CheckReport:
    names = params.names("gens")
    if not names:
        return checks.pol_inv_random_check(params.number("count", 25), settings.seed, settings.budget)
    if problem is None:
        raise params._fail("pol-inv mit gens braucht --file")
    arity = params.raw.get("arity")
    arities = (params.number("arity", 1),) if arity is not None else (1, 2)
    return checks.pol_inv_check(problem.generators(names), problem.require_universe(), arities, settings.budget)


def run_check(
    kind: str,
    params: CheckParams,
    problem: Optional[ProblemFile],
    settings: RunSettings,
) -> CheckReport:
    if kind not in checks.CHECK_KINDS:
        raise params._fail(f"Unbekannte Prüfart {kind!r}")
    log.info("Prüfung %s mit %s", kind, params.raw)
    with default_monitor.track(f"check.{kind}"):
        if kind == "compactness-witness":
            return checks.compactness_witness_check(
                window=params.number("window", 10),
                a=params.number("a", 3),
                trials=params.number("trials", 200),
                interpolants=params.number("interpolants", 50),
                inclusion_window=params.number("inclusion-window", 5),
                seed=settings.seed,
            )
        if kind == "finite-embed":
            return checks.finite_embed_check(
                size=params.number("size", 3),
                subset=params.numbers("subset", (0, 1)),
                cap=params.number("cap", settings.generator_cap),
                pairs=params.number("pairs", 20),
                seed=settings.seed,
            )
        if kind == "translation-lattice":
            return checks.translation_lattice_check(params.number("modulus", 12), settings.budget, settings.semigroup_budget)
        if kind == "antichain-join":
            return checks.antichain_join_check(
                size=params.number("size", 3),
                subsets=params.subsets("subsets", ((0,), (1,), (0, 1))),
                cap=params.number("cap", settings.generator_cap),
                budget=settings.budget,
                generator_seed=settings.generator_seed,
            )
        if kind == "antichain-meet":
            return checks.antichain_meet_check(
                size=params.number("size", 5),
                candidates=params.numbers("subset", (2, 3, 4)),
                a=params.number("a", 0),
                b=params.number("b", 1),
                cap=params.number("cap", settings.generator_cap),
                budget=settings.budget,
            )
        if kind == "covering":
            return checks.covering_default_check(
                size=params.number("size", 3),
                subset=params.numbers("subset", (0, 1)),
                cap=params.number("cap", settings.generator_cap),
                trials=params.number("trials", 50),
                seed=settings.seed,
                budget=settings.budget,
                generator_seed=settings.generator_seed,
            )
        if kind == "sigma-join":
            return checks.sigma_join_default_check(settings.partial_budget)
        return _pol_inv(params, problem, settings)


def family_for(kind: str, params: CheckParams, settings: RunSettings) -> Tuple[List[CloneHandle], int]:
    """The clone family a check compares, with the arity cap for the order."""
    cap = params.number("cap", settings.generator_cap)
    if kind == "antichain-join":
        handles = checks.pol_subset_family(
            params.number("size", 3),
            params.subsets("subsets", ((0,), (1,), (0, 1))),
            cap,
            settings.budget,
            settings.generator_seed,
        )
        return handles, cap
    if kind == "antichain-meet":
        handles, bottom = checks.indicator_family(
            params.number("size", 5),
            params.numbers("subset", (2, 3, 4)),
            params.number("a", 0),
            params.number("b", 1),
            settings.budget,
        )
        return [bottom, *handles], 1
    if kind == "translation-lattice":
        _window, _subgroups, handles = checks.translation_family(params.number("modulus", 12), settings.budget)
        return handles, 1
    if kind == "finite-embed":
        return checks.boolean_clones_on(Universe(2)), cap
    if kind == "sigma-join":
        return checks.boolean_family(), cap
    raise params._fail(f"{kind} vergleicht keine Klonfamilie, --dot ist nicht möglich")


def write_dot(kind: str, params: CheckParams, settings: RunSettings, target: str) -> None:
    handles, cap = family_for(kind, params, settings)
    text = export_dot(handles, leq_pairs(handles, cap), name=kind.replace("-", "_"))
    try:
        Path(target).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"{target} konnte nicht geschrieben werden: {exc}") from exc
    log.info("Hasse-Diagramm mit %d Knoten nach %s geschrieben", len(handles), target)


def _run_file(problem: ProblemFile, settings: RunSettings) -> List[CheckReport]:
    if not problem.checks:
        raise ProblemFileError(f"{problem.source} enthält keine check-Zeilen")
    reports = []
    for directive in problem.checks:
        params = CheckParams(directive.params, directive.line_number)
        reports.append(run_check(directive.kind, params, problem, settings))
    return reports


@click.command(name="check", help="Eigenschaften prüfen: " + ", ".join(checks.CHECK_KINDS) + ".")
@click.argument("kind", type=click.Choice(checks.CHECK_KINDS), required=False)
@click.option("--file", "path", default=None, help="Problemdatei; ohne KIND werden ihre check-Zeilen ausgeführt.")
@click.option("--gens", default=None, help="Erzeuger für pol-inv, kommagetrennt.")
@click.option("--arity", type=int, default=None, help="Stelligkeit für pol-inv.")
@click.option("--size", type=int, default=None, help="Größe des Universums.")
@click.option("--subset", default=None, help="Teilmenge, z.B. 0,1.")
@click.option("--cap", type=int, default=None, help="Stelligkeitsgrenze für Ordnungsvergleiche.")
@click.option("--trials", type=int, default=None, help="Anzahl der Stichproben.")
@click.option("--modulus", type=int, default=None, help="Ordnung der zyklischen Gruppe.")
@click.option("--window", type=int, default=None, help="Fenstergröße der natürlichen Zahlen.")
@click.option("--a", "a_param", type=int, default=None, help="Parameter a der Familien.")
@click.option("--dot", "dot_path", default=None, help="Hasse-Diagramm der Klonfamilie als DOT schreiben.")
@report_options
@guarded
def check_command(
    kind: Optional[str],
    path: Optional[str],
    gens: Optional[str],
    arity: Optional[int],
    size: Optional[int],
    subset: Optional[str],
    cap: Optional[int],
    trials: Optional[int],
    modulus: Optional[int],
    window: Optional[int],
    a_param: Optional[int],
    dot_path: Optional[str],
    as_json: Optional[bool],
    seed: Optional[int],
    budget: Optional[int],
) -> int:
    settings = RunSettings.from_config(seed, budget)
    if kind is None:
        if path is None:
            raise ProblemFileError("KIND oder --file angeben")
        return emit_reports(_run_file(load_problem(path), settings), want_json(as_json))
    problem = load_problem(path) if path else None
    raw: Dict[str, Any] = {
        "gens": ",".join(names_option(gens, "--gens")) if gens else None,
        "arity": arity,
        "size": size,
        "subset": subset,
        "cap": cap,
        "trials": trials,
        "modulus": modulus,
        "window": window,
        "a": a_param,
    }
    params = CheckParams(raw)
    report = run_check(kind, params, problem, settings)
    if dot_path:
        write_dot(kind, params, settings, dot_path)
    return emit_reports(report, want_json(as_json))


def setup(cli: click.Group) -> None:
    cli.add_command(check_command)


__all__ = ["RunSettings", "CheckParams", "run_check", "family_for", "write_dot", "check_command", "setup"]
