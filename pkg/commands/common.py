"""Shared plumbing for the command modules: exit codes, error mapping, output."""

from __future__ import annotations

import functools
import json
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import click

from algebra.errors import AlgebraError, BudgetExceeded
from algebra.report import CheckReport
from config import config_manager
from utils.problem_file import ProblemFile, ProblemFileError, load_problem_file

log = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def guarded(command: Callable[..., int]) -> Callable[..., None]:
    """Run a command body and turn its result or exception into the exit code."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            code = command(*args, **kwargs)
        except BudgetExceeded as exc:
            click.echo(f"Budget überschritten: {exc}", err=True)
            code = EXIT_BUDGET
        except (ProblemFileError, AlgebraError, ValueError, KeyError) as exc:
            message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
            click.echo(f"Fehler: {message}", err=True)
            code = EXIT_USAGE
        click.get_current_context().exit(code)

    return wrapper


def report_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """``--json``, ``--seed`` and ``--budget``; unset values come from the configuration."""
    command = click.option("--budget", type=int, default=None, help="Obergrenze für Fragmente und Relationen.")(command)
    command = click.option("--seed", type=int, default=None, help="Seed für Stichproben.")(command)
    command = click.option("--json", "as_json", is_flag=True, default=None, help="Bericht als JSON ausgeben.")(command)
    return command


def want_json(flag: Optional[bool]) -> bool:
    if flag:
        return True
    return config_manager.get_str("report_format") == "json"


def seed_or_default(seed: Optional[int]) -> int:
    return seed if seed is not None else config_manager.get_int("default_seed")


def budget_or_default(budget: Optional[int], key: str = "fragment_budget") -> int:
    return budget if budget is not None else config_manager.get_int(key)


def load_problem(path: Optional[str]) -> ProblemFile:
    if not path:
        raise ProblemFileError("--file fehlt")
    return load_problem_file(path, box_radius=config_manager.get_int("group_box_radius"))


def names_option(raw: Optional[str], what: str) -> List[str]:
    names = [part.strip() for part in (raw or "").split(",") if part.strip()]
    if not names:
        raise ProblemFileError(f"{what} fehlt")
    return names


def _dump(value: Any) -> str:
    return json.dumps(value, indent=2, ensure_ascii=False)


def emit_reports(reports: Union[CheckReport, Sequence[CheckReport]], as_json: bool) -> int:
    """Print one or more reports to stdout; exit code 1 when any of them failed."""
    many = not isinstance(reports, CheckReport)
    items: List[CheckReport] = list(reports) if many else [reports]  # type: ignore[arg-type]
    if as_json:
        payload = [r.to_dict() for r in items] if many else items[0].to_dict()
        click.echo(_dump(payload))
    else:
        click.echo("\n\n".join(r.render_text() for r in items))
    return EXIT_PASS if all(items) else EXIT_FAIL


def emit_listing(title: str, payload: Dict[str, Any], key: str, rows: List[Any], as_json: bool) -> int:
    """Print a computed set (tables or tuples) in sorted order."""
    if as_json:
        click.echo(_dump({**payload, "count": len(rows), key: rows}))
    else:
        lines = [f"{title}: {len(rows)}"]
        lines.extend(json.dumps(row) for row in rows)
        click.echo("\n".join(lines))
    return EXIT_PASS


__all__ = [
    "EXIT_PASS",
    "EXIT_FAIL",
    "EXIT_USAGE",
    "EXIT_BUDGET",
    "guarded",
    "report_options",
    "want_json",
    "seed_or_default",
    "budget_or_default",
    "load_problem",
    "names_option",
    "emit_reports",
    "emit_listing",
]
