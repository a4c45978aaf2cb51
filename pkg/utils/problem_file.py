"""Line-oriented problem files: universe, operations, relations, groups, checks.

::

    universe 3
    op AND arity=2 table=[0,0,0,1]
    op P proj 2 1
    op T translation 5 group=Z12
    op FB indicator set={2,3} in=0 out=1
    op C const 1 arity=2
    op S patch inner=AND set={0,1}
    op H compose outer=AND inner=[P,P]
    op M builtin=min arity=2
    rel LE arity=2 tuples=[(0,0),(0,1),(1,1)]
    group Z12 z-rank=0 torsion=[12]
    subgroup H of=Z12 gens=[4,6]
    check pol-inv gens=AND arity=2

``#`` starts a comment. Names are unique across all declarations.
"""

from __future__ import annotations

import ast
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from algebra.core import (
    Constant,
    Indicator,
    Operation,
    Patch,
    Projection,
    Relation,
    Table,
    Universe,
    compose,
)
from algebra.errors import AlgebraError
from algebra.groups import DEFAULT_BOX_RADIUS, AbelianGroupPresentation, GroupWindow, SubgroupHandle, translation_op

log = logging.getLogger(__name__)

_KEY = re.compile(r"[A-Za-z][\w-]*=")
_CLOSING = {"[": "]", "{": "}", "(": ")"}


class ProblemFileError(ValueError):
    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        self.line_number = line_number
        prefix = f"Zeile {line_number}: " if line_number is not None else ""
        super().__init__(prefix + message)


@dataclass
class CheckDirective:
    kind: str
    params: Dict[str, str]
    line_number: int


@dataclass
class ProblemFile:
    universe: Optional[Universe] = None
    operations: Dict[str, Operation] = field(default_factory=dict)
    relations: Dict[str, Relation] = field(default_factory=dict)
    groups: Dict[str, AbelianGroupPresentation] = field(default_factory=dict)
    windows: Dict[str, GroupWindow] = field(default_factory=dict)
    subgroups: Dict[str, SubgroupHandle] = field(default_factory=dict)
    checks: List[CheckDirective] = field(default_factory=list)
    source: str = "<text>"

    def require_universe(self) -> Universe:
        if self.universe is None:
            raise ProblemFileError(f"{self.source} deklariert kein Universum (universe m)")
        return self.universe

    def names(self) -> List[str]:
        return [*self.operations, *self.relations, *self.groups, *self.subgroups]

    def operation(self, name: str) -> Operation:
        if name not in self.operations:
            raise ProblemFileError(f"Unbekannte Operation: {name}")
        return self.operations[name]

    def relation(self, name: str) -> Relation:
        if name not in self.relations:
            raise ProblemFileError(f"Unbekannte Relation: {name}")
        return self.relations[name]

    def generators(self, names: Sequence[str]) -> List[Operation]:
        """Operations by name; a subgroup name stands for the translations by its generators."""
        result: List[Operation] = []
        for name in names:
            if name in self.subgroups:
                subgroup = self.subgroups[name]
                window = self._window_of(subgroup.group)
                result.extend(translation_op(g, window) for g in subgroup.generators)
            else:
                result.append(self.operation(name))
        return result

    def _window_of(self, group: AbelianGroupPresentation) -> GroupWindow:
        for name, candidate in self.groups.items():
            if candidate == group:
                return self.windows[name]
        raise ProblemFileError("Untergruppe ohne deklarierte Gruppe")


def split_names(raw: Optional[str]) -> List[str]:
    if not raw:
        return []
    return [part.strip() for part in raw.strip("[]").split(",") if part.strip()]


def _literal(raw: str, line_number: int) -> Any:
    try:
        return ast.literal_eval(raw)
    except (ValueError, SyntaxError):
        raise ProblemFileError(f"Wert {raw!r} ist nicht lesbar", line_number) from None


def _int(raw: Optional[str], what: str, line_number: int) -> int:
    if raw is None:
        raise ProblemFileError(f"{what} fehlt", line_number)
    try:
        return int(raw)
    except ValueError:
        raise ProblemFileError(f"{what} muss eine ganze Zahl sein, nicht {raw!r}", line_number) from None


def _int_set(raw: Optional[str], what: str, line_number: int) -> frozenset:
    if raw is None:
        raise ProblemFileError(f"{what} fehlt", line_number)
    value = _literal(raw if raw not in ("{}", "[]") else "[]", line_number)
    if isinstance(value, int):
        value = [value]
    try:
        return frozenset(int(v) for v in value)
    except TypeError:
        raise ProblemFileError(f"{what} muss eine Menge ganzer Zahlen sein", line_number) from None


def _element(raw: str, line_number: int) -> Any:
    value = _literal(raw, line_number)
    if isinstance(value, (int, tuple, list)):
        return value
    raise ProblemFileError(f"Gruppenelement {raw!r} ist weder Zahl noch Tupel", line_number)


def _words(rest: str) -> List[str]:
    """Whitespace-separated words; brackets of any kind keep their content together."""
    words: List[str] = []
    current: List[str] = []
    stack: List[str] = []
    for char in rest:
        if char in _CLOSING:
            stack.append(_CLOSING[char])
        elif char in _CLOSING.values():
            if not stack or stack.pop() != char:
                raise ValueError(f"Unerwartetes {char!r} in {rest!r}")
        if char.isspace() and not stack:
            if current:
                words.append("".join(current))
                current = []
            continue
        current.append(char)
    if stack:
        raise ValueError(f"Nicht geschlossene Klammer in {rest!r}, erwartet {stack[-1]!r}")
    if current:
        words.append("".join(current))
    return words


def _tokens(rest: str) -> Tuple[List[str], Dict[str, str]]:
    positional: List[str] = []
    params: Dict[str, str] = {}
    for word in _words(rest):
        if _KEY.match(word):
            key, _, value = word.partition("=")
            params[key] = value
        else:
            positional.append(word)
    return positional, params


_BUILTINS: Dict[str, Callable[[Universe, int], Operation]] = {
    "min": lambda u, n: Table.from_function(u, n, lambda *xs: min(xs)),
    "max": lambda u, n: Table.from_function(u, n, lambda *xs: max(xs)),
    "neg": lambda u, n: Table.from_function(u, 1, lambda x: u.maximum - x),
    "majority": lambda u, n: Table.from_function(
        u, 3, lambda x, y, z: x if x in (y, z) else (y if y == z else x)
    ),
}


class _Parser:
    def __init__(self, source: str, box_radius: int = DEFAULT_BOX_RADIUS) -> None:
        self.problem = ProblemFile(source=source)
        self.box_radius = box_radius

    def parse(self, text: str) -> ProblemFile:
        for line_number, raw_line in enumerate(text.splitlines(), start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            keyword, _, rest = line.partition(" ")
            handler = getattr(self, f"_parse_{keyword.replace('-', '_')}", None)
            if handler is None:
                raise ProblemFileError(f"Unbekanntes Schlüsselwort {keyword!r}", line_number)
            try:
                handler(rest.strip(), line_number)
            except ProblemFileError:
                raise
            except (AlgebraError, ValueError, TypeError) as exc:
                raise ProblemFileError(str(exc), line_number) from exc
        log.debug(
            "%s: %d Operationen, %d Relationen, %d Prüfungen",
            self.problem.source,
            len(self.problem.operations),
            len(self.problem.relations),
            len(self.problem.checks),
        )
        return self.problem

    def _claim(self, name: str, line_number: int) -> None:
        if not re.fullmatch(r"[A-Za-z_][\w]*", name):
            raise ProblemFileError(f"Ungültiger Name {name!r}", line_number)
        if name in self.problem.names():
            raise ProblemFileError(f"Name {name!r} ist bereits vergeben", line_number)

    def _universe(self, line_number: int) -> Universe:
        if self.problem.universe is None:
            raise ProblemFileError("universe muss vor Tabellen stehen", line_number)
        return self.problem.universe

    # ------------------------------------------------------------------
    def _parse_universe(self, rest: str, line_number: int) -> None:
        if self.problem.universe is not None:
            raise ProblemFileError("universe ist doppelt deklariert", line_number)
        self.problem.universe = Universe(_int(rest or None, "Größe des Universums", line_number))

    def _parse_op(self, rest: str, line_number: int) -> None:
        positional, params = _tokens(rest)
        if not positional:
            raise ProblemFileError("op braucht einen Namen", line_number)
        name, *args = positional
        self._claim(name, line_number)
        self.problem.operations[name] = self._build_op(args, params, line_number)

    def _build_op(self, args: List[str], params: Dict[str, str], line_number: int) -> Operation:
        kind = args[0] if args else None
        if "builtin" in params:
            builder = _BUILTINS.get(params["builtin"])
            if builder is None:
                raise ProblemFileError(f"Unbekannte eingebaute Operation {params['builtin']!r}", line_number)
            return builder(self._universe(line_number), _int(params.get("arity", "2"), "arity", line_number))
        if "table" in params:
            entries = _literal(params["table"], line_number)
            arity = _int(params.get("arity"), "arity", line_number)
            return Table(self._universe(line_number), arity, tuple(int(v) for v in entries))
        if kind == "proj":
            if len(args) != 3:
                raise ProblemFileError("proj erwartet n und k", line_number)
            return Projection(_int(args[1], "n", line_number), _int(args[2], "k", line_number))
        if kind == "translation":
            if len(args) != 2:
                raise ProblemFileError("translation erwartet genau eine Verschiebung", line_number)
            shift = _element(args[1], line_number)
            group_name = params.get("group")
            if group_name is None:
                return translation_op(_int(args[1], "Verschiebung", line_number))
            if group_name not in self.problem.windows:
                raise ProblemFileError(f"Unbekannte Gruppe {group_name!r}", line_number)
            return translation_op(shift, self.problem.windows[group_name])
        if kind == "indicator":
            members = _int_set(params.get("set"), "set", line_number)
            return Indicator(members, _int(params.get("in"), "in", line_number), _int(params.get("out"), "out", line_number))
        if kind == "const":
            if len(args) != 2:
                raise ProblemFileError("const erwartet einen Wert", line_number)
            return Constant(_int(args[1], "Wert", line_number), _int(params.get("arity", "1"), "arity", line_number))
        if kind == "patch":
            inner = self._ref(params.get("inner"), line_number)
            return Patch(inner, _int_set(params.get("set"), "set", line_number))
        if kind == "compose":
            outer = self._ref(params.get("outer"), line_number)
            inners = [self._ref(n, line_number) for n in split_names(params.get("inner"))]
            return compose(outer, inners)
        raise ProblemFileError(f"Unbekannte Operationsart {kind!r}", line_number)

    def _ref(self, name: Optional[str], line_number: int) -> Operation:
        if not name or name not in self.problem.operations:
            raise ProblemFileError(f"Verweis auf unbekannte Operation {name!r}", line_number)
        return self.problem.operations[name]

    def _parse_rel(self, rest: str, line_number: int) -> None:
        positional, params = _tokens(rest)
        if len(positional) != 1:
            raise ProblemFileError("rel braucht genau einen Namen", line_number)
        name = positional[0]
        self._claim(name, line_number)
        rows = _literal(params.get("tuples", "[]"), line_number)
        arity = _int(params.get("arity"), "arity", line_number)
        normalised = [tuple(row) if isinstance(row, (tuple, list)) else (row,) for row in rows]
        self.problem.relations[name] = Relation.of(self._universe(line_number), normalised, arity)

    def _parse_group(self, rest: str, line_number: int) -> None:
        positional, params = _tokens(rest)
        if len(positional) != 1:
            raise ProblemFileError("group braucht genau einen Namen", line_number)
        name = positional[0]
        self._claim(name, line_number)
        torsion = tuple(int(m) for m in _literal(params.get("torsion", "[]"), line_number))
        group = AbelianGroupPresentation(_int(params.get("z-rank", "0"), "z-rank", line_number), torsion)
        bound = params.get("bound")
        window = group.window(_int(bound, "bound", line_number) if bound is not None else None)
        if self.problem.universe is not None and window.size != self.problem.universe.size:
            raise ProblemFileError(
                f"Fenster von {name} hat {window.size} Elemente, das Universum {self.problem.universe.size}",
                line_number,
            )
        self.problem.groups[name] = group
        self.problem.windows[name] = window

    def _parse_subgroup(self, rest: str, line_number: int) -> None:
        positional, params = _tokens(rest)
        if len(positional) != 1:
            raise ProblemFileError("subgroup braucht genau einen Namen", line_number)
        name = positional[0]
        self._claim(name, line_number)
        group_name = params.get("of")
        if group_name not in self.problem.groups:
            raise ProblemFileError(f"Unbekannte Gruppe {group_name!r}", line_number)
        gens = _literal(params.get("gens", "[]"), line_number)
        if isinstance(gens, int):
            gens = [gens]
        group = self.problem.groups[group_name]
        self.problem.subgroups[name] = SubgroupHandle.generated(group, gens or [group.zero], box_radius=self.box_radius, label=name)

    def _parse_check(self, rest: str, line_number: int) -> None:
        positional, params = _tokens(rest)
        if len(positional) != 1:
            raise ProblemFileError("check braucht genau eine Prüfart", line_number)
        self.problem.checks.append(CheckDirective(positional[0], params, line_number))


def parse_problem_text(text: str, source: str = "<text>", box_radius: int = DEFAULT_BOX_RADIUS) -> ProblemFile:
    return _Parser(source, box_radius).parse(text)


def load_problem_file(path: str, box_radius: int = DEFAULT_BOX_RADIUS) -> ProblemFile:
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"{path} konnte nicht gelesen werden: {exc}") from exc
    return parse_problem_text(text, source=str(file_path), box_radius=box_radius)


def load_domains(path: str) -> List[Tuple[Tuple[int, ...], ...]]:
    """JSON list of domains, each a list of argument tuples."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ProblemFileError(f"Domänen aus {path} nicht lesbar: {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise ProblemFileError(f"{path} muss eine nichtleere Liste von Domänen enthalten")
    domains = []
    for index, domain in enumerate(raw, start=1):
        try:
            domains.append(tuple(tuple(int(v) for v in (args if isinstance(args, list) else [args])) for args in domain))
        except (TypeError, ValueError):
            raise ProblemFileError(f"Domäne {index} in {path} ist keine Liste von Tupeln") from None
    return domains


__all__ = [
    "ProblemFileError",
    "CheckDirective",
    "ProblemFile",
    "split_names",
    "parse_problem_text",
    "load_problem_file",
    "load_domains",
]
