from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Iterable, Iterator, Optional, Protocol, Sequence, Tuple

from algebra.errors import ArityMismatch, UniverseMismatch, ValueEscapesWindow

log = logging.getLogger(__name__)

Args = Tuple[int, ...]


@dataclass(frozen=True)
class Universe:
    """Finite window {0, ..., size-1} of the countable base set, ordered naturally."""

    size: int

    def __post_init__(self) -> None:
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"universe size must be a positive integer, got {self.size!r}")

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def maximum(self) -> int:
        return self.size - 1

    def contains(self, value: object) -> bool:
        return isinstance(value, int) and 0 <= value < self.size

    def tuples(self, arity: int) -> Iterator[Args]:
        """All argument tuples of the given arity in row-major order."""
        return itertools.product(range(self.size), repeat=arity)

    def count(self, arity: int) -> int:
        return self.size ** arity

    def __str__(self) -> str:
        return f"{{0..{self.size - 1}}}"


def index_of(args: Sequence[int], size: int) -> int:
    """Row-major position of ``args``: sum of x_i * size**(n-i)."""
    index = 0
    for value in args:
        index = index * size + value
    return index


class GroupShift(Protocol):
    def shift(self, amount: object, code: int) -> int: ...

    def describe(self, amount: object) -> str: ...


# ----------------------------------------------------------------------
# Operations
# ----------------------------------------------------------------------
class Operation:
    """An n-ary operation; concrete kinds below are immutable values."""

    arity: int

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__.lower()

    def __call__(self, *args: int) -> int:
        return evaluate(self, args)


@dataclass(frozen=True)
class Table(Operation):
    universe: Universe
    arity: int
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityMismatch("operations have arity at least 1")
        expected = self.universe.count(self.arity)
        if len(self.entries) != expected:
            raise ArityMismatch(
                f"table of arity {self.arity} over {self.universe} needs {expected} entries, got {len(self.entries)}"
            )
        for position, value in enumerate(self.entries):
            if not self.universe.contains(value):
                raise ValueEscapesWindow((position,), value, f"table entry {value!r} is not in {self.universe}")

    @classmethod
    def from_function(cls, universe: Universe, arity: int, fn: Callable[..., int]) -> "Table":
        return cls(universe, arity, tuple(fn(*args) for args in universe.tuples(arity)))

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        for value in args:
            if not self.universe.contains(value):
                raise ValueEscapesWindow(args, value, f"argument {value!r} is not in {self.universe}")
        return self.entries[index_of(args, self.universe.size)]

    def describe(self) -> str:
        return f"table[{','.join(str(v) for v in self.entries)}]"


@dataclass(frozen=True)
class Projection(Operation):
    arity: int
    index: int

    def __post_init__(self) -> None:
        if self.arity < 1 or not 1 <= self.index <= self.arity:
            raise ArityMismatch(f"projection needs 1 <= k <= n, got n={self.arity}, k={self.index}")

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        return args[self.index - 1]

    def describe(self) -> str:
        return f"proj({self.arity},{self.index})"


@dataclass(frozen=True)
class Translation(Operation):
    """x -> shift + x. Without a group window the shift is plain integer addition."""

    shift: object
    window: Optional[GroupShift] = field(default=None, compare=True)

    @property
    def arity(self) -> int:  # type: ignore[override]
        return 1

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        if self.window is None:
            return int(self.shift) + args[0]  # type: ignore[call-overload]
        return self.window.shift(self.shift, args[0])

    def describe(self) -> str:
        if self.window is None:
            return f"translation({self.shift})"
        return f"translation({self.window.describe(self.shift)})"


@dataclass(frozen=True)
class Indicator(Operation):
    """f_A: ``inside`` on members of the set, ``outside`` everywhere else."""

    members: FrozenSet[int]
    inside: int
    outside: int

    @property
    def arity(self) -> int:  # type: ignore[override]
        return 1

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        return self.inside if args[0] in self.members else self.outside

    def describe(self) -> str:
        return f"indicator({sorted(self.members)},{self.inside},{self.outside})"


@dataclass(frozen=True)
class Constant(Operation):
    value: int
    arity: int = 1

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityMismatch("operations have arity at least 1")

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        return self.value

    def describe(self) -> str:
        return f"const({self.value},{self.arity})"


@dataclass(frozen=True)
class Patch(Operation):
    """s(x, y) = y on subset^m, inner(x) elsewhere."""

    inner: Operation
    subset: FrozenSet[int]

    @property
    def arity(self) -> int:  # type: ignore[override]
        return self.inner.arity + 1

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        head = args[:-1]
        if all(value in self.subset for value in head):
            return args[-1]
        return evaluate(self.inner, head, universe)

    def describe(self) -> str:
        return f"patch({self.inner.describe()},{sorted(self.subset)})"


@dataclass(frozen=True)
class Composed(Operation):
    outer: Operation
    inners: Tuple[Operation, ...]

    def __post_init__(self) -> None:
        if len(self.inners) != self.outer.arity:
            raise ArityMismatch(f"outer arity {self.outer.arity} needs as many inner operations, got {len(self.inners)}")
        if len({inner.arity for inner in self.inners}) != 1:
            raise ArityMismatch("inner operations must share one arity")

    @property
    def arity(self) -> int:  # type: ignore[override]
        return self.inners[0].arity

    def _apply(self, args: Args, universe: Optional[Universe]) -> int:
        values = tuple(evaluate(inner, args, universe) for inner in self.inners)
        return evaluate(self.outer, values, universe)

    def describe(self) -> str:
        return f"{self.outer.describe()}({', '.join(inner.describe() for inner in self.inners)})"


# ----------------------------------------------------------------------
# Relations
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Relation:
    universe: Universe
    arity: int
    tuples: FrozenSet[Args]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityMismatch("relations have arity at least 1")
        for row in self.tuples:
            if len(row) != self.arity:
                raise ArityMismatch(f"tuple {row!r} does not have length {self.arity}")
            for value in row:
                if not self.universe.contains(value):
                    raise ValueEscapesWindow(row, value, f"tuple {row!r} leaves {self.universe}")

    @classmethod
    def of(cls, universe: Universe, rows: Iterable[Sequence[int]], arity: Optional[int] = None) -> "Relation":
        frozen = frozenset(tuple(row) for row in rows)
        if arity is None:
            if not frozen:
                raise ArityMismatch("cannot infer the arity of an empty relation")
            arity = len(next(iter(frozen)))
        return cls(universe, arity, frozen)

    @classmethod
    def unary(cls, universe: Universe, subset: Iterable[int]) -> "Relation":
        return cls(universe, 1, frozenset((value,) for value in subset))

    def rows(self) -> list[Args]:
        return sorted(self.tuples)

    def __contains__(self, row: object) -> bool:
        return row in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)


# ----------------------------------------------------------------------
# Operations on operations
# ----------------------------------------------------------------------
def evaluate(f: Operation, args: Sequence[int], universe: Optional[Universe] = None) -> int:
    args = tuple(args)
    if len(args) != f.arity:
        raise ArityMismatch(f"{f.describe()} has arity {f.arity}, got {len(args)} arguments")
    if universe is not None:
        for value in args:
            if not universe.contains(value):
                raise ValueEscapesWindow(args, value, f"argument {value!r} is not in {universe}")
    value = f._apply(args, universe)
    if universe is not None and not universe.contains(value):
        raise ValueEscapesWindow(args, value)
    return value


def tabulate(f: Operation, universe: Universe) -> Table:
    if isinstance(f, Table):
        if f.universe != universe:
            raise UniverseMismatch(f"table over {f.universe} cannot be read over {universe}")
        return f
    entries = tuple(evaluate(f, args, universe) for args in universe.tuples(f.arity))
    return Table(universe, f.arity, entries)


def compose(f: Operation, gs: Sequence[Operation]) -> Operation:
    gs = tuple(gs)
    if len(gs) != f.arity:
        raise ArityMismatch(f"{f.describe()} has arity {f.arity}, got {len(gs)} inner operations")
    if len({g.arity for g in gs}) != 1:
        raise ArityMismatch("inner operations must share one arity")
    node = Composed(f, gs)
    tables = [part for part in (f, *gs) if isinstance(part, Table)]
    if not tables:
        return node
    universe = tables[0].universe
    if any(table.universe != universe for table in tables):
        raise UniverseMismatch("cannot compose tables over different universes")
    try:
        return tabulate(node, universe)
    except ValueEscapesWindow as exc:
        log.debug("compose bleibt symbolisch: %s", exc)
        return node


def preserves(f: Operation, relation: Relation) -> bool:
    rows = relation.rows()
    for combo in itertools.product(rows, repeat=f.arity):
        image = tuple(
            evaluate(f, tuple(row[j] for row in combo), relation.universe) for j in range(relation.arity)
        )
        if image not in relation.tuples:
            return False
    return True


def agree_on(f: Operation, g: Operation, domain: Iterable[Sequence[int]], universe: Optional[Universe] = None) -> bool:
    if f.arity != g.arity:
        raise ArityMismatch(f"cannot compare arity {f.arity} with arity {g.arity}")
    for args in domain:
        if len(args) != f.arity:
            raise ArityMismatch(f"domain tuple {tuple(args)!r} does not have length {f.arity}")
        if evaluate(f, args, universe) != evaluate(g, args, universe):
            return False
    return True


def same_operation(f: Operation, g: Operation, universe: Universe) -> bool:
    """Extensional equality over the active universe."""
    return f.arity == g.arity and tabulate(f, universe).entries == tabulate(g, universe).entries


def projection_table(universe: Universe, arity: int, index: int) -> Table:
    return tabulate(Projection(arity, index), universe)


__all__ = [
    "Args",
    "Universe",
    "index_of",
    "Operation",
    "Table",
    "Projection",
    "Translation",
    "Indicator",
    "Constant",
    "Patch",
    "Composed",
    "Relation",
    "evaluate",
    "tabulate",
    "compose",
    "preserves",
    "agree_on",
    "same_operation",
    "projection_table",
]
