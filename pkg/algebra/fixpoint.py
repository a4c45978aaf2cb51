"""Worklist fixpoint over value vectors.

A vector is a row of elements of a finite universe. Closing a set of vectors
under componentwise application of operations is the common core of clone
fragments (vectors = tables indexed by argument tuples), invariant relations
(vectors = tuples) and restriction sets (vectors = values on a finite domain).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from algebra.core import Operation, Universe, evaluate
from algebra.errors import BudgetExceeded, ValueEscapesWindow
from utils.run_monitor import default_monitor

log = logging.getLogger(__name__)

ESCAPED = -1
# upper bound on elements materialised per numpy gather
_CHUNK_ELEMENTS = 1 << 22
_INT_CODE_LIMIT = 1 << 62
# key spaces up to this size are tracked in a boolean bitmap instead of a set
_BITMAP_LIMIT = 1 << 27


def operation_array(f: Operation, universe: Universe, strict: bool = True) -> np.ndarray:
    """Flat row-major table of ``f`` over ``universe``.

    With ``strict=False`` escaping values are stored as ``ESCAPED`` instead of
    raising, so callers can drop the affected candidates.
    """
    values: List[int] = []
    for args in universe.tuples(f.arity):
        try:
            values.append(evaluate(f, args, universe))
        except ValueEscapesWindow:
            if strict:
                raise
            values.append(ESCAPED)
    return np.asarray(values, dtype=np.int64)


@dataclass
class ClosureResult:
    rows: np.ndarray
    complete: bool
    truncated: bool

    def as_tuples(self) -> List[Tuple[int, ...]]:
        return [tuple(int(v) for v in row) for row in self.rows]


class VectorClosure:
    """Least fixpoint of seed vectors under componentwise generator application.

    Members are kept in discovery order (FIFO worklist). Every generator tuple
    is evaluated once: when member ``i`` is popped, only argument tuples whose
    largest member index is ``i`` are formed. The run stops early when every
    vector of the given width is present, or when ``target`` members exist.
    """

    def __init__(
        self,
        universe: Universe,
        width: int,
        generators: Sequence[Tuple[int, np.ndarray]],
        *,
        budget: int,
        what: str = "fragment",
        target: Optional[int] = None,
    ) -> None:
        self.universe = universe
        self.width = width
        self.budget = budget
        self.what = what
        self.full_size = universe.size ** width
        # a known upper bound on the closure lets the run stop once it is reached
        self.target = min(target, self.full_size) if target is not None else self.full_size
        stacks: Dict[int, List[np.ndarray]] = {}
        for arity, table in generators:
            stacks.setdefault(arity, []).append(np.asarray(table, dtype=np.int64))
        self._stacks: Dict[int, np.ndarray] = {arity: np.stack(tables) for arity, tables in sorted(stacks.items())}
        self._rows = np.zeros((16, width), dtype=np.int64)
        self._count = 0
        self._known: set = set()
        self.truncated = False
        if self.full_size < _INT_CODE_LIMIT:
            self._powers: Optional[np.ndarray] = np.asarray(
                [universe.size ** (width - 1 - j) for j in range(width)], dtype=np.int64
            )
        else:
            self._powers = None
        self._seen: Optional[np.ndarray] = None
        if self._powers is not None and self.full_size <= _BITMAP_LIMIT:
            self._seen = np.zeros(self.full_size, dtype=bool)

    # ------------------------------------------------------------------
    # Bookkeeping
    # ------------------------------------------------------------------
    def _keys(self, batch: np.ndarray) -> List[object]:
        if self._powers is not None:
            return (batch @ self._powers).tolist()
        return [row.tobytes() for row in np.ascontiguousarray(batch)]

    def _extend(self, block: np.ndarray) -> None:
        needed = self._count + len(block)
        if needed > len(self._rows):
            capacity = len(self._rows)
            while capacity < needed:
                capacity *= 2
            grown = np.zeros((capacity, self.width), dtype=np.int64)
            grown[: self._count] = self._rows[: self._count]
            self._rows = grown
        self._rows[self._count : needed] = block
        self._count = needed

    def _admit(self, batch: np.ndarray) -> None:
        if batch.size == 0:
            return
        batch = batch.reshape(-1, self.width)
        escaped = (batch < 0).any(axis=1)
        if escaped.any():
            self.truncated = True
            batch = batch[~escaped]
        if self._seen is not None:
            keys = batch @ self._powers
            unseen = ~self._seen[keys]
            if not unseen.any():
                return
            keys, batch = keys[unseen], batch[unseen]
            _, first = np.unique(keys, return_index=True)
            first.sort()
            self._seen[keys[first]] = True
            self._extend(batch[first])
        else:
            known = self._known
            fresh: List[int] = []
            for position, key in enumerate(self._keys(batch)):
                if key not in known:
                    known.add(key)
                    fresh.append(position)
            if not fresh:
                return
            self._extend(batch[fresh])
        if self._count > self.budget:
            raise BudgetExceeded(self.budget, self._count, self.what, partial=self.rows)

    @property
    def rows(self) -> np.ndarray:
        return self._rows[: self._count].copy()

    @property
    def saturated(self) -> bool:
        return self._count >= self.target

    # ------------------------------------------------------------------
    # Fixpoint
    # ------------------------------------------------------------------
    def run(self, seeds: Iterable[Sequence[int]]) -> ClosureResult:
        seed_rows = np.asarray([list(seed) for seed in seeds], dtype=np.int64).reshape(-1, self.width)
        with default_monitor.track(f"fixpoint.{self.what}", width=self.width, size=self.universe.size):
            self._admit(seed_rows)
            cursor = 0
            while cursor < self._count and not self.saturated:
                for arity, stack in self._stacks.items():
                    self._expand(cursor, arity, stack)
                    if self.saturated:
                        break
                cursor += 1
        default_monitor.set_gauge(f"fixpoint.{self.what}.size", self._count)
        log.debug("%s: %d Vektoren (Breite %d)", self.what, self._count, self.width)
        return ClosureResult(self.rows, True, self.truncated)

    def _expand(self, current: int, arity: int, stack: np.ndarray) -> None:
        size = self.universe.size
        weights = [size ** (arity - 1 - q) for q in range(arity)]
        for first in range(arity):
            ranges: List[range] = []
            for q in range(arity):
                if q < first:
                    ranges.append(range(0, current))
                elif q == first:
                    ranges.append(range(current, current + 1))
                else:
                    ranges.append(range(0, current + 1))
            if any(len(r) == 0 for r in ranges):
                continue
            vector_positions = [q for q in range(arity) if q != first]
            vector = vector_positions[-1] if vector_positions else first
            fixed = [q for q in range(arity) if q != vector]
            for choice in itertools.product(*(ranges[q] for q in fixed)):
                base = np.zeros(self.width, dtype=np.int64)
                for q, member in zip(fixed, choice):
                    base = base + self._rows[member] * weights[q]
                span = ranges[vector]
                block = self._rows[span.start : span.stop]
                index = base[None, :] + block * weights[vector]
                self._gather(stack, index)
                if self.saturated:
                    return

    def _gather(self, stack: np.ndarray, index: np.ndarray) -> None:
        per_generator = index.size
        step = max(1, _CHUNK_ELEMENTS // max(1, per_generator))
        for start in range(0, len(stack), step):
            candidates = stack[start : start + step][:, index]
            self._admit(candidates)
            if self.saturated:
                return


def close_vectors(
    universe: Universe,
    seeds: Iterable[Sequence[int]],
    generators: Sequence[Operation],
    *,
    width: int,
    budget: int,
    strict: bool = True,
    what: str = "fragment",
    target: Optional[int] = None,
) -> ClosureResult:
    tables = [(g.arity, operation_array(g, universe, strict=strict)) for g in generators]
    return VectorClosure(universe, width, tables, budget=budget, what=what, target=target).run(seeds)


__all__ = ["ESCAPED", "operation_array", "ClosureResult", "VectorClosure", "close_vectors"]
