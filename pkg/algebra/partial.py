"""Partial operations with finite domains and partial clones generated by them.

Partial clones here only ever hold finitely many members: projection
restrictions are adjoined on the domains that actually occur among the
generators and their compositions, so every comparison is relative to the
domains that were tested.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from algebra.core import Args, Operation, Universe, evaluate
from algebra.errors import ArityMismatch, BudgetExceeded
from algebra.galois import Domain, canonical_domain
from algebra.report import CheckReport
from utils.run_monitor import default_monitor

if TYPE_CHECKING:
    from algebra.lattice import CloneHandle

log = logging.getLogger(__name__)

DEFAULT_PARTIAL_BUDGET = 100_000


@dataclass(frozen=True)
class PartialOperation:
    """Graph of an n-ary partial operation, sorted by argument tuple."""

    arity: int
    graph: Tuple[Tuple[Args, int], ...]

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ArityMismatch("partial operations have arity at least 1")
        canonical = tuple(sorted((tuple(args), int(value)) for args, value in self.graph))
        for args, _ in canonical:
            if len(args) != self.arity:
                raise ArityMismatch(f"domain tuple {args!r} does not have length {self.arity}")
        if len({args for args, _ in canonical}) != len(canonical):
            raise ValueError("a partial operation takes one value per domain tuple")
        object.__setattr__(self, "graph", canonical)

    @classmethod
    def from_mapping(cls, arity: int, mapping: Mapping[Sequence[int], int]) -> "PartialOperation":
        return cls(arity, tuple((tuple(args), value) for args, value in mapping.items()))

    @classmethod
    def from_values(cls, domain: Domain, values: Sequence[int]) -> "PartialOperation":
        if len(domain) != len(values):
            raise ValueError("domain and values differ in length")
        arity = len(domain[0]) if domain else 1
        return cls(arity, tuple(zip(domain, values)))

    @property
    def domain(self) -> Domain:
        return tuple(args for args, _ in self.graph)

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(value for _, value in self.graph)

    @cached_property
    def _table(self) -> Dict[Args, int]:
        return dict(self.graph)

    def as_dict(self) -> Dict[Args, int]:
        return self._table

    def is_empty(self) -> bool:
        return not self.graph

    def __call__(self, *args: int) -> int:
        if tuple(args) not in self._table:
            raise KeyError(f"{tuple(args)!r} is outside the domain")
        return self._table[tuple(args)]

    def describe(self) -> str:
        if not self.graph:
            return f"leer/{self.arity}"
        return "{" + ", ".join(f"{_fmt(args)}->{value}" for args, value in self.graph) + "}"

    def to_json(self) -> List[List[object]]:
        return [[list(args), value] for args, value in self.graph]


def _fmt(args: Args) -> str:
    return str(args[0]) if len(args) == 1 else "(" + ",".join(str(v) for v in args) + ")"


def restrict(f: Operation, domain: Iterable[Sequence[int]], universe: Optional[Universe] = None) -> PartialOperation:
    dom = canonical_domain(domain)
    if len(dom[0]) != f.arity:
        raise ArityMismatch(f"domain of arity {len(dom[0])} does not fit an operation of arity {f.arity}")
    return PartialOperation(f.arity, tuple((args, evaluate(f, args, universe)) for args in dom))


def projection_restriction(arity: int, index: int, domain: Domain) -> PartialOperation:
    if not 1 <= index <= arity:
        raise ArityMismatch(f"projection needs 1 <= k <= n, got n={arity}, k={index}")
    return PartialOperation(arity, tuple((args, args[index - 1]) for args in domain))


def partial_compose(f: PartialOperation, gs: Sequence[PartialOperation]) -> PartialOperation:
    """f(g_1, ..., g_k) on the tuples where every g_i is defined and f accepts the image."""
    gs = tuple(gs)
    if len(gs) != f.arity:
        raise ArityMismatch(f"outer arity {f.arity} needs as many inner operations, got {len(gs)}")
    if len({g.arity for g in gs}) != 1:
        raise ArityMismatch("inner operations must share one arity")
    outer = f.as_dict()
    inner = [g.as_dict() for g in gs]
    common = set(inner[0])
    for table in inner[1:]:
        common &= set(table)
    graph: List[Tuple[Args, int]] = []
    for args in sorted(common):
        image = tuple(table[args] for table in inner)
        if image in outer:
            graph.append((args, outer[image]))
    return PartialOperation(gs[0].arity, tuple(graph))


# ----------------------------------------------------------------------
# Partial clones
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class PartialCloneHandle:
    generators: Tuple[PartialOperation, ...]
    members: Tuple[PartialOperation, ...]
    closed: bool = True

    def __contains__(self, item: object) -> bool:
        return item in self._member_set

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def _member_set(self) -> FrozenSet[PartialOperation]:
        return frozenset(self.members)

    def on_domain(self, domain: Iterable[Sequence[int]]) -> FrozenSet[PartialOperation]:
        dom = canonical_domain(domain)
        return frozenset(p for p in self.members if p.domain == dom)


class _PartialClosure:
    """FIFO worklist closure; a popped member combines only with earlier ones."""

    def __init__(self, budget: int) -> None:
        self.budget = budget
        self.members: List[PartialOperation] = []
        self._index: Dict[PartialOperation, int] = {}
        self._by_arity: Dict[int, List[int]] = {}
        self._domains: set = set()

    def add(self, p: PartialOperation) -> None:
        if p in self._index:
            return
        self._index[p] = len(self.members)
        self.members.append(p)
        self._by_arity.setdefault(p.arity, []).append(self._index[p])
        if len(self.members) > self.budget:
            raise BudgetExceeded(self.budget, len(self.members), "partial clone", partial=tuple(self.members))
        key = (p.arity, p.domain)
        if p.graph and key not in self._domains:
            self._domains.add(key)
            for k in range(1, p.arity + 1):
                self.add(projection_restriction(p.arity, k, p.domain))

    def run(self) -> None:
        cursor = 0
        while cursor < len(self.members):
            self._combine(cursor)
            cursor += 1

    def _combine(self, current: int) -> None:
        newest = self.members[current]
        for arity, indices in sorted(self._by_arity.items()):
            pool = [i for i in indices if i <= current]
            for choice in itertools.product(pool, repeat=newest.arity):
                self._compose(newest, choice)
        pool = [i for i in self._by_arity[newest.arity] if i <= current]
        older = [i for i in pool if i < current]
        for outer_index in range(current):
            outer = self.members[outer_index]
            for slot in range(outer.arity):
                slots = [older] * slot + [[current]] + [pool] * (outer.arity - slot - 1)
                for choice in itertools.product(*slots):
                    self._compose(outer, choice)

    def _compose(self, outer: PartialOperation, choice: Sequence[int]) -> None:
        self.add(partial_compose(outer, [self.members[i] for i in choice]))


def partial_closure(
    generators: Iterable[PartialOperation],
    budget: int = DEFAULT_PARTIAL_BUDGET,
) -> PartialCloneHandle:
    gens = tuple(generators)
    closure = _PartialClosure(budget)
    with default_monitor.track("partial.closure", generators=len(gens)):
        for g in gens:
            closure.add(g)
        closure.run()
    log.debug("Partieller Klon: %d Elemente aus %d Erzeugern", len(closure.members), len(gens))
    return PartialCloneHandle(gens, tuple(closure.members), True)


def restrict_clone(clone: "CloneHandle", domains: Iterable[Iterable[Sequence[int]]]) -> PartialCloneHandle:
    """Restrictions of the clone's members to each listed domain."""
    members: List[PartialOperation] = []
    for domain in domains:
        dom = canonical_domain(domain)
        for values in sorted(clone.restrictions(dom)):
            members.append(PartialOperation.from_values(dom, values))
    return PartialCloneHandle(tuple(members), tuple(members), False)


# ----------------------------------------------------------------------
# Separation and joins
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Separation:
    """``witness`` is a restriction of a member of one side matching nothing on the other."""

    witness: PartialOperation
    side: str

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotSeparated:
    domains: Tuple[Domain, ...]

    def __bool__(self) -> bool:
        return False


def separate(
    left: "CloneHandle",
    right: "CloneHandle",
    domains: Iterable[Iterable[Sequence[int]]],
) -> Union[Separation, NotSeparated]:
    tested: List[Domain] = []
    for domain in domains:
        dom = canonical_domain(domain)
        mine, theirs = left.restrictions(dom), right.restrictions(dom)
        only_left = sorted(mine - theirs)
        if only_left:
            return Separation(PartialOperation.from_values(dom, only_left[0]), "left")
        only_right = sorted(theirs - mine)
        if only_right:
            return Separation(PartialOperation.from_values(dom, only_right[0]), "right")
        tested.append(dom)
    return NotSeparated(tuple(tested))


def sigma_join_check(
    left: "CloneHandle",
    right: "CloneHandle",
    domains: Iterable[Iterable[Sequence[int]]],
    budget: int = DEFAULT_PARTIAL_BUDGET,
) -> CheckReport:
    """The partial clone generated by both restriction sets against the restrictions of the join."""
    from algebra.lattice import join

    doms = [canonical_domain(domain) for domain in domains]
    with default_monitor.track("check.sigma_join", domains=len(doms)):
        pieces = restrict_clone(left, doms).members + restrict_clone(right, doms).members
        generated = partial_closure(pieces, budget)
        joined = join(left, right)
        mismatches: List[Dict[str, object]] = []
        for dom in doms:
            ours = {p.values for p in generated.on_domain(dom)}
            expected = set(joined.restrictions(dom))
            if ours != expected:
                extra = sorted(ours - expected)
                missing = sorted(expected - ours)
                mismatches.append(
                    {
                        "domain": [list(args) for args in dom],
                        "only_generated": [list(v) for v in extra],
                        "only_join": [list(v) for v in missing],
                    }
                )
    details = {
        "left": left.label,
        "right": right.label,
        "domains": len(doms),
        "partial_members": len(generated),
    }
    certificate = mismatches[0] if mismatches else None
    return CheckReport(
        "sigma-join",
        not mismatches,
        f"sigma({left.label}) v sigma({right.label}) = sigma(join) auf {len(doms) - len(mismatches)}/{len(doms)} Domänen",
        details,
        certificate,
        note="relative to tested domains",
    )


def extension_check(
    clone: "CloneHandle",
    domains: Iterable[Iterable[Sequence[int]]],
    budget: int = DEFAULT_PARTIAL_BUDGET,
) -> List[PartialOperation]:
    """Members of the generated partial clone without a total extension in ``clone``."""
    doms = [canonical_domain(domain) for domain in domains]
    generated = partial_closure(restrict_clone(clone, doms).members, budget)
    orphans: List[PartialOperation] = []
    for p in generated.members:
        if p.is_empty():
            continue
        if p.values not in clone.restrictions(p.domain):
            orphans.append(p)
    return orphans


__all__ = [
    "DEFAULT_PARTIAL_BUDGET",
    "PartialOperation",
    "restrict",
    "projection_restriction",
    "partial_compose",
    "PartialCloneHandle",
    "partial_closure",
    "restrict_clone",
    "Separation",
    "NotSeparated",
    "separate",
    "sigma_join_check",
    "extension_check",
]
