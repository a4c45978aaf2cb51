"""Pol-Inv connection, clone fragments and local membership by interpolation."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from algebra.core import Args, Operation, Relation, Table, Universe, evaluate, index_of, preserves
from algebra.errors import ArityMismatch, BudgetExceeded, UniverseMismatch, ValueEscapesWindow
from algebra.fixpoint import close_vectors, operation_array
from utils.run_monitor import default_monitor

log = logging.getLogger(__name__)

DEFAULT_FRAGMENT_BUDGET = 1_000_000
DEFAULT_RELATION_BUDGET = 1_000_000
# invariant_under: image batches per numpy step, and key spaces kept as a bitmap
_MEMBER_CHUNK = 1 << 22
_MEMBER_BITMAP_LIMIT = 1 << 27

Domain = Tuple[Args, ...]


@dataclass(frozen=True)
class FragmentSet:
    """The n-ary part of a clone over a finite universe, as row-major tables."""

    arity: int
    universe: Universe
    ops: FrozenSet[Tuple[int, ...]]
    complete: bool = True

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Table):
            return item.universe == self.universe and item.arity == self.arity and item.entries in self.ops
        return item in self.ops

    def __len__(self) -> int:
        return len(self.ops)

    def entries(self) -> List[Tuple[int, ...]]:
        return sorted(self.ops)

    def tables(self) -> List[Table]:
        return [Table(self.universe, self.arity, entries) for entries in self.entries()]

    def intersection(self, other: "FragmentSet") -> "FragmentSet":
        if other.universe != self.universe or other.arity != self.arity:
            raise UniverseMismatch("fragments of different universes or arities cannot be intersected")
        return FragmentSet(self.arity, self.universe, self.ops & other.ops, self.complete and other.complete)

    def restrictions(self, domain: Sequence[Args]) -> FrozenSet[Tuple[int, ...]]:
        dom = canonical_domain(domain)
        positions = [index_of(args, self.universe.size) for args in dom]
        return frozenset(tuple(entries[p] for p in positions) for entries in self.ops)


@dataclass(frozen=True)
class RestrictionSet:
    """Restrictions to a finite domain of the n-ary members of a generated clone."""

    universe: Universe
    domain: Domain
    values: FrozenSet[Tuple[int, ...]]
    truncated: bool = False

    def __contains__(self, item: object) -> bool:
        return item in self.values

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class No:
    """Certified non-membership: no member of the clone interpolates on ``domain``."""

    domain: Domain
    restriction: Tuple[int, ...]
    exact: bool = True

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class YesUpTo:
    """Interpolation succeeded on every tested domain; nothing is claimed beyond them."""

    domains: Tuple[Domain, ...]

    def __bool__(self) -> bool:
        return True


Verdict = Union[No, YesUpTo]


def canonical_domain(domain: Iterable[Sequence[int]]) -> Domain:
    dom = tuple(sorted({tuple(args) for args in domain}))
    if not dom:
        raise ValueError("domain must not be empty")
    if len({len(args) for args in dom}) != 1:
        raise ArityMismatch("domain tuples must share one arity")
    return dom


def projection_vectors(universe: Universe, arity: int) -> List[Tuple[int, ...]]:
    """The n coordinate tuples of u^n in row-major order, i.e. the projection tables."""
    points = list(universe.tuples(arity))
    return [tuple(point[i] for point in points) for i in range(arity)]


# ----------------------------------------------------------------------
# Fragments
# ----------------------------------------------------------------------
def clone_fragment(
    generators: Sequence[Operation],
    arity: int,
    universe: Universe,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    target: Optional[int] = None,
) -> FragmentSet:
    """Fragment by fixpoint from the projections.

    ``target`` is an upper bound on the fragment size known to the caller
    (for instance the size of a polymorphism fragment containing it).
    """
    if arity < 1:
        raise ArityMismatch("fragments have arity at least 1")
    result = close_vectors(
        universe,
        projection_vectors(universe, arity),
        generators,
        width=universe.count(arity),
        budget=budget,
        strict=True,
        what="fragment",
        target=target,
    )
    return FragmentSet(arity, universe, frozenset(result.as_tuples()), True)


def restriction_fragment(
    generators: Sequence[Operation],
    domain: Iterable[Sequence[int]],
    universe: Universe,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    strict: bool = False,
) -> RestrictionSet:
    dom = canonical_domain(domain)
    for args in dom:
        for value in args:
            if not universe.contains(value):
                raise ValueEscapesWindow(args, value, f"domain tuple {args!r} leaves {universe}")
    arity = len(dom[0])
    seeds = [tuple(args[i] for args in dom) for i in range(arity)]
    result = close_vectors(
        universe,
        seeds,
        generators,
        width=len(dom),
        budget=budget,
        strict=strict,
        what="restriction",
    )
    if result.truncated:
        log.debug("Restriktionen auf %s am Fensterrand abgeschnitten", dom)
    return RestrictionSet(universe, dom, frozenset(result.as_tuples()), result.truncated)


def local_member(
    g: Operation,
    generators: Sequence[Operation],
    domains: Iterable[Iterable[Sequence[int]]],
    universe: Universe,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> Verdict:
    tested: List[Domain] = []
    for domain in domains:
        dom = canonical_domain(domain)
        if len(dom[0]) != g.arity:
            raise ArityMismatch(f"domain of arity {len(dom[0])} does not fit an operation of arity {g.arity}")
        restriction = tuple(evaluate(g, args, universe) for args in dom)
        fragment = restriction_fragment(generators, dom, universe, budget)
        if restriction not in fragment:
            return No(dom, restriction, exact=not fragment.truncated)
        tested.append(dom)
    return YesUpTo(tuple(tested))


# ----------------------------------------------------------------------
# Pol and Inv
# ----------------------------------------------------------------------
def _constraints(relations: Sequence[Relation], arity: int, universe: Universe) -> List[List[Tuple[Tuple[int, ...], FrozenSet[Args]]]]:
    buckets: List[List[Tuple[Tuple[int, ...], FrozenSet[Args]]]] = [[] for _ in range(universe.count(arity))]
    for relation in relations:
        if relation.universe != universe:
            raise UniverseMismatch(f"relation over {relation.universe} used over {universe}")
        if len(relation) == universe.size ** relation.arity:
            # the full relation constrains nothing
            continue
        seen = set()
        for combo in itertools.product(relation.rows(), repeat=arity):
            positions = tuple(
                index_of(tuple(row[j] for row in combo), universe.size) for j in range(relation.arity)
            )
            if positions in seen:
                continue
            seen.add(positions)
            buckets[max(positions)].append((positions, relation.tuples))
    return buckets


def pol(
    relations: Sequence[Relation],
    arity: int,
    universe: Universe,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> FragmentSet:
    """All n-ary tables preserving every relation, by backtracking over entries.

    A partial table is abandoned as soon as a row-tuple whose image is fully
    determined lands outside its relation.
    """
    if arity < 1:
        raise ArityMismatch("fragments have arity at least 1")
    buckets = _constraints(relations, arity, universe)
    width = len(buckets)
    table = [0] * width
    found: List[Tuple[int, ...]] = []

    def search(position: int) -> None:
        if position == width:
            found.append(tuple(table))
            if len(found) > budget:
                raise BudgetExceeded(budget, len(found), "polymorphisms", partial=frozenset(found))
            return
        for value in universe.elements:
            table[position] = value
            if all(tuple(table[p] for p in positions) in allowed for positions, allowed in buckets[position]):
                search(position + 1)

    with default_monitor.track("galois.pol", arity=arity, size=universe.size, relations=len(relations)):
        search(0)
    return FragmentSet(arity, universe, frozenset(found), True)


def inv_generate(
    generators: Sequence[Operation],
    seed: Iterable[Sequence[int]],
    universe: Universe,
    budget: int = DEFAULT_RELATION_BUDGET,
    target: Optional[int] = None,
) -> Relation:
    """Least relation containing ``seed`` and closed under the generators.

    ``target`` is a known upper bound on its size; the closure stops there.
    """
    rows = sorted({tuple(row) for row in seed})
    if not rows:
        raise ValueError("seed must not be empty")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ArityMismatch("seed tuples must share one length")
    result = close_vectors(
        universe, rows, generators, width=width, budget=budget, strict=True, what="relation", target=target
    )
    return Relation.of(universe, result.as_tuples(), width)


def invariant_under(rows: Iterable[Sequence[int]], g: Operation, universe: Universe) -> bool:
    """Whether ``g`` applied componentwise to rows of a relation always yields a row.

    Reads the operation table directly, independent of the fixpoint that
    produced the rows.
    """
    data = np.asarray(sorted({tuple(row) for row in rows}), dtype=np.int64)
    if data.size == 0:
        return True
    count, width = data.shape
    size = universe.size
    table = operation_array(g, universe)
    powers = np.asarray([size ** (width - 1 - j) for j in range(width)], dtype=np.int64)
    known = data @ powers
    seen: Optional[np.ndarray] = None
    if size ** width <= _MEMBER_BITMAP_LIMIT:
        seen = np.zeros(size ** width, dtype=bool)
        seen[known] = True

    def inside(images: np.ndarray) -> bool:
        keys = images.reshape(-1, width) @ powers
        return bool(seen[keys].all()) if seen is not None else bool(np.isin(keys, known).all())

    if g.arity == 1:
        return inside(table[data])
    batch = max(1, _MEMBER_CHUNK // (count * width))
    leading = itertools.product(range(count), repeat=g.arity - 1)
    while True:
        chunk = list(itertools.islice(leading, batch))
        if not chunk:
            return True
        base = np.zeros((len(chunk), width), dtype=np.int64)
        for q in range(g.arity - 1):
            base = base + data[[combo[q] for combo in chunk]] * size ** (g.arity - 1 - q)
        if not inside(table[base[:, None, :] + data[None, :, :]]):
            return False


def free_fragment_check(
    generators: Sequence[Operation],
    arity: int,
    universe: Universe,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> bool:
    """Finite shadow of cll(F) = Pol Inv(F).

    Γ_n, the invariant relation generated by the n coordinate tuples of u^n,
    is read as a set of n-ary tables. It is compared with polymorphisms found
    by backtracking: every generator preserves Γ_1 (checked pointwise), Γ_1
    equals Pol(Γ_1) at arity 1, and for n > 1 Γ_n contains the projections,
    lies inside Pol(Γ_1) and is preserved by every generator.
    """
    width = universe.count(arity)
    if width > budget:
        raise BudgetExceeded(budget, width, "free generator width")
    unary = inv_generate(generators, projection_vectors(universe, 1), universe, budget)
    broken = [g.describe() for g in generators if not preserves(g, unary)]
    if broken:
        log.debug("Gamma_1 wird von %s nicht erhalten", ", ".join(broken))
        return False
    bound = pol([unary], arity, universe, budget)
    if arity == 1:
        return frozenset(unary.tuples) == bound.ops
    projections = projection_vectors(universe, arity)
    gamma = inv_generate(generators, projections, universe, budget, target=len(bound))
    rows = frozenset(gamma.tuples)
    log.debug("Gamma_%d: %d Zeilen, Pol(Gamma_1): %d Tabellen", arity, len(rows), len(bound))
    if not rows <= bound.ops or not all(p in rows for p in projections):
        return False
    if rows == bound.ops:
        # Pol(Γ_1) is a clone holding every generator, so its fragment is closed under them
        return True
    return all(invariant_under(rows, g, universe) for g in generators)


def all_tables(universe: Universe, arity: int, budget: int = DEFAULT_FRAGMENT_BUDGET) -> FragmentSet:
    return pol([], arity, universe, budget)


__all__ = [
    "DEFAULT_FRAGMENT_BUDGET",
    "DEFAULT_RELATION_BUDGET",
    "Domain",
    "FragmentSet",
    "RestrictionSet",
    "No",
    "YesUpTo",
    "Verdict",
    "canonical_domain",
    "projection_vectors",
    "clone_fragment",
    "restriction_fragment",
    "local_member",
    "pol",
    "inv_generate",
    "invariant_under",
    "free_fragment_check",
    "all_tables",
]
