"""Witness families and embeddings between clone lattices.

* ``C_a``: operations bounded by ``a``; ``D_a``: operations with f(x) >= max(x)
  whenever max(x) >= a. Both are read over a finite window of the naturals
  with the natural order.
* Clones on a subset A of the universe are embedded by sending a clone C on A
  to all operations whose restriction to A^n lies in C.
* Translation clones over finitely generated abelian groups.
"""

from __future__ import annotations

import itertools
import logging
from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from algebra.core import (
    Args,
    Constant,
    Indicator,
    Operation,
    Patch,
    Relation,
    Table,
    Universe,
    evaluate,
    index_of,
    preserves,
    tabulate,
)
from algebra.errors import ArityMismatch, WindowTooSmall
from algebra.galois import DEFAULT_FRAGMENT_BUDGET, FragmentSet, canonical_domain, clone_fragment
from algebra.groups import DEFAULT_SEMIGROUP_BUDGET, GroupWindow, SubgroupHandle, subsemigroup, translation_op
from algebra.lattice import CloneHandle
from algebra.partial import PartialOperation

log = logging.getLogger(__name__)

KINDS = ("C", "D")

MembershipOracle = Union[CloneHandle, Callable[[Table], bool]]


def _check_kind(kind: str) -> str:
    kind = kind.upper()
    if kind not in KINDS:
        raise ValueError(f"kind must be C or D, got {kind!r}")
    return kind


# ----------------------------------------------------------------------
# Bounded and growth families
# ----------------------------------------------------------------------
def bounded_or_growth_member(f: Operation, a: int, kind: str, universe: Universe) -> bool:
    kind = _check_kind(kind)
    for args in universe.tuples(f.arity):
        value = evaluate(f, args, universe)
        if kind == "C":
            if value > a:
                return False
        elif max(args) >= a and value < max(args):
            return False
    return True


def interpolant(
    g: Operation,
    domain: Iterable[Sequence[int]],
    kind: str,
    universe: Universe,
) -> Tuple[int, Table]:
    """A member of C_a or D_a agreeing with ``g`` on the finite domain, with its ``a``.

    Kind C fills with 0 and takes ``a`` as the largest value of g on the
    domain; kind D fills with max(x) and takes ``a`` one above the largest
    coordinate, so no domain tuple reaches the growth region.
    """
    kind = _check_kind(kind)
    dom = canonical_domain(domain)
    arity = len(dom[0])
    if arity != g.arity:
        raise ArityMismatch(f"domain of arity {arity} does not fit an operation of arity {g.arity}")
    on_domain = {args: evaluate(g, args, universe) for args in dom}
    if kind == "C":
        a = max(on_domain.values())
        fill: Callable[[Args], int] = lambda args: 0
    else:
        a = 1 + max(max(args) for args in dom)
        if a > universe.maximum:
            raise WindowTooSmall(a + 1, universe.size)
        fill = max
    entries = tuple(on_domain[args] if args in on_domain else fill(args) for args in universe.tuples(arity))
    return a, Table(universe, arity, entries)


def random_family_member(kind: str, a: int, arity: int, universe: Universe, rng: np.random.Generator) -> Table:
    kind = _check_kind(kind)
    entries: List[int] = []
    for args in universe.tuples(arity):
        if kind == "C":
            entries.append(int(rng.integers(0, min(a, universe.maximum) + 1)))
        elif max(args) >= a:
            entries.append(int(rng.integers(max(args), universe.size)))
        else:
            entries.append(int(rng.integers(0, universe.size)))
    return Table(universe, arity, tuple(entries))


def family_inclusion(
    a: int,
    a_prime: int,
    kind: str,
    universe: Universe,
    arity: int = 1,
    samples: Optional[int] = None,
    seed: int = 0,
) -> Optional[Table]:
    """Counterexample to X_a being contained in X_a', or None.

    Without ``samples`` every table of the arity is scanned; otherwise
    ``samples`` random members of X_a are drawn.
    """
    if samples is None:
        candidates: Iterable[Table] = (
            Table(universe, arity, entries)
            for entries in itertools.product(universe.elements, repeat=universe.count(arity))
        )
        members = (f for f in candidates if bounded_or_growth_member(f, a, kind, universe))
    else:
        rng = np.random.default_rng(seed)
        members = (random_family_member(kind, a, arity, universe, rng) for _ in range(samples))
    for f in members:
        if not bounded_or_growth_member(f, a_prime, kind, universe):
            return f
    return None


# ----------------------------------------------------------------------
# Essential coordinates
# ----------------------------------------------------------------------
def depends_on(f: Operation, index: int, universe: Universe) -> Optional[Tuple[Args, Args]]:
    """Two argument tuples differing only at coordinate ``index`` (1-based) with different values."""
    if not 1 <= index <= f.arity:
        raise ArityMismatch(f"coordinate {index} does not exist for arity {f.arity}")
    table = tabulate(f, universe)
    position = index - 1
    for args in universe.tuples(f.arity):
        if args[position] != 0:
            continue
        base = table.entries[index_of(args, universe.size)]
        for value in range(1, universe.size):
            other = args[:position] + (value,) + args[position + 1 :]
            if table.entries[index_of(other, universe.size)] != base:
                return args, other
    return None


def essential_coordinates(f: Operation, universe: Universe) -> Tuple[int, ...]:
    return tuple(i for i in range(1, f.arity + 1) if depends_on(f, i, universe) is not None)


def essential_core(f: Operation, universe: Universe) -> Table:
    """The table with every fictitious coordinate deleted.

    With no essential coordinate at all the core is the unary constant.
    """
    table = tabulate(f, universe)
    keep = essential_coordinates(table, universe)
    if not keep:
        return tabulate(Constant(table.entries[0], 1), universe)
    entries = []
    for reduced in universe.tuples(len(keep)):
        full = [0] * f.arity
        for coordinate, value in zip(keep, reduced):
            full[coordinate - 1] = value
        entries.append(table.entries[index_of(full, universe.size)])
    return Table(universe, len(keep), tuple(entries))


# ----------------------------------------------------------------------
# Clones on a subset
# ----------------------------------------------------------------------
def _subset(subset: Iterable[int], universe: Universe) -> Tuple[int, ...]:
    members = tuple(sorted(set(subset)))
    if not members or not all(universe.contains(a) for a in members):
        raise ValueError(f"{members!r} is not a nonempty subset of {universe}")
    return members


def restrict_to_subset(g: Operation, subset: Iterable[int], universe: Universe) -> Optional[Table]:
    """g on A^n read as an operation on A (relabelled to 0..|A|-1), None when g leaves A."""
    members = _subset(subset, universe)
    label = {a: i for i, a in enumerate(members)}
    entries: List[int] = []
    for args in itertools.product(members, repeat=g.arity):
        value = evaluate(g, args, universe)
        if value not in label:
            return None
        entries.append(label[value])
    return Table(Universe(len(members)), g.arity, tuple(entries))


def extend_from_subset(c: Table, subset: Iterable[int], universe: Universe) -> Table:
    """An operation on the universe agreeing with ``c`` on A^n and projecting to x_1 elsewhere."""
    members = _subset(subset, universe)
    if c.universe.size != len(members):
        raise ArityMismatch(f"table over {c.universe} does not live on a {len(members)}-element subset")
    label = {a: i for i, a in enumerate(members)}
    entries = []
    for args in universe.tuples(c.arity):
        if all(value in label for value in args):
            entries.append(members[c.entries[index_of([label[v] for v in args], len(members))]])
        else:
            entries.append(args[0])
    return Table(universe, c.arity, tuple(entries))


def _oracle(oracle: MembershipOracle) -> Callable[[Table], bool]:
    if isinstance(oracle, CloneHandle):
        return oracle.contains
    return oracle


def finite_embed_member(g: Operation, subset: Iterable[int], oracle: MembershipOracle, universe: Universe) -> bool:
    restricted = restrict_to_subset(g, subset, universe)
    return restricted is not None and _oracle(oracle)(restricted)


def patch_op(f: Operation, subset: Iterable[int]) -> Patch:
    return Patch(f, frozenset(subset))


def unary_pol_member(f: Operation, subset: Iterable[int], universe: Universe) -> bool:
    return preserves(f, Relation.unary(universe, subset))


def restriction_clone(clone: CloneHandle, subset: Iterable[int], arity: int) -> FragmentSet:
    """n-ary fragment of the clone on A made of restrictions of members preserving A."""
    universe = clone.universe
    members = _subset(subset, universe)
    tables = set()
    for entries in clone.fragment(arity).ops:
        restricted = restrict_to_subset(Table(universe, arity, entries), members, universe)
        if restricted is not None:
            tables.add(restricted.entries)
    return FragmentSet(arity, Universe(len(members)), frozenset(tables), True)


def embedded_clone(
    clone_on_subset: CloneHandle,
    subset: Iterable[int],
    universe: Universe,
    arity: int,
    **kwargs,
) -> CloneHandle:
    """Relational handle whose ``arity`` fragment is the image of a clone on A.

    Uses Pol({A}, G) where the rows of G are the ``arity``-ary tables of the
    clone on A written in the universe's elements; exact at that arity only.
    """
    members = _subset(subset, universe)
    rows = [tuple(members[v] for v in entries) for entries in clone_on_subset.fragment(arity).ops]
    relations = [Relation.unary(universe, members), Relation.of(universe, rows, len(members) ** arity)]
    label = f"sigma({clone_on_subset.label})"
    return CloneHandle.relational(relations, universe, label=label, **kwargs)


# ----------------------------------------------------------------------
# Indicator and translation clones
# ----------------------------------------------------------------------
def indicator_clone_fragments(
    subset: Iterable[int],
    a: int,
    b: int,
    universe: Universe,
    arity: int,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> FragmentSet:
    members = frozenset(subset)
    if a == b:
        raise ValueError("the indicator needs two different values")
    if not members or a in members or b in members or not all(universe.contains(v) for v in members):
        raise ValueError("the indicator set must be nonempty and avoid both values")
    return clone_fragment([Indicator(members, a, b)], arity, universe, budget)


def translation_clone_member(
    p: PartialOperation,
    subgroup: SubgroupHandle,
    window: Optional[GroupWindow] = None,
) -> bool:
    """Does ``p`` agree with a translation x -> a + x for some a in the subgroup?"""
    if p.arity != 1:
        raise ArityMismatch("translation clones are tested on unary partial operations")
    if p.is_empty():
        raise ValueError("the partial operation needs a nonempty domain")
    group = subgroup.group
    differences = set()
    for (x,), y in p.graph:
        if window is not None:
            x_elem, y_elem = window.decode(x), window.decode(y)
        else:
            x_elem, y_elem = group.element(x), group.element(y)
        differences.add(group.sub(y_elem, x_elem))
        if len(differences) > 1:
            return False
    return subgroup.contains(differences.pop())


def translation_unary_tables(elements: Iterable[object], window: GroupWindow) -> FrozenSet[Tuple[int, ...]]:
    universe = window.universe
    return frozenset(tabulate(translation_op(a, window), universe).entries for a in elements)  # type: ignore[arg-type]


def translation_clone(subgroup: SubgroupHandle, window: GroupWindow, **kwargs) -> CloneHandle:
    ops = [translation_op(g, window) for g in subgroup.generators]
    return CloneHandle.generated(ops, window.universe, label=subgroup.name, **kwargs)


def translation_semigroup_check(
    generators: Sequence[object],
    window: GroupWindow,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    semigroup_budget: int = DEFAULT_SEMIGROUP_BUDGET,
) -> bool:
    """Unary fragment of the clone of translations by S equals {id} plus translations by <S>_+."""
    group = window.group
    ops = [translation_op(s, window) for s in generators]  # type: ignore[arg-type]
    fragment = clone_fragment(ops, 1, window.universe, budget)
    reachable = subsemigroup(group, generators, semigroup_budget)  # type: ignore[arg-type]
    expected = translation_unary_tables(reachable, window) | translation_unary_tables([group.zero], window)
    return fragment.ops == expected


__all__ = [
    "KINDS",
    "bounded_or_growth_member",
    "interpolant",
    "random_family_member",
    "family_inclusion",
    "depends_on",
    "essential_coordinates",
    "essential_core",
    "restrict_to_subset",
    "extend_from_subset",
    "finite_embed_member",
    "patch_op",
    "unary_pol_member",
    "restriction_clone",
    "embedded_clone",
    "indicator_clone_fragments",
    "translation_clone_member",
    "translation_unary_tables",
    "translation_clone",
    "translation_semigroup_check",
]
