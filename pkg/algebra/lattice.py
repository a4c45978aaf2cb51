"""Clone handles: order, joins, fragment-valued meets and poset export."""

from __future__ import annotations

import itertools
import logging
import threading
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from algebra.core import Operation, Relation, Table, Universe, preserves, tabulate
from algebra.errors import UniverseMismatch
from algebra.fixpoint import close_vectors
from algebra.galois import (
    DEFAULT_FRAGMENT_BUDGET,
    Domain,
    FragmentSet,
    canonical_domain,
    clone_fragment,
    pol,
    projection_vectors,
    restriction_fragment,
)
from algebra.report import CheckReport
from utils.run_monitor import default_monitor

log = logging.getLogger(__name__)

DEFAULT_GENERATOR_CAP = 2
DEFAULT_GENERATOR_SEED = 0


class CloneHandle:
    """A clone over a finite universe, given by generators or as Pol of relations.

    Fragments and restriction sets are computed on first use and cached; the
    cache is filled under a lock so handles can be shared between threads.
    Relational handles expose a small generating set of their fragments up to
    ``generator_cap``; joins built from them are exact at those arities.
    """

    def __init__(
        self,
        universe: Universe,
        generators: Iterable[Operation] = (),
        relations: Optional[Iterable[Relation]] = None,
        *,
        label: str = "",
        budget: int = DEFAULT_FRAGMENT_BUDGET,
        generator_cap: int = DEFAULT_GENERATOR_CAP,
        generator_seed: int = DEFAULT_GENERATOR_SEED,
    ) -> None:
        self.universe = universe
        self._generators: Optional[Tuple[Operation, ...]] = tuple(generators)
        self.relations: Optional[Tuple[Relation, ...]] = None
        if relations is not None:
            self.relations = tuple(relations)
            self._generators = None
            for relation in self.relations:
                if relation.universe != universe:
                    raise UniverseMismatch(f"relation over {relation.universe} used for a clone over {universe}")
        self.label = label or self._default_label()
        self.budget = budget
        self.generator_cap = generator_cap
        self.generator_seed = generator_seed
        self._fragments: Dict[int, FragmentSet] = {}
        self._restrictions: Dict[Domain, FrozenSet[Tuple[int, ...]]] = {}
        self._lock = threading.RLock()

    @classmethod
    def generated(cls, generators: Iterable[Operation], universe: Universe, label: str = "", **kwargs) -> "CloneHandle":
        return cls(universe, generators, label=label, **kwargs)

    @classmethod
    def relational(cls, relations: Iterable[Relation], universe: Universe, label: str = "", **kwargs) -> "CloneHandle":
        return cls(universe, relations=relations, label=label, **kwargs)

    @classmethod
    def projections(cls, universe: Universe, **kwargs) -> "CloneHandle":
        return cls(universe, (), label="Proj", **kwargs)

    @classmethod
    def all_operations(cls, universe: Universe, **kwargs) -> "CloneHandle":
        return cls(universe, relations=(), label="O", **kwargs)

    def _default_label(self) -> str:
        if self.relations is not None:
            return "Pol(" + ",".join(f"rel{r.arity}[{len(r)}]" for r in self.relations) + ")"
        return "<" + ",".join(g.describe() for g in self._generators or ()) + ">"

    @property
    def is_relational(self) -> bool:
        return self.relations is not None

    def __repr__(self) -> str:
        return f"CloneHandle({self.label!r}, universe={self.universe})"

    # ------------------------------------------------------------------
    # Fragments and membership
    # ------------------------------------------------------------------
    def fragment(self, arity: int) -> FragmentSet:
        with self._lock:
            cached = self._fragments.get(arity)
            if cached is not None:
                return cached
            if self.relations is not None:
                fragment = pol(self.relations, arity, self.universe, self.budget)
            else:
                fragment = clone_fragment(self.generators, arity, self.universe, self.budget)
            self._fragments[arity] = fragment
            log.debug("%s: Fragment der Stelligkeit %d hat %d Elemente", self.label, arity, len(fragment))
            return fragment

    def contains(self, op: Operation) -> bool:
        if self.relations is not None:
            return all(preserves(op, relation) for relation in self.relations)
        return tabulate(op, self.universe).entries in self.fragment(op.arity)

    def restrictions(self, domain: Iterable[Sequence[int]]) -> FrozenSet[Tuple[int, ...]]:
        dom = canonical_domain(domain)
        with self._lock:
            cached = self._restrictions.get(dom)
            if cached is not None:
                return cached
            if self.relations is not None:
                values = self.fragment(len(dom[0])).restrictions(dom)
            else:
                values = restriction_fragment(self.generators, dom, self.universe, self.budget).values
            self._restrictions[dom] = values
            return values

    @property
    def generators(self) -> Tuple[Operation, ...]:
        with self._lock:
            if self._generators is None:
                self._generators = self._extract_generators()
            return self._generators

    def _extract_generators(self) -> Tuple[Operation, ...]:
        """Seeded random members, completed greedily until they generate the cap fragment.

        Each round that falls short adds twice as many missing members as the
        one before.
        """
        cap = self.generator_cap
        target = self.fragment(cap)
        members = target.entries()
        rng = np.random.default_rng(self.generator_seed)
        picks = sorted(int(i) for i in rng.choice(len(members), size=min(2, len(members)), replace=False))
        chosen = [members[i] for i in picks]
        batch = 1
        with default_monitor.track("lattice.generators", label=self.label, arity=cap):
            while True:
                tables = [Table(self.universe, cap, entries) for entries in chosen]
                reached = clone_fragment(tables, cap, self.universe, self.budget, target=len(target))
                if len(reached) >= len(target):
                    break
                missing = sorted(target.ops - reached.ops)
                extra = rng.choice(len(missing), size=min(batch, len(missing)), replace=False)
                chosen.extend(missing[int(i)] for i in sorted(extra))
                batch *= 2
        log.debug("%s: %d Erzeuger für Stelligkeit %d", self.label, len(chosen), cap)
        return tuple(Table(self.universe, cap, entries) for entries in chosen)


# ----------------------------------------------------------------------
# Order, join, meet
# ----------------------------------------------------------------------
def _same_universe(left: CloneHandle, right: CloneHandle) -> None:
    if left.universe != right.universe:
        raise UniverseMismatch(f"clones over {left.universe} and {right.universe} cannot be compared")


def leq(left: CloneHandle, right: CloneHandle, cap: int = DEFAULT_GENERATOR_CAP) -> bool:
    """Inclusion of ``left`` in ``right`` on every arity up to ``cap``.

    Generated clones whose generators all have arity at most ``cap`` are
    compared through their generators. Relational clones only carry
    generators of their generator cap, so they compare fragment by fragment.
    """
    _same_universe(left, right)
    if not left.is_relational and all(g.arity <= cap for g in left.generators):
        return all(right.contains(g) for g in left.generators)
    return all(left.fragment(n).ops <= right.fragment(n).ops for n in range(1, cap + 1))


def join(left: CloneHandle, right: CloneHandle) -> CloneHandle:
    _same_universe(left, right)
    return CloneHandle(
        left.universe,
        left.generators + right.generators,
        label=f"({left.label} ∨ {right.label})",
        budget=left.budget,
        generator_cap=left.generator_cap,
        generator_seed=left.generator_seed,
    )


def meet_fragments(left: CloneHandle, right: CloneHandle, cap: int = DEFAULT_GENERATOR_CAP) -> Dict[int, FragmentSet]:
    _same_universe(left, right)
    return {n: left.fragment(n).intersection(right.fragment(n)) for n in range(1, cap + 1)}


def fragments_equal(left: CloneHandle, right: CloneHandle, cap: int) -> Optional[int]:
    """First arity up to ``cap`` where the fragments differ, None when all agree."""
    for n in range(1, cap + 1):
        if left.fragment(n).ops != right.fragment(n).ops:
            return n
    return None


def antichain_check(
    handles: Sequence[CloneHandle],
    cap: int,
    mode: str,
    reference: CloneHandle,
) -> CheckReport:
    if len(handles) < 2:
        raise ValueError("an antichain check needs at least two clones")
    if mode not in ("join-top", "meet-bottom"):
        raise ValueError(f"unknown mode {mode!r}")
    failures: List[Dict[str, object]] = []
    pairs = list(itertools.combinations(range(len(handles)), 2))
    with default_monitor.track(f"check.antichain.{mode}", clones=len(handles), cap=cap):
        for i, j in pairs:
            left, right = handles[i], handles[j]
            for n in range(1, cap + 1):
                expected = reference.fragment(n)
                if mode == "join-top":
                    got = join(left, right).fragment(n)
                else:
                    got = left.fragment(n).intersection(right.fragment(n))
                if got.ops != expected.ops:
                    failures.append(
                        {"left": left.label, "right": right.label, "arity": n, "size": len(got), "expected": len(expected)}
                    )
                    break
    word = "Join" if mode == "join-top" else "Meet"
    return CheckReport(
        f"antichain-{mode.split('-')[0]}",
        not failures,
        f"{len(pairs) - len(failures)}/{len(pairs)} Paare mit {word} = {reference.label}",
        {"clones": [h.label for h in handles], "cap": cap, "reference": reference.label},
        failures[0] if failures else None,
    )


def covers_with(base: CloneHandle, extra: Operation, cap: int) -> bool:
    """True when adjoining ``extra`` to the base generators yields every operation of arity ``cap``.

    The base generators are cached on the handle; the closure stops as soon
    as every table of arity ``cap`` is reached.
    """
    universe = base.universe
    everything = universe.size ** universe.count(cap)
    result = close_vectors(
        universe,
        projection_vectors(universe, cap),
        base.generators + (extra,),
        width=universe.count(cap),
        budget=base.budget,
        what="covering",
        target=everything,
    )
    return len(result.rows) == everything


def covering_check(
    subset: Iterable[int],
    cap: int,
    universe: Universe,
    trials: int = 50,
    seed: int = 0,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    generator_seed: int = DEFAULT_GENERATOR_SEED,
) -> CheckReport:
    """Finite-universe analogue of Pol({A}) being covered by the clone of all operations."""
    members = frozenset(subset)
    if not members or len(members) >= universe.size or not all(universe.contains(a) for a in members):
        raise ValueError("the subset must be a nonempty proper subset of the universe")
    relation = Relation.unary(universe, members)
    base = CloneHandle.relational(
        [relation],
        universe,
        label=f"Pol({{{','.join(str(a) for a in sorted(members))}}})",
        budget=budget,
        generator_cap=cap,
        generator_seed=generator_seed,
    )
    rng = np.random.default_rng(seed)
    passed = skipped = 0
    certificate: Optional[Dict[str, object]] = None
    with default_monitor.track("check.covering", cap=cap, trials=trials):
        for _ in range(trials):
            arity = int(rng.integers(1, cap + 1))
            entries = tuple(int(v) for v in rng.integers(0, universe.size, universe.count(arity)))
            candidate = Table(universe, arity, entries)
            if preserves(candidate, relation):
                skipped += 1
                continue
            if covers_with(base, candidate, cap):
                passed += 1
            elif certificate is None:
                certificate = {"arity": arity, "table": list(entries)}
    return CheckReport(
        "covering",
        certificate is None,
        f"{base.label} ∨ <f> = O für {passed} Stichproben ({skipped} übersprungen)",
        {"universe": universe.size, "cap": cap, "trials": trials, "passed": passed, "skipped": skipped},
        certificate,
        note="finite-universe analogue",
    )


# ----------------------------------------------------------------------
# Poset export
# ----------------------------------------------------------------------
def leq_pairs(handles: Sequence[CloneHandle], cap: int = DEFAULT_GENERATOR_CAP) -> List[Tuple[int, int]]:
    return [
        (i, j)
        for i, j in itertools.permutations(range(len(handles)), 2)
        if leq(handles[i], handles[j], cap)
    ]


def hasse_edges(count: int, pairs: Iterable[Tuple[int, int]]) -> Tuple[List[List[int]], List[Tuple[int, int]]]:
    """Blocks of mutually comparable nodes and the covering edges between blocks."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(count))
    graph.add_edges_from(pairs)
    blocks = sorted((sorted(component) for component in nx.strongly_connected_components(graph)), key=lambda b: b[0])
    quotient = nx.quotient_graph(graph, [frozenset(block) for block in blocks], create_using=nx.DiGraph)
    quotient.remove_edges_from(list(nx.selfloop_edges(quotient)))
    position = {frozenset(block): index for index, block in enumerate(blocks)}
    reduced = nx.transitive_reduction(quotient)
    edges = sorted((position[frozenset(a)], position[frozenset(b)]) for a, b in reduced.edges)
    return blocks, edges


def export_dot(handles: Sequence[CloneHandle], pairs: Iterable[Tuple[int, int]], name: str = "clones") -> str:
    blocks, edges = hasse_edges(len(handles), pairs)
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for index, block in enumerate(blocks):
        label = " = ".join(handles[i].label for i in block).replace('"', '\\"')
        lines.append(f'  n{index} [label="{label}"];')
    for lower, upper in edges:
        lines.append(f"  n{lower} -> n{upper};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "DEFAULT_GENERATOR_CAP",
    "DEFAULT_GENERATOR_SEED",
    "CloneHandle",
    "leq",
    "join",
    "meet_fragments",
    "fragments_equal",
    "antichain_check",
    "covers_with",
    "covering_check",
    "leq_pairs",
    "hasse_edges",
    "export_dot",
]
