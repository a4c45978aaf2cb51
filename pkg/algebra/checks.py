"""Property checks over finite universes, one function per ``check`` kind.

Every check takes explicit seeds and sizes and returns a CheckReport whose
certificate can be re-checked with ``member`` or ``close``.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from algebra.constructions import (
    bounded_or_growth_member,
    embedded_clone,
    essential_core,
    extend_from_subset,
    family_inclusion,
    finite_embed_member,
    indicator_clone_fragments,
    interpolant,
    patch_op,
    random_family_member,
    restriction_clone,
    translation_clone,
    translation_clone_member,
    translation_semigroup_check,
    translation_unary_tables,
    unary_pol_member,
)
from algebra.core import Constant, Indicator, Operation, Projection, Relation, Table, Universe, agree_on, compose, evaluate, same_operation, tabulate
from algebra.galois import DEFAULT_FRAGMENT_BUDGET, free_fragment_check
from algebra.groups import DEFAULT_SEMIGROUP_BUDGET, AbelianGroupPresentation, GroupWindow, SubgroupHandle, all_subgroups
from algebra.lattice import DEFAULT_GENERATOR_SEED, CloneHandle, antichain_check, covering_check, join, leq
from algebra.partial import DEFAULT_PARTIAL_BUDGET, PartialOperation, extension_check, separate, sigma_join_check
from algebra.report import CheckReport, merge_reports
from utils.run_monitor import default_monitor

log = logging.getLogger(__name__)

CHECK_KINDS = (
    "compactness-witness",
    "finite-embed",
    "translation-lattice",
    "antichain-join",
    "antichain-meet",
    "sigma-join",
    "pol-inv",
    "covering",
)


def boolean_ops() -> Dict[str, Table]:
    u = Universe(2)
    return {
        "AND": Table.from_function(u, 2, min),
        "OR": Table.from_function(u, 2, max),
        "NOT": Table.from_function(u, 1, lambda x: 1 - x),
    }


def _random_table(universe: Universe, arity: int, rng: np.random.Generator) -> Table:
    return Table(universe, arity, tuple(int(v) for v in rng.integers(0, universe.size, universe.count(arity))))


def _is_projection(f: Operation, universe: Universe) -> bool:
    return any(same_operation(f, Projection(f.arity, k), universe) for k in range(1, f.arity + 1))


# ----------------------------------------------------------------------
# compactness-witness
# ----------------------------------------------------------------------
def compactness_witness_check(
    window: int = 10,
    a: int = 3,
    trials: int = 200,
    interpolants: int = 50,
    inclusion_window: int = 5,
    seed: int = 0,
) -> CheckReport:
    u = Universe(window)
    rng = np.random.default_rng(seed)
    parts: List[CheckReport] = []
    with default_monitor.track("check.compactness_witness", window=window, trials=trials):
        parts.append(_family_closure(u, a, "C", trials, rng))
        parts.append(_family_closure(u, a, "D", trials, rng))
        parts.append(_interpolants(u, interpolants, rng))
        parts.append(_outside_families(u, a, trials, rng))
        parts.append(_monotone_families(Universe(inclusion_window), window, seed))
    report = merge_reports("compactness-witness", parts)
    report.details["window"] = window
    report.details["a"] = a
    return report


def _family_closure(u: Universe, a: int, kind: str, trials: int, rng: np.random.Generator) -> CheckReport:
    """Compositions of family members (and projections) stay in the family.

    Kind C: the composition itself is a member or a projection. Kind D: the
    essential core of the composition is a member.
    """
    for _ in range(trials):
        outer_arity = int(rng.integers(1, 3))
        inner_arity = int(rng.integers(1, 3))
        pool: List[Operation] = [Projection(inner_arity, k) for k in range(1, inner_arity + 1)]
        pool += [random_family_member(kind, a, inner_arity, u, rng) for _ in range(2)]
        if rng.random() < 0.2:
            outer: Operation = Projection(outer_arity, int(rng.integers(1, outer_arity + 1)))
        else:
            outer = random_family_member(kind, a, outer_arity, u, rng)
        inners = [pool[int(rng.integers(len(pool)))] for _ in range(outer_arity)]
        composed = tabulate(compose(outer, inners), u)
        if kind == "C":
            ok = bounded_or_growth_member(composed, a, "C", u) or _is_projection(composed, u)
        else:
            ok = bounded_or_growth_member(essential_core(composed, u), a, "D", u)
        if not ok:
            return CheckReport(
                f"closure-{kind}",
                False,
                f"Komposition verlässt {kind}_{a}",
                certificate={"arity": composed.arity, "table": list(composed.entries)},
            )
    return CheckReport(f"closure-{kind}", True, f"{trials} Kompositionen in {kind}_{a}")


def _interpolants(u: Universe, count: int, rng: np.random.Generator) -> CheckReport:
    for _ in range(count):
        arity = int(rng.integers(1, 3))
        g = _random_table(u, arity, rng)
        # coordinates stay below max(u) so kind D has room for its bound
        points = list(itertools.product(range(u.maximum - 1), repeat=arity))
        size = int(rng.integers(1, 5))
        chosen = sorted(set(points[int(i)] for i in rng.integers(0, len(points), size)))
        for kind in ("C", "D"):
            bound, f = interpolant(g, chosen, kind, u)
            if not (bounded_or_growth_member(f, bound, kind, u) and agree_on(f, g, chosen, u)):
                return CheckReport(
                    "interpolant",
                    False,
                    f"Interpolant der Art {kind} verfehlt",
                    certificate={"kind": kind, "domain": [list(x) for x in chosen], "table": list(g.entries)},
                )
    return CheckReport("interpolant", True, f"{count} Interpolanten beider Arten")


def _outside_families(u: Universe, a: int, trials: int, rng: np.random.Generator) -> CheckReport:
    """Operations with a value above a are outside C_a; bounded ones below a are outside D_a."""
    for _ in range(trials):
        arity = int(rng.integers(1, 3))
        f = _random_table(u, arity, rng)
        entries = list(f.entries)
        entries[int(rng.integers(len(entries)))] = int(rng.integers(a + 1, u.size))
        unbounded = Table(u, arity, tuple(entries))
        bound = int(rng.integers(0, a))
        bounded = Table(u, arity, tuple(int(v) for v in rng.integers(0, bound + 1, u.count(arity))))
        if bounded_or_growth_member(unbounded, a, "C", u) or bounded_or_growth_member(bounded, a, "D", u):
            return CheckReport(
                "outside-families",
                False,
                "Stichprobe fälschlich in der Familie",
                certificate={"unbounded": list(unbounded.entries), "bounded": list(bounded.entries)},
            )
    return CheckReport("outside-families", True, f"{trials} Stichproben außerhalb von C_{a} bzw. D_{a}")


def _monotone_families(small: Universe, window: int, seed: int) -> CheckReport:
    u = Universe(window)
    for kind in ("C", "D"):
        for low, high in itertools.combinations(range(small.size), 2):
            witness = family_inclusion(low, high, kind, small, arity=1)
            if witness is None:
                witness = family_inclusion(low, high, kind, u, arity=2, samples=20, seed=seed)
            if witness is not None:
                return CheckReport(
                    "monotone-families",
                    False,
                    f"{kind}_{low} nicht in {kind}_{high}",
                    certificate={"kind": kind, "a": low, "a_prime": high, "table": list(witness.entries)},
                )
    return CheckReport("monotone-families", True, f"C_a und D_a monoton in a (a < {small.size})")


# ----------------------------------------------------------------------
# finite-embed
# ----------------------------------------------------------------------
def boolean_clones_on(universe: Universe) -> List[CloneHandle]:
    """All operations, the monotone operations and the clone of AND, on a two-element universe."""
    ops = boolean_ops()
    order = Relation.of(universe, [(0, 0), (0, 1), (1, 1)])
    return [
        CloneHandle.all_operations(universe),
        CloneHandle.relational([order], universe, label="monotone"),
        CloneHandle.generated([ops["AND"]], universe, label="<AND>"),
    ]


def finite_embed_check(
    size: int = 3,
    subset: Sequence[int] = (0, 1),
    cap: int = 2,
    pairs: int = 20,
    seed: int = 0,
) -> CheckReport:
    u = Universe(size)
    members = tuple(sorted(subset))
    if len(members) != 2:
        raise ValueError("the interval check embeds the two-element clones")
    clones = boolean_clones_on(Universe(2))
    rng = np.random.default_rng(seed)
    with default_monitor.track("check.finite_embed", size=size, cap=cap):
        parts = [
            _sigma_order(clones, members, u, cap),
            _patching(members, u, cap, pairs, rng),
            _all_operations_image(members, u, cap, rng),
            _interval(clones, members, u, cap),
        ]
    report = merge_reports("finite-embed", parts)
    report.details["subset"] = list(members)
    return report


def _sigma_order(clones: List[CloneHandle], members: Tuple[int, ...], u: Universe, cap: int) -> CheckReport:
    """Order and inclusion of images agree; distinct clones get a separating operation."""
    witnesses: Dict[str, List[int]] = {}
    for left, right in itertools.permutations(clones, 2):
        below = all(left.fragment(n).ops <= right.fragment(n).ops for n in range(1, cap + 1))
        image_below = True
        for n in range(1, cap + 1):
            for table in left.fragment(n).tables():
                g = extend_from_subset(table, members, u)
                if not finite_embed_member(g, members, right, u):
                    image_below = False
                    witnesses[f"{left.label} / {right.label}"] = list(g.entries)
                    break
            if not image_below:
                break
        if below != image_below:
            return CheckReport(
                "sigma-order",
                False,
                f"Ordnung bei {left.label} / {right.label} nicht erhalten",
                certificate={"left": left.label, "right": right.label, "below": below},
            )
    for left, right in itertools.combinations(clones, 2):
        if f"{left.label} / {right.label}" not in witnesses and f"{right.label} / {left.label}" not in witnesses:
            return CheckReport(
                "sigma-order",
                False,
                f"keine trennende Operation für {left.label} und {right.label}",
                certificate={"left": left.label, "right": right.label},
            )
    return CheckReport("sigma-order", True, "Einbettung ordnungstreu und injektiv", {"witnesses": witnesses})


def _patching(members: Tuple[int, ...], u: Universe, cap: int, pairs: int, rng: np.random.Generator) -> CheckReport:
    inside = set(members)
    for _ in range(pairs):
        arity = int(rng.integers(1, cap + 1))
        f = _random_table(u, arity, rng)
        other = list(_random_table(u, arity, rng).entries)
        for position, args in enumerate(u.tuples(arity)):
            if all(v in inside for v in args):
                other[position] = f.entries[position]
        f_prime = Table(u, arity, tuple(other))
        s = patch_op(f, members)
        for args in u.tuples(arity):
            if evaluate(s, args + (evaluate(f_prime, args, u),), u) != evaluate(f, args, u):
                return CheckReport(
                    "patching",
                    False,
                    "f(x) != s(x, f'(x))",
                    certificate={"f": list(f.entries), "f_prime": list(f_prime.entries), "args": list(args)},
                )
        for args in itertools.product(members, repeat=arity + 1):
            if evaluate(s, args, u) != args[-1]:
                return CheckReport("patching", False, "s ist auf A keine Projektion", certificate={"f": list(f.entries)})
    return CheckReport("patching", True, f"Patch-Identität für {pairs} Paare")


def _all_operations_image(members: Tuple[int, ...], u: Universe, cap: int, rng: np.random.Generator) -> CheckReport:
    """The image of all operations on A is Pol({A})."""
    everything = CloneHandle.all_operations(Universe(len(members)))
    candidates: List[Table] = [Table(u, 1, entries) for entries in itertools.product(u.elements, repeat=u.size)]
    for arity in range(2, cap + 1):
        candidates += [_random_table(u, arity, rng) for _ in range(200)]
    for g in candidates:
        if finite_embed_member(g, members, everything, u) != unary_pol_member(g, members, u):
            return CheckReport("all-operations-image", False, "Bild von O_A ist nicht Pol({A})", certificate={"table": list(g.entries)})
    return CheckReport("all-operations-image", True, f"{len(candidates)} Operationen geprüft")


def _interval(clones: List[CloneHandle], members: Tuple[int, ...], u: Universe, cap: int) -> CheckReport:
    """Clones between the image of the projections and Pol({A}) come from their restrictions."""
    everything = CloneHandle.all_operations(u)
    for clone in clones:
        for n in range(1, cap + 1):
            image = embedded_clone(clone, members, u, n)
            if restriction_clone(image, members, n).ops != clone.fragment(n).ops:
                return CheckReport("interval", False, f"Restriktionen von {image.label} verfehlen {clone.label}", certificate={"arity": n})
            expected = {
                entries
                for entries in everything.fragment(n).ops
                if finite_embed_member(Table(u, n, entries), members, clone, u)
            }
            if image.fragment(n).ops != expected:
                return CheckReport("interval", False, f"{image.label} ist nicht das Bild von {clone.label}", certificate={"arity": n})
    return CheckReport("interval", True, "Intervall-Klone sind Bilder ihrer Restriktionen")


# ----------------------------------------------------------------------
# translation-lattice
# ----------------------------------------------------------------------
def translation_family(
    modulus: int = 12,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> Tuple[GroupWindow, List[SubgroupHandle], List[CloneHandle]]:
    """Every subgroup H of the cyclic group with the clone generated by the translations by H."""
    group = AbelianGroupPresentation.cyclic(modulus)
    window = group.window()
    subgroups = all_subgroups(group)
    return window, subgroups, [translation_clone(h, window, budget=budget) for h in subgroups]


def translation_lattice_check(
    modulus: int = 12,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    semigroup_budget: int = DEFAULT_SEMIGROUP_BUDGET,
) -> CheckReport:
    window, subgroups, handles = translation_family(modulus, budget)
    by_members = {h.elements(): handle for h, handle in zip(subgroups, handles)}
    failures: List[Dict[str, object]] = []
    with default_monitor.track("check.translation_lattice", modulus=modulus, subgroups=len(subgroups)):
        for h, handle in zip(subgroups, handles):
            if handle.fragment(1).ops != translation_unary_tables(h.elements(), window):
                failures.append({"subgroup": h.name, "problem": "unary fragment"})
        for (h1, c1), (h2, c2) in itertools.permutations(list(zip(subgroups, handles)), 2):
            if leq(c1, c2, 1) != h1.issubset(h2):
                failures.append({"left": h1.name, "right": h2.name, "problem": "order"})
        for (h1, c1), (h2, c2) in itertools.combinations(list(zip(subgroups, handles)), 2):
            meet_image = by_members[h1.meet(h2).elements()]
            join_image = by_members[h1.join(h2).elements()]
            if c1.fragment(1).intersection(c2.fragment(1)).ops != meet_image.fragment(1).ops:
                failures.append({"left": h1.name, "right": h2.name, "problem": "meet"})
            if join(c1, c2).fragment(1).ops != join_image.fragment(1).ops:
                failures.append({"left": h1.name, "right": h2.name, "problem": "join"})
        failures += _translation_membership(subgroups, handles, window)
        for generators in [[g] for g in range(modulus)] + [[2, 3], [4, 6], [8, 9]]:
            if not translation_semigroup_check(generators, window, budget, semigroup_budget):
                failures.append({"generators": generators, "problem": "semigroup"})
    pairs = len(subgroups) * (len(subgroups) - 1) // 2
    return CheckReport(
        "translation-lattice",
        not failures,
        f"{len(subgroups)} Untergruppen von Z{modulus}, {pairs} Paare",
        {"subgroups": [h.name for h in subgroups], "failures": len(failures)},
        failures[0] if failures else None,
    )


def _translation_membership(
    subgroups: Sequence[SubgroupHandle],
    handles: Sequence[CloneHandle],
    window: GroupWindow,
) -> List[Dict[str, object]]:
    """Partial maps on two points against the restrictions of each translation clone."""
    failures: List[Dict[str, object]] = []
    modulus = window.size
    for h, handle in zip(subgroups, handles):
        for x1, x2 in itertools.combinations(range(modulus), 2):
            domain = ((x1,), (x2,))
            allowed = handle.restrictions(domain)
            for y1, y2 in itertools.product(range(modulus), repeat=2):
                p = PartialOperation(1, (((x1,), y1), ((x2,), y2)))
                if translation_clone_member(p, h, window) != ((y1, y2) in allowed):
                    failures.append({"subgroup": h.name, "partial": p.to_json(), "problem": "membership"})
                    return failures
    return failures


# ----------------------------------------------------------------------
# antichains and covering
# ----------------------------------------------------------------------
def pol_subset_family(
    size: int = 3,
    subsets: Sequence[Sequence[int]] = ((0,), (1,), (0, 1)),
    cap: int = 2,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    generator_seed: int = DEFAULT_GENERATOR_SEED,
) -> List[CloneHandle]:
    u = Universe(size)
    return [
        CloneHandle.relational(
            [Relation.unary(u, subset)],
            u,
            label="Pol({" + ",".join(str(a) for a in sorted(subset)) + "})",
            budget=budget,
            generator_cap=cap,
            generator_seed=generator_seed,
        )
        for subset in subsets
    ]


def antichain_join_check(
    size: int = 3,
    subsets: Sequence[Sequence[int]] = ((0,), (1,), (0, 1)),
    cap: int = 2,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    generator_seed: int = DEFAULT_GENERATOR_SEED,
) -> CheckReport:
    handles = pol_subset_family(size, subsets, cap, budget, generator_seed)
    return antichain_check(handles, cap, "join-top", CloneHandle.all_operations(Universe(size), budget=budget))


def indicator_family(
    size: int = 5,
    candidates: Sequence[int] = (2, 3, 4),
    a: int = 0,
    b: int = 1,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> Tuple[List[CloneHandle], CloneHandle]:
    """Clones of f_B for every nonempty B among the candidates, and the clone of c_b."""
    u = Universe(size)
    handles = []
    for r in range(1, len(candidates) + 1):
        for subset in itertools.combinations(sorted(candidates), r):
            label = "f_{" + ",".join(map(str, subset)) + "}"
            handles.append(CloneHandle.generated([Indicator(frozenset(subset), a, b)], u, label=label, budget=budget))
    bottom = CloneHandle.generated([Constant(b)], u, label=f"<c_{b}>", budget=budget)
    return handles, bottom


def antichain_meet_check(
    size: int = 5,
    candidates: Sequence[int] = (2, 3, 4),
    a: int = 0,
    b: int = 1,
    cap: int = 2,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> CheckReport:
    u = Universe(size)
    handles, bottom = indicator_family(size, candidates, a, b, budget)
    for handle in handles:
        indicator = handle.generators[0]
        subset = sorted(indicator.members)  # type: ignore[attr-defined]
        expected = {
            tabulate(Projection(1, 1), u).entries,
            tabulate(indicator, u).entries,
            tabulate(Constant(b), u).entries,
        }
        fragment = indicator_clone_fragments(subset, a, b, u, 1, budget)
        if fragment.ops != expected:
            return CheckReport(
                "antichain-meet",
                False,
                f"einstelliges Fragment von <f_B> für B={subset} falsch",
                certificate={"subset": subset, "size": len(fragment)},
            )
    return antichain_check(handles, cap, "meet-bottom", bottom)


def covering_default_check(
    size: int = 3,
    subset: Sequence[int] = (0, 1),
    cap: int = 2,
    trials: int = 50,
    seed: int = 0,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
    generator_seed: int = DEFAULT_GENERATOR_SEED,
) -> CheckReport:
    return covering_check(subset, cap, Universe(size), trials, seed, budget, generator_seed)


# ----------------------------------------------------------------------
# sigma-join
# ----------------------------------------------------------------------
def boolean_family() -> List[CloneHandle]:
    u = Universe(2)
    ops = boolean_ops()
    return [
        CloneHandle.projections(u),
        CloneHandle.generated([ops["AND"]], u, label="<AND>"),
        CloneHandle.generated([ops["OR"]], u, label="<OR>"),
        CloneHandle.generated([ops["NOT"]], u, label="<NOT>"),
        CloneHandle.generated([ops["AND"], ops["OR"]], u, label="<AND,OR>"),
    ]


def small_domains(universe: Universe, arities: Iterable[int], max_size: int) -> List[Tuple[Tuple[int, ...], ...]]:
    domains = []
    for arity in arities:
        points = list(universe.tuples(arity))
        for size in range(1, min(max_size, len(points)) + 1):
            domains.extend(tuple(c) for c in itertools.combinations(points, size))
    return domains


def sigma_join_default_check(budget: int = DEFAULT_PARTIAL_BUDGET) -> CheckReport:
    u = Universe(2)
    family = boolean_family()
    separation_domains = small_domains(u, (1, 2), 4)
    parts: List[CheckReport] = []
    missing = []
    pairs = list(itertools.combinations(family, 2))
    for left, right in pairs:
        if not separate(left, right, separation_domains):
            missing.append([left.label, right.label])
    parts.append(
        CheckReport(
            "separation",
            not missing,
            f"{len(pairs) - len(missing)}/{len(pairs)} Paare getrennt",
            certificate={"pair": missing[0]} if missing else None,
        )
    )
    and_clone, or_clone = family[1], family[2]
    binary_domains = small_domains(u, (2,), 4)
    parts.append(sigma_join_check(and_clone, or_clone, binary_domains, budget))
    orphans = []
    for clone in (and_clone, or_clone, join(and_clone, or_clone)):
        orphans += [p.to_json() for p in extension_check(clone, binary_domains, budget)]
    parts.append(
        CheckReport(
            "extension",
            not orphans,
            "jedes partielle Element hat eine totale Fortsetzung" if not orphans else "Element ohne Fortsetzung",
            certificate={"partial": orphans[0]} if orphans else None,
        )
    )
    report = merge_reports("sigma-join", parts)
    report.note = "relative to tested domains"
    return report


# ----------------------------------------------------------------------
# pol-inv
# ----------------------------------------------------------------------
def pol_inv_check(
    generators: Sequence[Operation],
    universe: Universe,
    arities: Iterable[int] = (1, 2),
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> CheckReport:
    results = {f"n={n}": free_fragment_check(generators, n, universe, budget) for n in arities}
    failed = [key for key, ok in results.items() if not ok]
    return CheckReport(
        "pol-inv",
        not failed,
        f"cll(F) = Pol Inv(F) auf {universe} für {', '.join(results)}",
        {key: "PASS" if ok else "FAIL" for key, ok in results.items()},
        {"arity": failed[0], "generators": [g.describe() for g in generators]} if failed else None,
    )


def pol_inv_random_check(
    count: int = 25,
    seed: int = 0,
    budget: int = DEFAULT_FRAGMENT_BUDGET,
) -> CheckReport:
    rng = np.random.default_rng(seed)
    failures: List[Dict[str, object]] = []
    with default_monitor.track("check.pol_inv", count=count):
        for _ in range(count):
            u = Universe(int(rng.integers(2, 4)))
            gens = [_random_table(u, int(rng.integers(1, 3)), rng) for _ in range(int(rng.integers(1, 4)))]
            report = pol_inv_check(gens, u, (1, 2), budget)
            if not report:
                failures.append({"universe": u.size, "generators": [list(g.entries) for g in gens]})
    return CheckReport(
        "pol-inv",
        not failures,
        f"{count - len(failures)}/{count} zufällige Erzeugermengen exakt",
        {"seed": seed, "count": count},
        failures[0] if failures else None,
    )


__all__ = [
    "CHECK_KINDS",
    "boolean_ops",
    "boolean_clones_on",
    "boolean_family",
    "small_domains",
    "compactness_witness_check",
    "finite_embed_check",
    "translation_lattice_check",
    "antichain_join_check",
    "antichain_meet_check",
    "covering_default_check",
    "sigma_join_default_check",
    "pol_inv_check",
    "pol_inv_random_check",
    "pol_subset_family",
    "indicator_family",
    "translation_family",
]
