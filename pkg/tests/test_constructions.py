from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algebra.constructions import (
    bounded_or_growth_member,
    depends_on,
    embedded_clone,
    essential_coordinates,
    essential_core,
    extend_from_subset,
    family_inclusion,
    finite_embed_member,
    indicator_clone_fragments,
    interpolant,
    patch_op,
    random_family_member,
    restrict_to_subset,
    restriction_clone,
    translation_clone_member,
    translation_semigroup_check,
    unary_pol_member,
)
from algebra.core import Constant, Indicator, Projection, Relation, Table, Universe, agree_on, evaluate, tabulate
from algebra.errors import WindowTooSmall
from algebra.groups import AbelianGroupPresentation, SubgroupHandle
from algebra.lattice import CloneHandle
from algebra.partial import PartialOperation


@pytest.fixture
def u10():
    return Universe(10)


def test_interpolant_of_kind_c(u10):
    successor = Table.from_function(u10, 1, lambda x: min(x + 1, 9))
    a, f = interpolant(successor, [(2,)], "C", u10)
    assert a == 3
    assert f.entries == (0, 0, 3) + (0,) * 7
    assert bounded_or_growth_member(f, 3, "C", u10)


def test_interpolant_of_kind_d(u10):
    a, f = interpolant(Constant(0), [(1,)], "D", u10)
    assert a == 2
    assert evaluate(f, (1,), u10) == 0
    assert all(evaluate(f, (x,), u10) == x for x in range(10) if x != 1)
    assert bounded_or_growth_member(f, 2, "D", u10)


def test_interpolant_of_kind_d_needs_room_above_the_domain(u10):
    with pytest.raises(WindowTooSmall):
        interpolant(Constant(0), [(9,)], "D", u10)


@given(st.integers(0, 2**32 - 1), st.sampled_from(["C", "D"]))
@settings(max_examples=40, deadline=None)
def test_interpolants_agree_and_belong(seed, kind):
    u = Universe(8)
    rng = np.random.default_rng(seed)
    g = Table(u, 2, tuple(int(v) for v in rng.integers(0, 8, 64)))
    domain = sorted({(int(x), int(y)) for x, y in rng.integers(0, 6, (3, 2))})
    a, f = interpolant(g, domain, kind, u)
    assert agree_on(f, g, domain, u)
    assert bounded_or_growth_member(f, a, kind, u)


def test_random_family_members_belong(u10):
    rng = np.random.default_rng(7)
    for kind in ("C", "D"):
        for _ in range(20):
            assert bounded_or_growth_member(random_family_member(kind, 3, 2, u10, rng), 3, kind, u10)


def test_family_inclusion_is_monotone_in_a():
    u = Universe(4)
    assert family_inclusion(1, 2, "C", u) is None
    assert family_inclusion(1, 2, "D", u) is None
    witness = family_inclusion(2, 1, "C", u)
    assert witness is not None and max(witness.entries) == 2


def test_invalid_family_kind(u10):
    with pytest.raises(ValueError):
        bounded_or_growth_member(Constant(0), 1, "E", u10)


def test_essential_coordinates_and_core(u3):
    f = Table.from_function(u3, 3, lambda x, y, z: max(x, z))
    assert essential_coordinates(f, u3) == (1, 3)
    assert essential_core(f, u3) == Table.from_function(u3, 2, max)
    assert essential_core(Projection(2, 1), u3) == Table(u3, 1, (0, 1, 2))
    assert essential_core(Constant(2, 2), u3) == Table(u3, 1, (2, 2, 2))


def test_depends_on_returns_a_witness_pair(u3):
    assert depends_on(Projection(2, 1), 2, u3) is None
    left, right = depends_on(Projection(2, 1), 1, u3)
    assert left[1] == right[1] and left[0] != right[0]


def test_patch_operation(u3):
    f = Constant(2)
    s = patch_op(f, {0, 1})
    assert evaluate(s, (0, 1), u3) == 1
    assert evaluate(s, (1, 0), u3) == 0
    assert evaluate(s, (2, 0), u3) == 2


def test_unary_pol_member(u3):
    assert unary_pol_member(Projection(2, 2), {0, 1}, u3)
    assert not unary_pol_member(Constant(2), {0, 1}, u3)
    assert not unary_pol_member(Indicator(frozenset({0}), 2, 1), {0, 1}, u3)


def test_restrict_and_extend(u3):
    identity = Table(u3, 1, (0, 1, 2))
    flip = Table.from_function(u3, 1, lambda x: 2 - x)
    assert restrict_to_subset(identity, {1, 2}, u3) == Table(Universe(2), 1, (0, 1))
    assert restrict_to_subset(flip, {1, 2}, u3) is None
    c = Table(Universe(2), 2, (0, 0, 0, 1))
    extended = extend_from_subset(c, {1, 2}, u3)
    assert evaluate(extended, (2, 2), u3) == 2
    assert evaluate(extended, (1, 2), u3) == 1
    assert evaluate(extended, (0, 2), u3) == 0
    assert restrict_to_subset(extended, {1, 2}, u3) == c


def test_finite_embed_member(u3, boolean):
    monotone = CloneHandle.relational([Relation.of(Universe(2), [(0, 0), (0, 1), (1, 1)])], Universe(2))

    def majority(x, y, z):
        if max(x, y, z) > 1:
            return 2
        return 1 if x + y + z >= 2 else 0

    assert finite_embed_member(Table.from_function(u3, 3, majority), {0, 1}, monotone, u3)
    assert finite_embed_member(Projection(3, 2), {0, 1}, monotone, u3)
    assert not finite_embed_member(Constant(2), {0, 1}, lambda table: True, u3)
    negation = Table.from_function(u3, 1, lambda x: 1 - x if x < 2 else 2)
    assert not finite_embed_member(negation, {0, 1}, monotone, u3)


def test_embedded_clone_restricts_back(u3, boolean):
    clone = CloneHandle.generated([boolean["AND"]], Universe(2))
    image = embedded_clone(clone, {0, 1}, u3, 2)
    assert restriction_clone(image, {0, 1}, 2).ops == clone.fragment(2).ops


def test_indicator_clone_unary_fragment():
    u = Universe(5)
    fragment = indicator_clone_fragments({2, 3}, 0, 1, u, 1)
    expected = {
        (0, 1, 2, 3, 4),
        tabulate(Indicator(frozenset({2, 3}), 0, 1), u).entries,
        (1, 1, 1, 1, 1),
    }
    assert fragment.ops == expected


def test_indicator_needs_a_proper_set():
    with pytest.raises(ValueError):
        indicator_clone_fragments({0, 2}, 0, 1, Universe(5), 1)
    with pytest.raises(ValueError):
        indicator_clone_fragments({2}, 1, 1, Universe(5), 1)


def test_translation_clone_member():
    z12 = AbelianGroupPresentation.cyclic(12)
    window = z12.window()
    h = SubgroupHandle.generated(z12, [4])
    assert translation_clone_member(PartialOperation(1, (((0,), 4), ((5,), 9))), h, window)
    assert not translation_clone_member(PartialOperation(1, (((0,), 4), ((5,), 10))), h, window)
    assert not translation_clone_member(PartialOperation(1, (((0,), 2), ((5,), 7))), h, window)


def test_constant_partial_map_is_not_a_translation():
    z = AbelianGroupPresentation.integers()
    h = SubgroupHandle.generated(z, [1])
    assert not translation_clone_member(PartialOperation(1, (((0,), 3), ((1,), 3))), h)


def test_translation_semigroup_in_a_cyclic_window():
    window = AbelianGroupPresentation.cyclic(12).window()
    assert translation_semigroup_check([2, 3], window)
    assert translation_semigroup_check([4], window)
