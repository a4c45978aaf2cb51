from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from algebra.core import Constant, Relation, Table, Universe
from algebra.errors import UniverseMismatch
from algebra.lattice import (
    CloneHandle,
    covers_with,
    export_dot,
    fragments_equal,
    hasse_edges,
    join,
    leq,
    leq_pairs,
    meet_fragments,
)


@pytest.fixture
def clones(u2, boolean):
    return {
        "proj": CloneHandle.projections(u2),
        "and": CloneHandle.generated([boolean["AND"]], u2, label="<AND>"),
        "or": CloneHandle.generated([boolean["OR"]], u2, label="<OR>"),
        "not": CloneHandle.generated([boolean["NOT"]], u2, label="<NOT>"),
        "lattice": CloneHandle.generated([boolean["AND"], boolean["OR"]], u2, label="<AND,OR>"),
    }


def test_order_examples(clones):
    assert leq(clones["and"], clones["and"])
    for handle in clones.values():
        assert leq(clones["proj"], handle)
    assert leq(clones["and"], clones["lattice"], 2)
    assert not leq(clones["lattice"], clones["and"], 2)


def test_order_needs_one_universe(clones, u3):
    with pytest.raises(UniverseMismatch):
        leq(clones["and"], CloneHandle.projections(u3))


def test_join_contains_a_lattice_polynomial(clones, u2):
    joined = join(clones["and"], clones["or"])
    polynomial = Table.from_function(u2, 3, lambda x, y, z: min(x, max(y, z)))
    assert joined.contains(polynomial)
    assert not clones["and"].contains(polynomial)
    assert fragments_equal(joined, clones["lattice"], 3) is None


def test_meet_of_and_and_or_is_trivial(clones):
    meet = meet_fragments(clones["and"], clones["or"], 2)
    assert meet[2].ops == {(0, 0, 1, 1), (0, 1, 0, 1)}
    assert meet[1].ops == {(0, 1)}


def test_relational_handle_generates_its_fragments(u3):
    handle = CloneHandle.relational([Relation.unary(u3, [0])], u3, generator_cap=2)
    generators = handle.generators
    assert generators
    assert all(g.arity == 2 for g in generators)
    regenerated = CloneHandle.generated(generators, u3)
    assert fragments_equal(regenerated, handle, 2) is None


def test_relational_generators_are_seeded(u3):
    first = CloneHandle.relational([Relation.unary(u3, [0, 1])], u3, generator_seed=4).generators
    second = CloneHandle.relational([Relation.unary(u3, [0, 1])], u3, generator_seed=4).generators
    assert first == second


def test_adjoining_a_constant_to_the_zero_preserving_clone_gives_everything(u2):
    zero_preserving = CloneHandle.relational([Relation.unary(u2, [0])], u2, generator_cap=2)
    assert covers_with(zero_preserving, Constant(1), 2)
    assert not covers_with(zero_preserving, Constant(0), 2)


def test_hasse_edges_collapse_equal_clones():
    blocks, edges = hasse_edges(3, [(0, 1), (1, 0), (0, 2), (1, 2)])
    assert blocks == [[0, 1], [2]]
    assert edges == [(0, 1)]


def test_export_dot_of_a_chain(clones):
    chain = [clones["proj"], clones["and"], clones["lattice"]]
    dot = export_dot(chain, leq_pairs(chain))
    assert dot.startswith("digraph clones {")
    assert dot.count("->") == 2
    assert "n0 -> n1;" in dot
    assert "n1 -> n2;" in dot


def test_export_dot_of_an_antichain(clones):
    antichain = [clones["and"], clones["or"], clones["not"]]
    dot = export_dot(antichain, leq_pairs(antichain), name="antichain")
    assert "->" not in dot
    assert dot.count("[label=") == 3


def test_order_with_a_cap_below_the_generator_arity(u2, clones):
    everything = CloneHandle.all_operations(u2)
    assert not leq(everything, clones["proj"], cap=1)
    assert not leq(everything, clones["lattice"], cap=1)
    assert leq(everything, everything, cap=1)
    assert leq(clones["not"], everything, cap=1)
    zero_preserving = CloneHandle.relational([Relation.unary(u2, [0])], u2, generator_cap=2)
    assert not leq(zero_preserving, clones["and"], cap=1)
    assert leq(clones["and"], zero_preserving, cap=1)


def test_covering_reaches_every_ternary_table(u2):
    zero_preserving = CloneHandle.relational([Relation.unary(u2, [0])], u2, generator_cap=3)
    assert covers_with(zero_preserving, Table(u2, 1, (1, 0)), 3)


# ----------------------------------------------------------------------
# Order laws on random clones over two elements
# ----------------------------------------------------------------------
U2 = Universe(2)


@st.composite
def handles(draw):
    if draw(st.booleans()):
        subset = draw(st.sets(st.integers(0, 1), min_size=1, max_size=2))
        return CloneHandle.relational([Relation.unary(U2, subset)], U2)
    ops = []
    for _ in range(draw(st.integers(0, 2))):
        arity = draw(st.integers(1, 2))
        ops.append(Table(U2, arity, tuple(draw(st.lists(st.integers(0, 1), min_size=2**arity, max_size=2**arity)))))
    return CloneHandle.generated(ops, U2)


@given(handles(), st.integers(1, 2))
@settings(max_examples=30, deadline=None)
def test_order_is_reflexive(handle, cap):
    assert leq(handle, handle, cap)


@given(handles(), handles(), handles())
@settings(max_examples=30, deadline=None)
def test_order_is_transitive(first, second, third):
    if leq(first, second) and leq(second, third):
        assert leq(first, third)


@given(handles(), handles(), handles())
@settings(max_examples=30, deadline=None)
def test_join_is_the_least_upper_bound(left, right, upper):
    joined = join(left, right)
    assert leq(left, joined)
    assert leq(right, joined)
    if leq(left, upper) and leq(right, upper):
        assert leq(joined, upper)
