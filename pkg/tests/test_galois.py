from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algebra import galois
from algebra.core import Constant, Projection, Relation, Table, Translation, Universe, tabulate
from algebra.errors import BudgetExceeded
from algebra.fixpoint import VectorClosure, close_vectors
from algebra.galois import (
    No,
    YesUpTo,
    all_tables,
    clone_fragment,
    free_fragment_check,
    inv_generate,
    invariant_under,
    local_member,
    pol,
    restriction_fragment,
)
from algebra.groups import AbelianGroupPresentation, translation_op


def _monotone(entries, universe, arity):
    points = list(universe.tuples(arity))
    for x, y in itertools.product(range(len(points)), repeat=2):
        if all(a <= b for a, b in zip(points[x], points[y])) and entries[x] > entries[y]:
            return False
    return True


def test_fragment_of_negation(u2, boolean):
    assert clone_fragment([boolean["NOT"]], 1, u2).ops == {(0, 1), (1, 0)}


def test_empty_generator_set_gives_projections(u3):
    fragment = clone_fragment([], 2, u3)
    expected = {tabulate(Projection(2, k), u3).entries for k in (1, 2)}
    assert fragment.ops == expected


def test_lattice_operations_with_constants_give_the_monotone_tables(u2, boolean):
    fragment = clone_fragment([boolean["AND"], boolean["OR"], Constant(0), Constant(1)], 2, u2)
    oracle = {e for e in itertools.product(range(2), repeat=4) if _monotone(e, u2, 2)}
    assert len(oracle) == 6
    assert fragment.ops == oracle


def test_monotone_polymorphism_counts(u2, boolean):
    assert len(pol([boolean["LE"]], 2, u2)) == 6
    assert len(pol([boolean["LE"]], 3, u2)) == 20
    oracle = {e for e in itertools.product(range(2), repeat=8) if _monotone(e, u2, 3)}
    assert pol([boolean["LE"]], 3, u2).ops == oracle


def test_pol_examples(u2, u3):
    assert len(pol([], 1, u2)) == 4
    fixing_zero = pol([Relation.unary(u3, [0])], 1, u3)
    assert len(fixing_zero) == 9
    assert all(entries[0] == 0 for entries in fixing_zero.ops)
    assert len(all_tables(u3, 1)) == 27


def test_pol_budget():
    with pytest.raises(BudgetExceeded) as excinfo:
        pol([], 2, Universe(2), budget=10)
    assert excinfo.value.what == "polymorphisms"


def test_inv_generate_examples(u2, boolean):
    seed = [(0, 1), (1, 1)]
    assert inv_generate([], seed, u2).tuples == frozenset(seed)
    assert inv_generate([boolean["NOT"]], [(0, 1)], u2).tuples == {(0, 1), (1, 0)}
    assert inv_generate([boolean["AND"]], [(0, 1), (1, 0)], u2).tuples == {(0, 1), (1, 0), (0, 0)}


def test_free_fragment_check_examples(u2, u3, boolean):
    assert free_fragment_check([], 2, u3)
    assert free_fragment_check([boolean["NOT"]], 1, u2)
    assert free_fragment_check([boolean["AND"], boolean["OR"]], 2, u2)


def test_restriction_fragment_of_a_constant(u3):
    result = restriction_fragment([Constant(1)], [(0,), (1,), (2,)], u3)
    assert result.values == {(0, 1, 2), (1, 1, 1)}
    assert not result.truncated


def test_restriction_fragment_of_translations_is_the_numerical_semigroup():
    u = Universe(31)
    result = restriction_fragment([Translation(2), Translation(3)], [(0,)], u)
    assert result.values == {(0,)} | {(c,) for c in range(2, 31)}
    assert result.truncated


def test_local_member_accepts_sums_of_generators():
    u = Universe(12)
    verdict = local_member(Translation(5), [Translation(2), Translation(3)], [[(0,)], [(0,), (1,)]], u)
    assert isinstance(verdict, YesUpTo)
    assert len(verdict.domains) == 2


def test_local_member_finds_the_witness_domain():
    window = AbelianGroupPresentation.cyclic(12).window()
    u = window.universe
    g = Table(u, 1, (2, 5) + (0,) * 10)
    verdict = local_member(g, [translation_op(2, window)], [[(0,)], [(0,), (1,)]], u)
    assert isinstance(verdict, No)
    assert not verdict
    assert verdict.domain == ((0,), (1,))
    assert verdict.restriction == (2, 5)
    assert verdict.exact


def test_local_member_of_a_generator(u3):
    f = Table(u3, 1, (2, 0, 0))
    assert local_member(f, [f], [[(0,), (1,), (2,)]], u3)


def test_vector_closure_budget_keeps_partial_rows(u2, boolean):
    with pytest.raises(BudgetExceeded) as excinfo:
        close_vectors(u2, [(0, 1)], [boolean["NOT"]], width=2, budget=1)
    assert excinfo.value.partial.shape[1] == 2


def test_vector_closure_stops_at_target(u3):
    rotate = Table(u3, 1, (1, 2, 0))
    tables = [(1, np.asarray(rotate.entries, dtype=np.int64))]
    closure = VectorClosure(u3, 3, tables, budget=100, target=2)
    result = closure.run([(0, 1, 2)])
    assert len(result.rows) == 2
    assert closure.saturated


def test_free_fragment_check_rejects_a_closure_that_ignores_generators(monkeypatch, u2, boolean):
    honest = galois.close_vectors

    def forgetful(universe, seeds, generators, **kwargs):
        return honest(universe, seeds, [], **kwargs)

    monkeypatch.setattr(galois, "close_vectors", forgetful)
    assert not free_fragment_check([boolean["NOT"]], 1, u2)
    assert not free_fragment_check([boolean["AND"], boolean["OR"]], 2, u2)


def test_free_fragment_check_on_three_elements(u3):
    rotate = Table(u3, 1, (1, 2, 0))
    assert free_fragment_check([rotate], 1, u3)
    assert free_fragment_check([Table.from_function(u3, 2, min)], 2, u3)


def test_invariant_under_reads_the_table(u2, boolean):
    rows = clone_fragment([boolean["AND"]], 2, u2).ops
    assert invariant_under(rows, boolean["AND"], u2)
    assert not invariant_under(rows, boolean["OR"], u2)
    assert invariant_under([(0, 1), (1, 0)], boolean["NOT"], u2)
    assert not invariant_under([(0, 1)], boolean["NOT"], u2)


# ----------------------------------------------------------------------
# Galois laws on random small inputs
# ----------------------------------------------------------------------
@st.composite
def generator_sets(draw, max_size: int = 3, max_count: int = 2):
    size = draw(st.integers(2, max_size))
    universe = Universe(size)
    ops = []
    for _ in range(draw(st.integers(0, max_count))):
        arity = draw(st.integers(1, 2))
        entries = draw(st.lists(st.integers(0, size - 1), min_size=size**arity, max_size=size**arity))
        ops.append(Table(universe, arity, tuple(entries)))
    return universe, ops


def _rows(universe, arity):
    return st.lists(st.tuples(*[st.integers(0, universe.maximum)] * arity), min_size=1, max_size=4)


def _pol_arity(universe, data):
    return data.draw(st.integers(1, 2)) if universe.size == 2 else 1


@given(generator_sets(), st.data())
@settings(max_examples=30, deadline=None)
def test_pol_is_antitone(drawn, data):
    universe, _ = drawn
    width = data.draw(st.integers(1, 2))
    small = data.draw(_rows(universe, width))
    extra = data.draw(_rows(universe, width))
    arity = _pol_arity(universe, data)
    narrow = pol([Relation.of(universe, small + extra)], arity, universe)
    wide = pol([Relation.of(universe, small)], arity, universe)
    assert narrow.ops <= wide.ops


@given(generator_sets(max_count=3), st.data())
@settings(max_examples=30, deadline=None)
def test_inv_generate_grows_with_the_generators(drawn, data):
    universe, ops = drawn
    keep = data.draw(st.integers(0, len(ops)))
    seed = data.draw(_rows(universe, data.draw(st.integers(1, 3))))
    fewer = inv_generate(ops[:keep], seed, universe)
    more = inv_generate(ops, seed, universe)
    assert set(seed) <= fewer.tuples <= more.tuples


@given(generator_sets(), st.data())
@settings(max_examples=30, deadline=None)
def test_fragment_lies_in_pol_of_sampled_invariants(drawn, data):
    universe, ops = drawn
    seed = data.draw(_rows(universe, data.draw(st.integers(1, 2))))
    invariant = inv_generate(ops, seed, universe)
    arity = _pol_arity(universe, data)
    assert clone_fragment(ops, arity, universe).ops <= pol([invariant], arity, universe).ops


@given(generator_sets(), st.data())
@settings(max_examples=30, deadline=None)
def test_restriction_fragment_restricts_the_fragment(drawn, data):
    universe, ops = drawn
    arity = data.draw(st.integers(1, 2))
    domain = data.draw(_rows(universe, arity))
    restricted = restriction_fragment(ops, domain, universe)
    assert not restricted.truncated
    assert restricted.values == clone_fragment(ops, arity, universe).restrictions(domain)


def test_pol_of_the_full_relation_is_everything(u3):
    full = Relation.of(u3, itertools.product(range(3), repeat=2))
    assert pol([full], 2, u3).ops == all_tables(u3, 2).ops
