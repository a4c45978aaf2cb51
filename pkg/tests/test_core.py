from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from algebra.core import (
    Composed,
    Constant,
    Indicator,
    Projection,
    Relation,
    Table,
    Translation,
    Universe,
    agree_on,
    compose,
    evaluate,
    index_of,
    preserves,
    tabulate,
)
from algebra.errors import ArityMismatch, UniverseMismatch, ValueEscapesWindow


@st.composite
def tables(draw, max_size: int = 3, max_arity: int = 2):
    size = draw(st.integers(1, max_size))
    arity = draw(st.integers(1, max_arity))
    universe = Universe(size)
    entries = draw(st.lists(st.integers(0, size - 1), min_size=size**arity, max_size=size**arity))
    return Table(universe, arity, tuple(entries))


def test_evaluate_basic_operations():
    assert evaluate(Projection(3, 2), (4, 7, 1)) == 7
    assert evaluate(Translation(2), (5,), Universe(10)) == 7
    assert evaluate(Indicator(frozenset({1, 2}), 5, 6), (3,)) == 6
    assert evaluate(Indicator(frozenset({1, 2}), 5, 6), (2,)) == 5


def test_evaluate_rejects_wrong_arity():
    with pytest.raises(ArityMismatch):
        evaluate(Projection(2, 1), (1, 2, 3))


def test_index_of_is_row_major():
    assert index_of((1, 0), 2) == 2
    assert index_of((2, 1, 0), 3) == 21


def test_compose_with_a_table_tabulates(u2, boolean):
    composed = compose(boolean["NOT"], [Projection(2, 1)])
    assert composed == Table(u2, 2, (1, 1, 0, 0))


def test_compose_translations_adds_shifts():
    composed = compose(Translation(2), [Translation(3)])
    assert isinstance(composed, Composed)
    assert all(evaluate(composed, (x,)) == evaluate(Translation(5), (x,)) for x in range(20))


def test_compose_stays_symbolic_when_values_escape():
    small = Universe(3)
    step = Table(small, 1, (1, 2, 2))
    composed = compose(step, [Translation(1)])
    assert isinstance(composed, Composed)


def test_compose_refuses_mixed_universes(u2, u3):
    with pytest.raises(UniverseMismatch):
        compose(Table(u2, 1, (1, 0)), [Table(u3, 1, (0, 1, 2))])


@given(tables())
@settings(max_examples=50, deadline=None)
def test_identity_composition_returns_the_table(f):
    assert compose(Projection(1, 1), [f]) == f


def test_min_preserves_the_successor_pairs(u3):
    # (0,1),(0,1) / (0,1),(1,2) / (1,2),(0,1) / (1,2),(1,2) map to (0,1),(0,1),(0,1),(1,2)
    minimum = Table.from_function(u3, 2, min)
    rho = Relation.of(u3, [(0, 1), (1, 2)])
    assert preserves(minimum, rho)


def test_negation_does_not_preserve_the_order(boolean):
    assert not preserves(boolean["NOT"], boolean["LE"])
    assert preserves(boolean["AND"], boolean["LE"])


@given(st.integers(1, 3), st.data())
@settings(max_examples=30, deadline=None)
def test_projections_preserve_everything(arity, data):
    u = Universe(3)
    width = data.draw(st.integers(1, 2))
    rows = data.draw(st.sets(st.tuples(*[st.integers(0, 2)] * width), min_size=1, max_size=5))
    relation = Relation.of(u, rows, width)
    k = data.draw(st.integers(1, arity))
    assert preserves(Projection(arity, k), relation)


def test_translation_preserves_subgroup_relation_only_for_members():
    from algebra.groups import AbelianGroupPresentation, translation_op

    window = AbelianGroupPresentation.cyclic(12).window()
    h = Relation.unary(window.universe, [0, 4, 8])
    assert preserves(translation_op(4, window), h)
    assert not preserves(translation_op(2, window), h)


def test_agree_on():
    assert not agree_on(Translation(2), Translation(3), [(0,)])
    assert agree_on(Translation(2), Translation(2), [(0,), (5,)])
    with pytest.raises(ArityMismatch):
        agree_on(Projection(2, 1), Translation(1), [(0,)])


def test_tabulate_examples(u2):
    assert tabulate(Projection(1, 1), u2).entries == (0, 1)
    assert tabulate(Constant(1, 2), u2).entries == (1, 1, 1, 1)


def test_tabulate_reports_the_escaping_argument():
    with pytest.raises(ValueEscapesWindow) as excinfo:
        tabulate(Translation(3), Universe(5))
    assert excinfo.value.args_tuple == (2,)
    assert excinfo.value.value == 5


def test_table_validation(u2):
    with pytest.raises(ArityMismatch):
        Table(u2, 2, (0, 1))
    with pytest.raises(ValueEscapesWindow):
        Table(u2, 1, (0, 2))


def test_relation_validation(u2):
    with pytest.raises(ArityMismatch):
        Relation.of(u2, [(0, 1), (1,)], 2)
    with pytest.raises(ValueEscapesWindow):
        Relation.of(u2, [(0, 3)])


def _table(draw, universe, arity):
    size = universe.size
    entries = draw(st.lists(st.integers(0, size - 1), min_size=size**arity, max_size=size**arity))
    return Table(universe, arity, tuple(entries))


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_composition_is_associative(data):
    universe = Universe(data.draw(st.integers(1, 3)))
    outer, middle, inner = (data.draw(st.integers(1, 2)) for _ in range(3))
    f = _table(data.draw, universe, outer)
    gs = [_table(data.draw, universe, middle) for _ in range(outer)]
    hs = [_table(data.draw, universe, inner) for _ in range(middle)]
    assert compose(compose(f, gs), hs) == compose(f, [compose(g, hs) for g in gs])


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_projections_are_a_right_identity(data):
    universe = Universe(data.draw(st.integers(1, 3)))
    arity = data.draw(st.integers(2, 3))
    f = _table(data.draw, universe, arity)
    assert compose(f, [Projection(arity, k) for k in range(1, arity + 1)]) == f
