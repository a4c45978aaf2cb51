from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from algebra.core import Table, Universe, compose
from algebra.errors import BudgetExceeded
from algebra.lattice import CloneHandle
from algebra.partial import (
    NotSeparated,
    PartialOperation,
    Separation,
    extension_check,
    partial_closure,
    partial_compose,
    projection_restriction,
    restrict,
    restrict_clone,
    separate,
    sigma_join_check,
)


def identity_on(*points):
    return PartialOperation(1, tuple(((p,), p) for p in points))


def test_graph_is_canonical():
    p = PartialOperation(1, (((2,), 0), ((1,), 1)))
    assert p.domain == ((1,), (2,))
    assert p == PartialOperation.from_mapping(1, {(2,): 0, (1,): 1})
    assert p(2) == 0
    with pytest.raises(KeyError):
        p(5)
    with pytest.raises(ValueError):
        PartialOperation(1, (((1,), 0), ((1,), 1)))


def test_composition_intersects_domains():
    assert partial_compose(identity_on(1, 2), [identity_on(0, 1)]) == identity_on(1)


def test_composition_with_restricted_projections_is_neutral():
    f = PartialOperation(2, (((0, 1), 1), ((1, 1), 0)))
    projections = [projection_restriction(2, k, f.domain) for k in (1, 2)]
    assert partial_compose(f, projections) == f


@st.composite
def composable(draw):
    u = Universe(3)
    outer = Table(u, 2, tuple(draw(st.lists(st.integers(0, 2), min_size=9, max_size=9))))
    inners = [Table(u, 2, tuple(draw(st.lists(st.integers(0, 2), min_size=9, max_size=9)))) for _ in range(2)]
    domain = draw(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)), min_size=1))
    return u, outer, inners, sorted(domain)


@given(composable())
@settings(max_examples=40, deadline=None)
def test_partial_composition_matches_total_composition(case):
    u, outer, inners, domain = case
    total_outer = restrict(outer, list(u.tuples(2)), u)
    partial = partial_compose(total_outer, [restrict(g, domain, u) for g in inners])
    assert partial == restrict(compose(outer, inners), domain, u)


def test_closure_of_restricted_negation():
    negation = PartialOperation(1, (((0,), 1),))
    closure = partial_closure([negation])
    assert negation in closure
    assert identity_on(0) in closure
    assert PartialOperation(1, ()) in closure
    assert len(closure) == 3


def test_closure_without_generators_is_empty():
    assert len(partial_closure([])) == 0


def test_closure_budget():
    generators = [PartialOperation(1, (((x,), (x + 1) % 6),)) for x in range(6)]
    with pytest.raises(BudgetExceeded):
        partial_closure(generators, budget=5)


def test_restrict_clone_of_projections(u2):
    restricted = restrict_clone(CloneHandle.projections(u2), [[(0,), (1,)]])
    assert restricted.members == (identity_on(0, 1),)
    assert not restricted.closed


def test_separation_examples(u2, boolean):
    negation = CloneHandle.generated([boolean["NOT"]], u2)
    projections = CloneHandle.projections(u2)
    witness = separate(negation, projections, [[(0,)]])
    assert isinstance(witness, Separation)
    assert witness.witness == PartialOperation(1, (((0,), 1),))
    assert witness.side == "left"
    same = separate(negation, CloneHandle.generated([boolean["NOT"]], u2), [[(0,)], [(0,), (1,)]])
    assert isinstance(same, NotSeparated)
    assert not same


def _binary_domains(u):
    points = list(u.tuples(2))
    return [combo for size in range(1, 5) for combo in itertools.combinations(points, size)]


def test_sigma_join_of_and_and_or(u2, boolean):
    left = CloneHandle.generated([boolean["AND"]], u2, label="<AND>")
    right = CloneHandle.generated([boolean["OR"]], u2, label="<OR>")
    report = sigma_join_check(left, right, _binary_domains(u2))
    assert report.passed
    assert report.note == "relative to tested domains"


def test_sigma_join_with_projections_is_the_restriction_set(u2, boolean):
    clone = CloneHandle.generated([boolean["AND"]], u2)
    report = sigma_join_check(clone, CloneHandle.projections(u2), _binary_domains(u2))
    assert report.passed


def test_extension_property(u2, boolean):
    clone = CloneHandle.generated([boolean["AND"], boolean["OR"]], u2)
    assert extension_check(clone, _binary_domains(u2)) == []
