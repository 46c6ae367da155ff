from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbsiso import fixtures
from gbsiso.betti1 import (
    PointedLabeledGraph,
    XiClass,
    ascending_normal_form,
    ascending_witness,
    enumerate_normal_forms,
    is_ascending_b1,
    isomorphic,
    nonascending_normal_form,
    nonmobile_subgroup_iso,
    plgi_fingerprint,
    pointed_space,
    xi_equal,
    xi_invariant,
)
from gbsiso.errors import (
    Ascending,
    BettiNotOne,
    MismatchedArity,
    MismatchedQ,
    NonIntegralModulus,
    NotAscending,
    UnitLabel,
)
from gbsiso.graph import DirectedEdge, LabeledGraph, bs, canonical_code, negate_vertex, validate
from gbsiso.mobility import is_mobile
from gbsiso.moves import a_move
from random_moves import random_sequence

POINT = validate(["p"], [])


def segment(a: int, b: int) -> LabeledGraph:
    return validate(["x", "y"], [("s", "x", "y", a, b)])


def xi(q: int, *entries) -> XiClass:
    return XiClass(q, tuple(Fraction(x) for x in entries))


def test_ascending_examples():
    assert is_ascending_b1(fixtures.load("F3G"))
    assert ascending_witness(fixtures.load("F3G")) == (DirectedEdge("l"),)
    assert is_ascending_b1(bs(2, 4))
    assert not is_ascending_b1(fixtures.load("D1"))
    assert not is_ascending_b1(fixtures.load("D2"))
    with pytest.raises(BettiNotOne):
        is_ascending_b1(fixtures.load("F1L"))


def test_ascending_normal_form_examples():
    g = fixtures.load("F3G")
    assert canonical_code(ascending_normal_form(g)) == canonical_code(g)
    expected = a_move(bs(2, 4), DirectedEdge("t"))
    assert canonical_code(ascending_normal_form(bs(2, 4))) == canonical_code(expected)
    with pytest.raises(NotAscending):
        ascending_normal_form(fixtures.load("D1"))


def test_ascending_normal_form_moves_mobile_edges_to_the_loop():
    g = validate(
        ["v0", "v1", "w"], [("a", "v0", "v1", 2, 4), ("b", "v1", "v0", 2, 2), ("f", "w", "v0", 3, 2)]
    )
    nf = ascending_normal_form(g)
    loops = [e for e in nf.edges if e.is_loop]
    assert len(loops) == 1 and abs(loops[0].label_from) == 1
    assert all(e.is_loop or loops[0].origin in (e.origin, e.terminus) for e in nf.edges)


def test_normal_forms_are_idempotent():
    for g in (fixtures.load("F3G"), fixtures.load("F3Gp"), bs(2, 4), bs(3, 12)):
        nf = ascending_normal_form(g)
        assert canonical_code(ascending_normal_form(nf)) == canonical_code(nf)
    d2 = nonascending_normal_form(fixtures.load("D2"))
    assert canonical_code(nonascending_normal_form(d2)) == canonical_code(d2)


def test_xi_examples():
    assert xi_equal(xi_invariant(fixtures.load("F3G")), xi(2, 1, 1))
    assert xi_equal(xi_invariant(fixtures.load("F3Gp")), xi(2, 1, 1))
    assert xi_equal(xi(2, 2, 2), xi(2, 1, 1))
    assert xi_equal(xi(2, 1, 1), xi(2, 1, 2))
    assert not xi_equal(xi(2, 1, 1), xi(2, 1, 3))
    assert xi(2, 2, 2) == xi(2, 1, 1)
    assert str(xi(2, 1, 3)) == "(1, 3) mod q=2"
    with pytest.raises(NotAscending):
        xi_invariant(bs(1, 4))


def test_xi_diagonal_factor():
    # a common factor built from primes of q is absorbed, any other is not
    assert xi_equal(xi(6, 1, 5), xi(6, 3, 15))
    assert xi_equal(xi(6, 1, 5), xi(6, Fraction(1, 2), Fraction(5, 2)))
    assert not xi_equal(xi(6, 1, 5), xi(6, 5, 25))
    assert not xi_equal(xi(6, 1, 5), xi(6, 3, 5))


def test_xi_mismatches():
    with pytest.raises(MismatchedQ):
        xi_equal(xi(2, 1), xi(3, 1))
    with pytest.raises(MismatchedArity):
        xi_equal(xi(2, 1), xi(2, 1, 1))


_entries = st.lists(st.sampled_from([1, 2, 3, 4, 5, 6, 9, 10, 12, 15]), min_size=2, max_size=2)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 6]), _entries, _entries, _entries)
def test_xi_equal_is_an_equivalence(q, a, b, c):
    x, y, z = xi(q, *a), xi(q, *b), xi(q, *c)
    assert xi_equal(x, x)
    assert xi_equal(x, y) == xi_equal(y, x)
    if xi_equal(x, y) and xi_equal(y, z):
        assert xi_equal(x, z)


def test_pointed_space_examples():
    two = pointed_space(PointedLabeledGraph(POINT, "p", 2))
    assert len(two) == 1
    assert pointed_space(PointedLabeledGraph(POINT, "p", -2)) == two
    assert pointed_space(PointedLabeledGraph(POINT, "p", 4)) != two
    with pytest.raises(UnitLabel):
        pointed_space(PointedLabeledGraph(POINT, "p", 1))
    with pytest.raises(NonIntegralModulus):
        pointed_space(PointedLabeledGraph(bs(2, 4), "v", 3))


def test_pointed_space_follows_slides():
    # the basepoint can move along the segment: both ends give the same space
    g = segment(2, 2)
    assert pointed_space(PointedLabeledGraph(g, "x", 4)) == pointed_space(PointedLabeledGraph(g, "y", 4))


def test_plgi_examples():
    left = plgi_fingerprint(fixtures.load("F3G"))
    right = plgi_fingerprint(fixtures.load("F3Gp"))
    assert sorted(map(sorted, left.labels)) == [[2], [2]]
    assert sorted(map(sorted, right.labels)) == [[2], [4]]
    assert left != right
    assert plgi_fingerprint(fixtures.load("D1")).entries == ()


def test_nonmobile_subgroup_examples():
    assert nonmobile_subgroup_iso(POINT, validate(["q"], []))
    assert nonmobile_subgroup_iso(segment(2, 2), bs(1, -1))
    assert not nonmobile_subgroup_iso(segment(2, 3), segment(2, 5))


def test_nonascending_examples():
    d1 = fixtures.load("D1")
    assert nonascending_normal_form(d1) == d1
    nf = nonascending_normal_form(fixtures.load("D2"))
    assert (nf.edge("f").terminus, nf.edge("f").label_to) == ("v2", 6)
    with pytest.raises(Ascending):
        nonascending_normal_form(fixtures.load("F3G"))


def test_enumerate_normal_forms_examples():
    d1 = fixtures.load("D1")
    assert list(enumerate_normal_forms(d1).values()) == [d1]
    d2 = fixtures.load("D2")
    assert canonical_code(nonascending_normal_form(d2)) in enumerate_normal_forms(d2)
    with pytest.raises(NonIntegralModulus):
        enumerate_normal_forms(bs(2, 3))


def test_isomorphic_examples():
    assert isomorphic(fixtures.load("F3G"), fixtures.load("F3Gp")).kind == "NOT_ISOMORPHIC"
    assert isomorphic(fixtures.load("klein_loop"), fixtures.load("klein_segment")).kind == "ISOMORPHIC"
    verdict = isomorphic(fixtures.load("F1L"), fixtures.load("F1R"))
    assert verdict.kind == "UNSUPPORTED" and verdict.exit_code == 2
    assert is_mobile(fixtures.load("F1L"), "e").mobile and is_mobile(fixtures.load("F1R"), "e").mobile


def test_isomorphic_routing():
    assert isomorphic(bs(1, 5), bs(1, 5)).kind == "ISOMORPHIC"
    assert isomorphic(bs(1, 5), bs(1, 7)).kind == "NOT_ISOMORPHIC"
    assert isomorphic(bs(2, 3), fixtures.load("D1")).kind == "NOT_ISOMORPHIC"
    assert isomorphic(bs(2, 4), bs(2, 6)).kind == "NOT_ISOMORPHIC"
    assert isomorphic(bs(2, 4), bs(4, 2)).kind == "ISOMORPHIC"
    assert isomorphic(bs(2, 4), bs(2, -4)).kind == "NOT_ISOMORPHIC"
    assert isomorphic(bs(1, 1), bs(1, -1)).kind == "NOT_ISOMORPHIC"
    assert isomorphic(segment(2, 3), bs(2, 3)).kind == "NOT_ISOMORPHIC"


CORPUS = ("F3G", "F3Gp", "D1", "D2", "klein_loop", "klein_segment")


def test_isomorphic_is_reflexive_and_symmetric():
    graphs = {name: fixtures.load(name) for name in CORPUS}
    graphs["BS(2,4)"] = bs(2, 4)
    for a, g in graphs.items():
        assert isomorphic(g, g).kind == "ISOMORPHIC", a
        assert isomorphic(g, negate_vertex(g, g.vertices[0])).kind == "ISOMORPHIC", a
        for b, h in graphs.items():
            assert isomorphic(g, h).kind == isomorphic(h, g).kind, (a, b)


def test_isomorphic_after_random_moves():
    rng = random.Random(21)
    start = [fixtures.load("F3G"), fixtures.load("F3Gp"), fixtures.load("D2"), fixtures.load("D1"), bs(2, 12)]
    for trial in range(40):
        g = start[trial % len(start)]
        h, moves = random_sequence(g, rng, rng.randint(1, 5))
        assert isomorphic(g, h).kind == "ISOMORPHIC", moves
        assert isomorphic(h, g).kind == "ISOMORPHIC", moves
