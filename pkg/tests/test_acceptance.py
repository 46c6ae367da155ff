"""The ten acceptance criteria, one test each.

A summary line per criterion is printed at the end of the pytest run.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from gbsiso import fixtures
from gbsiso.betti1 import (
    XiClass,
    ascending_profile,
    enumerate_normal_forms,
    isomorphic,
    nonascending_normal_form,
    plgi_fingerprint,
    xi_equal,
    xi_invariant,
)
from gbsiso.graph import (
    DirectedEdge,
    Edge,
    ElementaryClass,
    LabeledGraph,
    betti_number,
    bs,
    canonical_code,
    classify_elementary,
    format_path,
)
from gbsiso.mobility import (
    Infinite,
    embedded_monotone_cycles,
    enumerate_lg_no_mobile,
    has_finite_lg,
    is_mobile,
    mobile_edges,
    mobility_report,
    non_mobile_decomposition,
    single_slides,
)
from gbsiso.modular import modulus_generator
from gbsiso.moves import a_inverse_move, a_move, is_valid_slide_path, path_modulus, slide
from mobility_oracle import oracle_batch, shape_origins
from random_moves import random_sequence
from slide_relations import applicable_instances, check, random_graph
from small_graphs import SHAPES, class_representatives, vertex_count

E, E1, E2, E3 = (DirectedEdge(x) for x in ("e", "e1", "e2", "e3"))


def graph(vertices, edges) -> LabeledGraph:
    return LabeledGraph(vertices, [Edge(*e) for e in edges])


@pytest.mark.acceptance(1, "slide arithmetic on F1L")
def test_slide_arithmetic(detail):
    g = fixtures.load("F1L")
    h = slide(g, E.bar, (E1, E2, E3))
    assert (h.label(E), h.label(E.bar)) == (6, 132)
    assert path_modulus(g, (E1, E2, E3)) == Fraction(11, 5)
    assert path_modulus(g, (E1, E2, E3, E)) == 22
    detail("lambda(e)=6, lambda(~e)=132, q=11/5, monotone modulus 22")


@pytest.mark.acceptance(2, "mobility verdicts on F1L and F1R")
def test_mobility_of_f1_pair(detail):
    left, right = fixtures.load("F1L"), fixtures.load("F1R")
    v = is_mobile(left, "e")
    assert v.mobile and v.monotone is not None
    assert v.monotone.modulus == 22 and v.monotone.path[-1] == E
    w = is_mobile(right, "e")
    assert w.mobile and isinstance(w.infinite, Infinite)
    for eid in ("e1", "e2"):
        assert not is_mobile(right, eid).mobile
        for d in (DirectedEdge(eid), DirectedEdge(eid, True)):
            assert not any(is_valid_slide_path(right, d, (p,)) for p in right.outgoing(right.origin(d)) if p.id != eid)
    assert embedded_monotone_cycles(right) == []
    detail(f"F1L e: monotone {format_path(v.monotone.path)} modulus 22; F1R e: infinite, e1 e2 fixed")


@pytest.mark.acceptance(3, "F3G and F3G' are distinguished")
def test_f3_pair_is_distinguished(detail):
    g, h = fixtures.load("F3G"), fixtures.load("F3Gp")
    assert isomorphic(g, h).kind == "NOT_ISOMORPHIC"
    unit = XiClass(2, (Fraction(1), Fraction(1)))
    assert xi_equal(xi_invariant(g), unit) and xi_equal(xi_invariant(h), unit)
    labels = [sorted(sorted(s) for s in plgi_fingerprint(x).labels) for x in (g, h)]
    assert labels == [[[2], [2]], [[2], [4]]]
    detail("xi = (1,1) mod 2 for both; pointed labels {2,2} vs {2,4}")


@pytest.mark.acceptance(4, "Klein bottle presentations agree")
def test_klein_bottle(detail):
    loop, segment = fixtures.load("klein_loop"), fixtures.load("klein_segment")
    assert classify_elementary(loop) is ElementaryClass.KLEIN_BOTTLE
    assert classify_elementary(segment) is ElementaryClass.KLEIN_BOTTLE
    verdict = isomorphic(loop, segment)
    assert verdict.kind == "ISOMORPHIC"
    detail(verdict.reason)


@pytest.mark.acceptance(5, "finiteness of the labeled graph space")
def test_finiteness(detail):
    d1 = fixtures.load("D1")
    assert has_finite_lg(d1)
    assert len(enumerate_lg_no_mobile(d1)) == 1
    assert not has_finite_lg(fixtures.load("F3G"))
    assert has_finite_lg(bs(1, 5))
    detail("D1 finite (1 graph), F3G infinite, BS(1,5) finite")


@pytest.mark.acceptance(6, "A-move and its inverse")
def test_a_move(detail):
    g = bs(2, 4)
    h = a_move(g, DirectedEdge("t"))
    expected = graph(["v", "v_t"], [("t", "v_t", "v_t", 1, 2), ("t_a", "v_t", "v", 2, 2)])
    assert h == expected
    assert isomorphic(g, h).kind == "ISOMORPHIC"
    assert a_inverse_move(h, DirectedEdge("t"), "t_a") == g
    detail("loop(2,4) -> loop(1,2) + edge(2,2), round trip exact")


@pytest.mark.acceptance(7, "non-ascending normal forms of D2")
def test_nonascending_pipeline(detail):
    d2 = fixtures.load("D2")
    nf = nonascending_normal_form(d2)
    f = nf.edge("f")
    assert (f.terminus, f.label_to) == ("v2", 6)
    forms = enumerate_normal_forms(d2)
    assert canonical_code(nf) in forms
    rng = random.Random(2024)
    lengths = []
    for _ in range(20):
        h = d2
        for _ in range(rng.randint(1, 6)):
            h = rng.choice(list(single_slides(h)))
        lengths.append(canonical_code(h) != canonical_code(d2))
        assert isomorphic(d2, h).kind == "ISOMORPHIC"
    detail(f"{len(forms)} normal form(s); 20/20 perturbations isomorphic, {sum(lengths)} distinct from D2")


@pytest.mark.acceptance(8, "slide relations with a non-mobile edge")
def test_slide_relations(detail):
    rng = random.Random(8)
    graphs, per_relation, failures = 0, Counter(), []
    while graphs < 200:
        g = random_graph(rng)
        instances = applicable_instances(g)
        if not instances:
            continue
        graphs += 1
        for inst in instances:
            per_relation[inst.relation] += 1
            if not check(g, inst):
                failures.append((g, inst))
    assert sorted(per_relation) == list(range(1, 10))
    assert not failures, failures[:3]
    total = sum(per_relation.values())
    detail(f"{graphs} graphs, {total} instances, per relation {dict(sorted(per_relation.items()))}")


def _shape_graph(edges, row) -> LabeledGraph:
    vertices = [f"v{i}" for i in range(vertex_count(edges))]
    return LabeledGraph(
        vertices,
        [Edge(f"e{i}", vertices[u], vertices[v], row[2 * i], row[2 * i + 1]) for i, (u, v) in enumerate(edges)],
    )


@pytest.mark.acceptance(9, "mobility agrees with the brute-force oracle")
def test_mobility_oracle(detail):
    depth, labels = 8, range(2, 13)
    rng = random.Random(9)
    checked, disagreements, signed = 0, [], 0
    for name, edges in SHAPES.items():
        if not edges:
            continue
        rows = class_representatives(edges, labels)
        expected = oracle_batch(shape_origins(edges), rows, depth)
        for row, want in zip(rows.tolist(), expected):
            g = _shape_graph(edges, row)
            report = mobility_report(g, witnesses=False)
            got = [report[f"e{i}"].mobile for i in range(len(edges))]
            if got != want.tolist():
                disagreements.append((name, row, got))
            checked += 1
        # labels with signs: the verdict must match the oracle on absolute values
        for k in rng.sample(range(len(rows)), min(500, len(rows))):
            row = [x * rng.choice((1, -1)) for x in rows[k].tolist()]
            report = mobility_report(_shape_graph(edges, row), witnesses=False)
            if [report[f"e{i}"].mobile for i in range(len(edges))] != expected[k].tolist():
                disagreements.append((name, row, "signed"))
            signed += 1
    assert not disagreements, disagreements[:5]
    detail(f"{checked} classes plus {signed} signed variants, 100% agreement")


def _ascending_fixtures() -> dict[str, LabeledGraph]:
    return {
        "F3G": fixtures.load("F3G"),
        "F3Gp": fixtures.load("F3Gp"),
        "loop_pendant": graph(["c", "x"], [("l", "c", "c", 2, 12), ("p", "x", "c", 3, 4)]),
        "digon_pendant": graph(
            ["v0", "v1", "w"], [("a", "v0", "v1", 2, 4), ("b", "v1", "v0", 2, 2), ("f", "w", "v0", 3, 2)]
        ),
    }


def _same_xi(a, b) -> bool:
    if a.q != b.q or a.s != b.s:
        return False
    keys = [e.key for e in a.entries]
    left = XiClass(a.q, a.xi)
    for perm in itertools.permutations(range(b.s)):
        if [b.entries[i].key for i in perm] == keys and xi_equal(left, XiClass(b.q, tuple(b.xi[i] for i in perm))):
            return True
    return False


def _invariants(g: LabeledGraph):
    return (
        betti_number(g),
        modulus_generator(g).q,
        non_mobile_decomposition(g).s,
        ascending_profile(g),
        plgi_fingerprint(g),
    )


@pytest.mark.acceptance(10, "invariants survive random moves")
def test_invariance(detail):
    rng = random.Random(10)
    start = _ascending_fixtures()
    names = list(start)
    base = {name: _invariants(g) for name, g in start.items()}
    kinds: Counter = Counter()
    for trial in range(100):
        name = names[trial % len(names)]
        h, moves = random_sequence(start[name], rng, rng.randint(1, 6))
        kinds.update(type(m).__name__ for m in moves)
        b, q, s, profile, fp = base[name]
        got = _invariants(h)
        assert got[:3] == (b, q, s), (name, moves)
        assert _same_xi(profile, got[3]), (name, moves)
        assert got[4] == fp, (name, moves)
    assert all(kinds[k] for k in ("Slide", "Induction", "AMove", "AInverse")), kinds
    for trial in range(100):
        name = names[trial % len(names)]
        g = start[name]
        h, _moves = random_sequence(g, rng, rng.randint(1, 6), slides_only=True)
        assert mobile_edges(h) == mobile_edges(g)
    detail(f"moves used {dict(sorted(kinds.items()))}; 100 slide-only sequences keep mobility")


def test_oracle_is_not_trivial():
    rows = np.array([[2, 4], [2, 2], [3, 2]], dtype=np.int64)
    assert oracle_batch(shape_origins([(0, 0)]), rows, 8)[:, 0].tolist() == [True, False, False]
