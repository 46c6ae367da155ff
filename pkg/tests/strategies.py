"""Hypothesis strategies for small labeled graphs."""

from __future__ import annotations

from hypothesis import strategies as st

from gbsiso.graph import Edge, LabeledGraph


@st.composite
def graphs(draw, max_vertices: int = 4, max_edges: int = 5, max_label: int = 24, signed: bool = False, min_label: int = 2):
    n = draw(st.integers(1, max_vertices))
    vertices = [f"v{i}" for i in range(n)]
    pairs = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    extra = draw(st.integers(0 if n > 1 else 1, max(max_edges - len(pairs), 1)))
    for _ in range(extra):
        pairs.append((draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))))
    magnitude = st.integers(min_label, max_label)
    label = st.tuples(magnitude, st.sampled_from((1, -1) if signed else (1,))).map(lambda t: t[0] * t[1])
    edges = [
        Edge(f"e{i}", vertices[u], vertices[v], draw(label), draw(label)) if draw(st.booleans())
        else Edge(f"e{i}", vertices[v], vertices[u], draw(label), draw(label))
        for i, (u, v) in enumerate(pairs)
    ]
    return LabeledGraph(vertices, edges)


def betti_one_graphs(**kwargs):
    return graphs(**kwargs).filter(lambda g: len(g.edges) == len(g.vertices))
