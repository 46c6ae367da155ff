"""Exhaustive catalogue of small positive labeled graphs, one per isomorphism class."""

from __future__ import annotations

import itertools

import numpy as np

# underlying multigraphs with at most three edges (edge = (u, v) on vertices 0..n-1)
SHAPES: dict[str, list[tuple[int, int]]] = {
    "point": [],
    "seg": [(0, 1)],
    "loop": [(0, 0)],
    "path3": [(0, 1), (1, 2)],
    "digon": [(0, 1), (0, 1)],
    "loop_pendant": [(0, 0), (0, 1)],
    "two_loops": [(0, 0), (0, 0)],
    "path4": [(0, 1), (1, 2), (2, 3)],
    "star": [(0, 1), (0, 2), (0, 3)],
    "triangle": [(0, 1), (1, 2), (2, 0)],
    "digon_pendant": [(0, 1), (0, 1), (1, 2)],
    "path3_loop_end": [(0, 1), (1, 2), (0, 0)],
    "path3_loop_mid": [(0, 1), (1, 2), (1, 1)],
    "triple": [(0, 1), (0, 1), (0, 1)],
    "digon_loop": [(0, 1), (0, 1), (0, 0)],
    "seg_two_loops": [(0, 1), (0, 0), (0, 0)],
    "seg_loop_each": [(0, 1), (0, 0), (1, 1)],
    "three_loops": [(0, 0), (0, 0), (0, 0)],
}


def vertex_count(edges: list[tuple[int, int]]) -> int:
    return max((max(e) for e in edges), default=0) + 1


def end_automorphisms(edges: list[tuple[int, int]]) -> set[tuple[int, ...]]:
    """Permutations of edge ends induced by automorphisms of the multigraph.

    End ``2*i`` is the origin of edge ``i``, ``2*i + 1`` its terminus.
    """
    n, m = vertex_count(edges), len(edges)
    found = set()
    for vp in itertools.permutations(range(n)):
        for ep in itertools.permutations(range(m)):
            for flips in itertools.product((0, 1), repeat=m):
                perm = [0] * (2 * m)
                ok = True
                for i, (u, v) in enumerate(edges):
                    a, b = edges[ep[i]]
                    if flips[i]:
                        a, b = b, a
                    if (vp[u], vp[v]) != (a, b):
                        ok = False
                        break
                    perm[2 * i] = 2 * ep[i] + flips[i]
                    perm[2 * i + 1] = 2 * ep[i] + 1 - flips[i]
                if ok:
                    found.add(tuple(perm))
    return found


def class_representatives(edges: list[tuple[int, int]], labels: range) -> np.ndarray:
    """Label vectors (one row per class) that are minimal in their automorphism orbit."""
    k = 2 * len(edges)
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    values = np.array(list(labels), dtype=np.int64)
    base = len(values)
    digits = np.array(list(itertools.product(range(base), repeat=k)), dtype=np.int64)
    weights = base ** np.arange(k - 1, -1, -1, dtype=np.int64)
    codes = digits @ weights
    best = codes.copy()
    for perm in end_automorphisms(edges):
        moved = np.empty_like(digits)
        for src, dst in enumerate(perm):
            moved[:, dst] = digits[:, src]
        np.minimum(best, moved @ weights, out=best)
    return values[digits[best == codes]]
