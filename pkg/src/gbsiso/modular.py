"""The modular homomorphism of a labeled graph with first Betti number 0 or 1."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BettiTooLarge, BettiZero
from .graph import DirectedEdge, LabeledGraph, betti_number, orientation, reverse_path
from .moves import path_modulus


@dataclass(frozen=True)
class ModulusGenerator:
    """Generator ``q`` of the modulus image, chosen with ``|q| >= 1``.

    ``q`` is None when the graph is a tree.  ``cycle`` is the embedded cycle,
    oriented so that its modulus is ``q``.
    """

    q: Fraction | None
    orientation: int
    cycle: tuple[DirectedEdge, ...]

    @property
    def trivial(self) -> bool:
        return self.q is None or self.q == 1


def embedded_cycle(g: LabeledGraph) -> tuple[DirectedEdge, ...]:
    """The unique embedded cycle of a graph with Betti number 1."""
    if betti_number(g) != 1:
        raise BettiTooLarge(f"Betti number {betti_number(g)} is not 1")
    alive = set(g.vertices)
    edges = {e.id for e in g.edges}
    degree = {v: g.degree(v) for v in g.vertices}
    leaves = [v for v in g.vertices if degree[v] == 1]
    while leaves:
        v = leaves.pop()
        alive.discard(v)
        for d in g.outgoing(v):
            if d.id in edges:
                edges.discard(d.id)
                w = g.terminus(d)
                degree[w] -= 1
                if degree[w] == 1:
                    leaves.append(w)
    first = min(edges)
    cycle = [DirectedEdge(first)]
    start = g.origin(cycle[0])
    while g.terminus(cycle[-1]) != start:
        here, prev = g.terminus(cycle[-1]), cycle[-1].id
        step = next(d for d in g.outgoing(here) if d.id in edges and d.id != prev)
        cycle.append(step)
    return tuple(cycle)


def modulus_generator(g: LabeledGraph) -> ModulusGenerator:
    b = betti_number(g)
    if b == 0:
        return ModulusGenerator(None, 1, ())
    if b > 1:
        raise BettiTooLarge(f"Betti number {b}: the modulus image may need several generators")
    cycle = embedded_cycle(g)
    q = path_modulus(g, cycle)
    if abs(q) < 1:
        cycle, q = reverse_path(cycle), 1 / q
    return ModulusGenerator(q, orientation(g, cycle), cycle)


def is_unimodular(g: LabeledGraph) -> bool:
    gen = modulus_generator(g)
    return gen.q is None or abs(gen.q) == 1


def has_integral_modulus(g: LabeledGraph) -> bool:
    gen = modulus_generator(g)
    if gen.q is None:
        raise BettiZero("a tree has no modulus generator")
    return gen.q.denominator == 1
