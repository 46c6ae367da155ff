"""Moves between labeled graphs presenting the same group.

Paths are tuples of :class:`~gbsiso.graph.DirectedEdge`.  Every move returns a
new graph and keeps the ids of the edges it does not delete.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    BadConfiguration,
    InvalidInduction,
    InvalidSlide,
    NotAPath,
    NotVirtualAscending,
)
from .graph import (
    DirectedEdge,
    Edge,
    LabeledGraph,
    fresh_id,
    negate_vertex,
    reverse_path,
    tighten,
)

__all__ = [
    "AInverse",
    "AMove",
    "Collapse",
    "Expand",
    "Induction",
    "Slide",
    "a_inverse_move",
    "a_move",
    "check_path",
    "collapse",
    "expand",
    "induction_move",
    "is_valid_slide_path",
    "path_modulus",
    "reduce",
    "reverse_path",
    "slide",
    "tighten",
]


def check_path(g: LabeledGraph, path: Sequence[DirectedEdge]) -> None:
    for d in path:
        if not g.has_edge(d.id):
            raise NotAPath(f"unknown edge {d.id!r}")
    for a, b in zip(path, path[1:]):
        if g.terminus(a) != g.origin(b):
            raise NotAPath(f"{a} ends at {g.terminus(a)!r} but {b} starts at {g.origin(b)!r}")


def path_modulus(g: LabeledGraph, path: Sequence[DirectedEdge]) -> Fraction:
    """Product of ``label(~d) / label(d)`` over the path."""
    path = tuple(path)
    check_path(g, path)
    q = Fraction(1)
    for d in path:
        q *= Fraction(g.label(d.bar), g.label(d))
    return q


def _slide_problem(g: LabeledGraph, e: DirectedEdge, path: Sequence[DirectedEdge]):
    """Return ``(problem, new_label)``; ``problem`` is None for a valid slide."""
    if not g.has_edge(e.id):
        return f"unknown edge {e.id!r}", None
    try:
        check_path(g, path)
    except NotAPath as exc:
        return str(exc), None
    lab = g.label(e)
    if not path:
        return None, lab
    if any(d.id == e.id for d in path):
        return f"path uses {e.id} itself", None
    if g.origin(path[0]) != g.origin(e):
        return f"path starts at {g.origin(path[0])!r}, not at the origin of {e}", None
    for d in path:
        step = g.label(d)
        if lab % step:
            return f"label {lab} of {e} is not divisible by label({d}) = {step}", None
        lab = lab // step * g.label(d.bar)
    return None, lab


def is_valid_slide_path(g: LabeledGraph, e: DirectedEdge, path: Sequence[DirectedEdge]) -> bool:
    return _slide_problem(g, e, tuple(path))[0] is None


def slide(g: LabeledGraph, e: DirectedEdge, path: Sequence[DirectedEdge]) -> LabeledGraph:
    """Slide the origin of ``e`` along ``path``."""
    path = tuple(path)
    problem, lab = _slide_problem(g, e, path)
    if problem is not None:
        raise InvalidSlide(problem)
    if not path:
        return g
    return g.with_end(e, g.terminus(path[-1]), lab)


def collapse(g: LabeledGraph, d: DirectedEdge) -> LabeledGraph:
    """Contract ``d``, a non-loop edge with ``label(d) = +-1``, into its terminus."""
    x, y = g.origin(d), g.terminus(d)
    if x == y:
        raise BadConfiguration(f"{d} is a loop")
    if abs(g.label(d)) != 1:
        raise BadConfiguration(f"label({d}) = {g.label(d)} is not a unit")
    if g.label(d) == -1:
        g = negate_vertex(g, x)
    n = g.label(d.bar)
    changed: dict[str, Edge | None] = {d.id: None}
    for e in g.edges:
        if e.id == d.id or (e.origin != x and e.terminus != x):
            continue
        a, b, o, t = e.label_from, e.label_to, e.origin, e.terminus
        if o == x:
            o, a = y, a * n
        if t == x:
            t, b = y, b * n
        changed[e.id] = Edge(e.id, o, t, a, b)
    return g.replace(changed, remove_vertices=[x])


def _collapsible(g: LabeledGraph) -> DirectedEdge | None:
    for e in g.edges:
        if e.is_loop:
            continue
        if abs(e.label_from) == 1:
            return DirectedEdge(e.id, False)
        if abs(e.label_to) == 1:
            return DirectedEdge(e.id, True)
    return None


def reduce(g: LabeledGraph) -> LabeledGraph:
    """Collapse unit-labelled non-loop edges, smallest id first, until none remain."""
    while (d := _collapsible(g)) is not None:
        g = collapse(g, d)
    return g


def expand(
    g: LabeledGraph,
    vertex: str,
    ends: Iterable[DirectedEdge],
    factor: int,
    new_vertex: str | None = None,
    new_edge: str | None = None,
) -> LabeledGraph:
    """Inverse of :func:`collapse`.

    Splits ``vertex``: the listed ends (origins at ``vertex``) move to a new
    vertex with their labels divided by ``factor``, joined to ``vertex`` by a
    new edge labelled ``1`` at the new vertex and ``factor`` at ``vertex``.
    """
    ends = tuple(ends)
    x = new_vertex or fresh_id(g.vertices, f"{vertex}_x")
    eid = new_edge or fresh_id(g.edge_ids, "x")
    if x in g.vertices or g.has_edge(eid):
        raise BadConfiguration("expansion needs fresh vertex and edge ids")
    current = {e.id: e for e in g.edges}
    for d in ends:
        if g.origin(d) != vertex:
            raise BadConfiguration(f"{d} does not start at {vertex!r}")
        if g.label(d) % factor:
            raise BadConfiguration(f"label({d}) is not divisible by {factor}")
        e = current[d.id]
        if d.reverse:
            current[d.id] = e._replace(terminus=x, label_to=e.label_to // factor)
        else:
            current[d.id] = e._replace(origin=x, label_from=e.label_from // factor)
    current[eid] = Edge(eid, x, vertex, 1, factor)
    return LabeledGraph([*g.vertices, x], current.values())


def _require_loop(g: LabeledGraph, d: DirectedEdge, err):
    if not g.has_edge(d.id):
        raise err(f"unknown edge {d.id!r}")
    if g.origin(d) != g.terminus(d):
        raise err(f"{d} is not a loop")


def induction_move(g: LabeledGraph, loop: DirectedEdge, factor: int, up: bool = True) -> LabeledGraph:
    """Scale every other end at the vertex of a unit-labelled loop.

    ``loop`` must satisfy ``|label(loop)| = 1`` and ``factor`` must be a
    positive divisor of ``label(~loop)``.  Going up multiplies the other ends
    by ``factor``; going down divides them and requires divisibility.
    """
    _require_loop(g, loop, InvalidInduction)
    if abs(g.label(loop)) != 1:
        raise InvalidInduction(f"label({loop}) = {g.label(loop)} is not a unit")
    if factor <= 0 or g.label(loop.bar) % factor:
        raise InvalidInduction(f"{factor} is not a positive divisor of {g.label(loop.bar)}")
    v = g.origin(loop)
    changed = {}
    for d in g.outgoing(v):
        if d.id == loop.id:
            continue
        lab = g.label(d)
        if up:
            lab *= factor
        elif lab % factor:
            raise InvalidInduction(f"label({d}) = {lab} is not divisible by {factor}")
        else:
            lab //= factor
        e = changed.get(d.id, g.edge(d.id))
        changed[d.id] = e._replace(label_to=lab) if d.reverse else e._replace(label_from=lab)
    return g.replace(changed)


def a_move(
    g: LabeledGraph,
    loop: DirectedEdge,
    new_vertex: str | None = None,
    new_edge: str | None = None,
) -> LabeledGraph:
    """Split a loop with labels ``(k, k*l)`` into a pendant edge and a loop ``(1, l)``.

    The loop keeps its id and moves to the new vertex; the new edge carries
    ``l`` at the new vertex and ``k`` at the old one.
    """
    _require_loop(g, loop, NotVirtualAscending)
    k, big = g.label(loop), g.label(loop.bar)
    if abs(k) == 1:
        raise NotVirtualAscending(f"label({loop}) is a unit")
    if big % k or abs(big) == abs(k):
        raise NotVirtualAscending(f"loop labels ({k}, {big}) are not strictly ascending")
    ratio = big // k
    v = g.origin(loop)
    w = new_vertex or fresh_id(g.vertices, f"{v}_{loop.id}")
    f = new_edge or fresh_id(g.edge_ids, f"{loop.id}_a")
    if w in g.vertices or g.has_edge(f):
        raise BadConfiguration("A-move needs fresh vertex and edge ids")
    moved = Edge(loop.id, w, w, ratio, 1) if loop.reverse else Edge(loop.id, w, w, 1, ratio)
    return g.replace({loop.id: moved, f: Edge(f, w, v, ratio, k)}, add_vertices=[w])


def a_inverse_move(g: LabeledGraph, loop: DirectedEdge, pendant: str) -> LabeledGraph:
    """Undo :func:`a_move`: fold a unit loop and its pendant edge into one loop."""
    _require_loop(g, loop, BadConfiguration)
    w = g.origin(loop)
    if abs(g.label(loop)) != 1:
        raise BadConfiguration(f"label({loop}) is not a unit")
    if not g.has_edge(pendant):
        raise BadConfiguration(f"unknown edge {pendant!r}")
    others = {d.id for d in g.outgoing(w)} - {loop.id}
    if others != {pendant}:
        raise BadConfiguration(f"{w!r} must carry only the loop and {pendant!r}")
    f = DirectedEdge(pendant, g.edge(pendant).origin != w)
    v = g.terminus(f)
    if v == w:
        raise BadConfiguration(f"{pendant!r} is a loop")
    if g.label(loop) == -1:
        g = negate_vertex(g, w)
    ell, k, big = g.label(f), g.label(f.bar), g.label(loop.bar)
    if abs(ell) == 1 or abs(k) == 1:
        raise BadConfiguration("pendant edge has a unit label")
    if big % ell:
        raise BadConfiguration(f"{ell} does not divide label(~{loop.id}) = {big}")
    new = Edge(loop.id, v, v, big * k, k) if loop.reverse else Edge(loop.id, v, v, k, big * k)
    return g.replace({loop.id: new, pendant: None}, remove_vertices=[w])


# -- move records -------------------------------------------------------------


@dataclass(frozen=True)
class Slide:
    edge: DirectedEdge
    path: tuple[DirectedEdge, ...]

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        return slide(g, self.edge, self.path)

    def inverse(self, g: LabeledGraph) -> Slide:
        return Slide(self.edge, reverse_path(self.path))


@dataclass(frozen=True)
class Collapse:
    edge: DirectedEdge

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        return collapse(g, self.edge)

    def inverse(self, g: LabeledGraph) -> Expand:
        d = self.edge
        x, y = g.origin(d), g.terminus(d)
        ends = tuple(o for o in g.outgoing(x) if o.id != d.id)
        # collapsed ends keep their DirectedEdge identity; restored up to a sign change at x
        return Expand(y, ends, g.label(d.bar), x, d.id, d.reverse)


@dataclass(frozen=True)
class Expand:
    vertex: str
    ends: tuple[DirectedEdge, ...]
    factor: int
    new_vertex: str
    new_edge: str
    flip: bool = False

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        h = expand(g, self.vertex, self.ends, self.factor, self.new_vertex, self.new_edge)
        if self.flip:
            e = h.edge(self.new_edge)
            h = h.replace({e.id: Edge(e.id, e.terminus, e.origin, e.label_to, e.label_from)})
        return h

    def inverse(self, g: LabeledGraph) -> Collapse:
        return Collapse(DirectedEdge(self.new_edge, self.flip))


@dataclass(frozen=True)
class Induction:
    loop: DirectedEdge
    factor: int
    up: bool = True

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        return induction_move(g, self.loop, self.factor, self.up)

    def inverse(self, g: LabeledGraph) -> Induction:
        return Induction(self.loop, self.factor, not self.up)


@dataclass(frozen=True)
class AMove:
    loop: DirectedEdge
    new_vertex: str
    new_edge: str

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        return a_move(g, self.loop, self.new_vertex, self.new_edge)

    def inverse(self, g: LabeledGraph) -> AInverse:
        return AInverse(self.loop, self.new_edge)


@dataclass(frozen=True)
class AInverse:
    loop: DirectedEdge
    pendant: str

    def apply(self, g: LabeledGraph) -> LabeledGraph:
        return a_inverse_move(g, self.loop, self.pendant)

    def inverse(self, g: LabeledGraph) -> AMove:
        return AMove(self.loop, g.origin(self.loop), self.pendant)
