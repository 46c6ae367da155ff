"""Slide spaces of single edges and the mobile / non-mobile split.

All searches here run on the unsigned graph: divisibility does not see signs.
Internally an edge ``i`` has two ends, ``2*i`` (its origin) and ``2*i + 1``
(its terminus); ``j ^ 1`` is the opposite end.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import (
    Elementary,
    EnumerationLimit,
    HasMobileEdge,
    NotReduced,
    PreferredEdgesRequireBettiOne,
)
from .graph import (
    CanonicalCode,
    DirectedEdge,
    Edge,
    LabeledGraph,
    _component,
    absolute,
    betti_number,
    canonical_code,
    classify_elementary,
    format_path,
    is_bs1n,
    is_reduced,
    reverse_path,
    tighten,
)
from .modular import modulus_generator
from .moves import is_valid_slide_path, path_modulus

DEFAULT_LIMIT = 200_000


class _Frame:
    """Array view of the unsigned graph."""

    __slots__ = ("graph", "verts", "ids", "org", "lab", "out")

    def __init__(self, g: LabeledGraph):
        self.graph = g
        self.verts = g.vertices
        index = {v: i for i, v in enumerate(g.vertices)}
        self.ids = g.edge_ids
        org: list[int] = []
        lab: list[int] = []
        for e in g.edges:
            org += (index[e.origin], index[e.terminus])
            lab += (abs(e.label_from), abs(e.label_to))
        self.org = org
        self.lab = lab
        out: list[list[int]] = [[] for _ in g.vertices]
        for j, v in enumerate(org):
            out[v].append(j)
        self.out = out

    def directed(self, j: int) -> DirectedEdge:
        return DirectedEdge(self.ids[j >> 1], bool(j & 1))


State = tuple  # (pos_e, lab_e, pos_ebar, lab_ebar)


def _explore(fr: _Frame, i: int, limit: int, stop_on_hit: bool = True):
    """BFS over slides of both ends of edge ``i``.

    Returns ``(parent, order, hit)`` where ``hit`` is None when the space is
    finite, else a pair ``(smaller, larger)`` of comparable states.  With
    ``stop_on_hit`` off the search keeps going and quietly stops after
    ``limit`` states.
    """
    org, lab, out = fr.org, fr.lab, fr.out
    start = (org[2 * i], lab[2 * i], org[2 * i + 1], lab[2 * i + 1])
    parent: dict[State, tuple | None] = {start: None}
    order = [start]
    buckets: dict[tuple[int, int], list[State]] = {(start[0], start[2]): [start]}
    queue = deque([start])
    while queue:
        st = queue.popleft()
        for k in (0, 1):
            pos, cur = st[2 * k], st[2 * k + 1]
            for j in out[pos]:
                if j >> 1 == i:
                    continue
                step = lab[j]
                if cur % step:
                    continue
                nl = cur // step * lab[j ^ 1]
                np = org[j ^ 1]
                new = (np, nl, st[2], st[3]) if k == 0 else (st[0], st[1], np, nl)
                if new in parent:
                    continue
                if new[0] != new[2] and (new[1] == 1 or new[3] == 1):
                    continue
                parent[new] = (st, k, j)
                if stop_on_hit:
                    bucket = buckets.setdefault((new[0], new[2]), [])
                    for other in bucket:
                        if new[1] % other[1] == 0 and new[3] % other[3] == 0:
                            return parent, order, (other, new)
                        if other[1] % new[1] == 0 and other[3] % new[3] == 0:
                            return parent, order, (new, other)
                    bucket.append(new)
                order.append(new)
                if len(order) >= limit:
                    if not stop_on_hit:
                        return parent, order, None
                    raise EnumerationLimit(f"slide space of {fr.ids[i]!r} exceeds {limit} states")
                queue.append(new)
    return parent, order, None


def _steps(parent: dict, st: State) -> list[tuple[int, int]]:
    steps = []
    while parent[st] is not None:
        st, k, j = parent[st]
        steps.append((k, j))
    steps.reverse()
    return steps


def _end_path(fr: _Frame, steps, k: int) -> tuple[DirectedEdge, ...]:
    return tuple(fr.directed(j) for kk, j in steps if kk == k)


# -- results --------------------------------------------------------------------


@dataclass(frozen=True)
class SlideState:
    """Positions and unsigned labels of both ends of one edge."""

    edge: str
    positions: tuple[str, str]
    labels: tuple[int, int]
    host: LabeledGraph = field(repr=False, compare=False)

    def graph(self) -> LabeledGraph:
        """The host graph (made positive) with the edge moved into this state."""
        e = self.host.edge(self.edge)
        moved = Edge(e.id, self.positions[0], self.positions[1], *self.labels)
        return self.host.replace({e.id: moved})


@dataclass(frozen=True)
class Finite:
    states: tuple[SlideState, ...]


@dataclass(frozen=True)
class Infinite:
    """``edge`` can slide around ``path`` forever; each lap multiplies its label by ``modulus``."""

    edge: DirectedEdge
    path: tuple[DirectedEdge, ...]
    modulus: Fraction


@dataclass(frozen=True)
class MonotoneCycle:
    """Cycle ``path`` whose last edge is the mobile edge; ``~last`` slides along the rest."""

    path: tuple[DirectedEdge, ...]
    modulus: Fraction


@dataclass(frozen=True)
class Verdict:
    """Mobility of one geometric edge with whatever certificates were found."""

    edge: str
    monotone: MonotoneCycle | None = None
    infinite: Infinite | None = None

    @property
    def mobile(self) -> bool:
        return self.monotone is not None or self.infinite is not None

    @property
    def witness(self) -> MonotoneCycle | Infinite | None:
        return self.monotone or self.infinite

    def describe(self) -> str:
        if not self.mobile:
            return f"{self.edge}: non-mobile"
        parts = []
        if self.monotone is not None:
            w = self.monotone
            parts.append(f"monotone cycle {format_path(w.path)} modulus {w.modulus}")
        if self.infinite is not None:
            w = self.infinite
            parts.append(f"infinite slide space ({w.edge} around {format_path(w.path)}, modulus {w.modulus})")
        return f"{self.edge}: mobile, " + "; ".join(parts)


def _require_reduced(g: LabeledGraph) -> None:
    if not is_reduced(g):
        raise NotReduced("graph has a non-loop edge with a unit label")


def _edge_index(g: LabeledGraph, edge_id: str) -> int:
    try:
        return g.edge_ids.index(edge_id)
    except ValueError:
        raise KeyError(f"unknown edge {edge_id!r}") from None


def _infinite_witness(fr: _Frame, i: int, parent, hit) -> Infinite:
    small, big = hit
    k = 0 if small[1] != big[1] else 1
    path = tighten(_end_path(fr, _steps(parent, big), k) + reverse_path(_end_path(fr, _steps(parent, small), k)))
    return Infinite(DirectedEdge(fr.ids[i], bool(k)), path, path_modulus(fr.graph, path))


def slide_space(g: LabeledGraph, edge_id: str, limit: int = DEFAULT_LIMIT) -> Finite | Infinite:
    _require_reduced(g)
    fr = _Frame(g)
    i = _edge_index(g, edge_id)
    parent, order, hit = _explore(fr, i, limit)
    if hit is not None:
        return _infinite_witness(fr, i, parent, hit)
    host = absolute(g)
    return Finite(
        tuple(
            SlideState(edge_id, (fr.verts[a], fr.verts[c]), (la, lc), host)
            for a, la, c, lc in order
        )
    )


# extra states searched for a monotone cycle once a slide space is known to be infinite
WITNESS_BUDGET = 500


def _monotone_in(fr: _Frame, i: int, parent, order) -> MonotoneCycle | None:
    eid = fr.ids[i]
    for st in order:
        p0, l0, p1, l1 = st
        if p0 != p1 or l0 == l1:
            continue
        if l1 % l0 == 0:
            final, walker = DirectedEdge(eid, False), 1
        elif l0 % l1 == 0:
            final, walker = DirectedEdge(eid, True), 0
        else:
            continue
        steps = _steps(parent, st)
        # the walking end goes out along its own steps and back along the other end's
        path = tighten(_end_path(fr, steps, walker) + reverse_path(_end_path(fr, steps, 1 - walker)))
        cycle = path + (final,)
        return MonotoneCycle(cycle, path_modulus(fr.graph, cycle))
    return None


def _verdict(fr: _Frame, i: int, limit: int, witnesses: bool = True) -> Verdict:
    eid = fr.ids[i]
    parent, order, hit = _explore(fr, i, limit)
    if hit is None:
        return Verdict(eid, _monotone_in(fr, i, parent, order))
    infinite = _infinite_witness(fr, i, parent, hit)
    if not witnesses:
        return Verdict(eid, None, infinite)
    parent, order, _ = _explore(fr, i, WITNESS_BUDGET, stop_on_hit=False)
    return Verdict(eid, _monotone_in(fr, i, parent, order), infinite)


def is_mobile(g: LabeledGraph, edge_id: str, limit: int = DEFAULT_LIMIT, witnesses: bool = True) -> Verdict:
    """Decide mobility of one geometric edge.

    With ``witnesses`` off, an infinite slide space is reported without the
    extra search for a monotone cycle; the verdict itself is the same.
    """
    _require_reduced(g)
    return _verdict(_Frame(g), _edge_index(g, edge_id), limit, witnesses)


def mobility_report(
    g: LabeledGraph, limit: int = DEFAULT_LIMIT, witnesses: bool = True
) -> dict[str, Verdict]:
    """Verdict for every geometric edge, keyed by edge id."""
    _require_reduced(g)
    fr = _Frame(g)
    return {eid: _verdict(fr, i, limit, witnesses) for i, eid in enumerate(fr.ids)}


def mobile_edges(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> frozenset[str]:
    report = mobility_report(g, limit, witnesses=False)
    return frozenset(eid for eid, v in report.items() if v.mobile)


# -- non-mobile decomposition ------------------------------------------------


def is_strict_ascending_loop(e: Edge) -> bool:
    return e.is_loop and (abs(e.label_from) == 1) != (abs(e.label_to) == 1)


@dataclass(frozen=True)
class Component:
    vertices: frozenset[str]
    edges: frozenset[str]

    @property
    def simply_connected(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1


@dataclass(frozen=True)
class NonMobileDecomposition:
    mobile: frozenset[str]
    removed_vertices: frozenset[str]
    components: tuple[Component, ...]
    preferred: dict[int, DirectedEdge] | None
    s_mobile: frozenset[str]

    @property
    def s(self) -> int:
        return len(self.s_mobile)

    @property
    def simply_connected(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.components) if c.simply_connected)


def subgraph(g: LabeledGraph, comp: Component) -> LabeledGraph:
    return LabeledGraph(comp.vertices, (g.edge(eid) for eid in comp.edges))


def non_mobile_decomposition(
    g: LabeledGraph, preferred: bool = True, limit: int = DEFAULT_LIMIT
) -> NonMobileDecomposition:
    """Split ``g`` into mobile edges and the components of the non-mobile subgraph.

    With ``preferred`` set (Betti number 1 only) each simply connected
    component gets the mobile edge that starts in it.
    """
    _require_reduced(g)
    mobile = mobile_edges(g, limit)
    removed = frozenset(v for e in g.edges if is_strict_ascending_loop(e) for v in (e.origin,))
    s_mobile = frozenset(eid for eid in mobile if not g.edge(eid).is_loop or not _has_unit(g.edge(eid)))
    keep_v = [v for v in g.vertices if v not in removed]
    keep_e = [
        e for e in g.edges
        if e.id not in mobile and e.origin not in removed and e.terminus not in removed
    ]
    parent = {v: v for v in keep_v}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in keep_e:
        a, b = find(e.origin), find(e.terminus)
        if a != b:
            parent[a] = b
    groups: dict[str, tuple[set, set]] = {}
    for v in keep_v:
        groups.setdefault(find(v), (set(), set()))[0].add(v)
    for e in keep_e:
        groups[find(e.origin)][1].add(e.id)
    comps = sorted(
        (Component(frozenset(vs), frozenset(es)) for vs, es in groups.values()),
        key=lambda c: min(c.vertices),
    )
    pref = None
    if preferred:
        if betti_number(g) != 1:
            raise PreferredEdgesRequireBettiOne(f"Betti number is {betti_number(g)}")
        pref = _preferred_edges(g, mobile, comps)
    return NonMobileDecomposition(mobile, removed, tuple(comps), pref, s_mobile)


def _has_unit(e: Edge) -> bool:
    return abs(e.label_from) == 1 or abs(e.label_to) == 1


def preferred_orientation(g: LabeledGraph, edge_id: str, cycle: tuple[DirectedEdge, ...]) -> DirectedEdge:
    """Orient an edge along the cycle, or else pointing towards it."""
    for d in cycle:
        if d.id == edge_id:
            return d
    on_cycle = {g.origin(d) for d in cycle}
    fwd = DirectedEdge(edge_id)
    side = _component(g, g.origin(fwd), frozenset({edge_id}))
    return fwd if not (side & on_cycle) else fwd.bar


def _preferred_edges(g: LabeledGraph, mobile, comps) -> dict[int, DirectedEdge]:
    cycle = modulus_generator(g).cycle
    oriented = [preferred_orientation(g, eid, cycle) for eid in sorted(mobile)]
    out: dict[int, DirectedEdge] = {}
    for idx, comp in enumerate(comps):
        if not comp.simply_connected:
            continue
        starts = [d for d in oriented if g.origin(d) in comp.vertices]
        if len(starts) != 1:
            raise AssertionError(f"component {sorted(comp.vertices)} has {len(starts)} preferred edges")
        out[idx] = starts[0]
    return out


# -- finite deformation spaces ------------------------------------------------------


def has_finite_lg(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> bool:
    _require_reduced(g)
    if classify_elementary(g).elementary:
        raise Elementary("elementary groups are excluded")
    if is_bs1n(g):
        return True
    return not mobile_edges(g, limit)


def single_slides(
    g: LabeledGraph, edge_id: str | None = None, avoid: frozenset[str] = frozenset()
) -> Iterator[LabeledGraph]:
    """Every reduced graph one single-edge slide away from ``g``.

    With ``edge_id`` only that edge's ends move; no end slides across an
    edge listed in ``avoid``.
    """
    for d in g.directed_edges():
        if edge_id is not None and d.id != edge_id:
            continue
        here, lab = g.origin(d), g.label(d)
        for p in g.outgoing(here):
            if p.id == d.id or p.id in avoid or lab % g.label(p):
                continue
            new_label = lab // g.label(p) * g.label(p.bar)
            there = g.terminus(p)
            other = g.terminus(d)
            if there != other and abs(new_label) == 1:
                continue
            if there != other and abs(g.label(d.bar)) == 1:
                continue
            yield g.with_end(d, there, new_label)


def edge_slide_closure(g: LabeledGraph, edge_id: str, limit: int = DEFAULT_LIMIT) -> list[LabeledGraph]:
    """All reduced graphs reachable by sliding the two ends of one edge."""
    seen = {g}
    order = [g]
    queue = deque([g])
    while queue:
        cur = queue.popleft()
        for nxt in single_slides(cur, edge_id):
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                if len(order) > limit:
                    raise EnumerationLimit(f"slide space of {edge_id!r} exceeds {limit} graphs")
                queue.append(nxt)
    return order


def _check_enumerable(g: LabeledGraph, limit: int) -> None:
    _require_reduced(g)
    if classify_elementary(g).elementary:
        raise Elementary("elementary groups are excluded")
    mob = mobile_edges(g, limit)
    if mob and not is_bs1n(g):
        raise HasMobileEdge(f"mobile edges: {', '.join(sorted(mob))}")


def enumerate_lg_no_mobile(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> dict[CanonicalCode, LabeledGraph]:
    """Every reduced labeled graph of the group, keyed by canonical code.

    Edges are slid one after another: each stays within its own finite
    slide space while the others are stationary.
    """
    _check_enumerable(g, limit)
    layer = [g]
    for eid in g.edge_ids:
        seen: set[LabeledGraph] = set()
        nxt: list[LabeledGraph] = []
        for cur in layer:
            for h in edge_slide_closure(cur, eid, limit):
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        if len(nxt) > limit:
            raise EnumerationLimit(f"more than {limit} labeled graphs")
        layer = nxt
    found: dict[CanonicalCode, LabeledGraph] = {}
    for h in layer:
        found.setdefault(canonical_code(h), h)
    return dict(sorted(found.items()))


def slide_closure(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> dict[CanonicalCode, LabeledGraph]:
    """Closure of ``g`` under single slides of any edge, deduplicated by canonical code."""
    found = {canonical_code(g): g}
    queue = deque([g])
    while queue:
        cur = queue.popleft()
        for h in single_slides(cur):
            code = canonical_code(h)
            if code not in found:
                found[code] = h
                if len(found) > limit:
                    raise EnumerationLimit(f"more than {limit} labeled graphs")
                queue.append(h)
    return dict(sorted(found.items()))


def iso_no_mobile(g: LabeledGraph, h: LabeledGraph, limit: int = DEFAULT_LIMIT) -> bool:
    """Decide isomorphism when ``g`` has no mobile edges."""
    _require_reduced(h)
    return canonical_code(h) in enumerate_lg_no_mobile(g, limit)


# -- embedded cycles ----------------------------------------------------------------


def embedded_cycles(g: LabeledGraph) -> list[tuple[DirectedEdge, ...]]:
    """Every embedded cycle, once per starting edge and direction."""
    found: list[tuple[DirectedEdge, ...]] = []

    def walk(start: str, path: list[DirectedEdge], visited: set[str]) -> None:
        here = g.terminus(path[-1])
        if here == start:
            found.append(tuple(path))
            return
        used = {d.id for d in path}
        for d in g.outgoing(here):
            if d.id in used:
                continue
            nxt = g.terminus(d)
            if nxt != start and nxt in visited:
                continue
            path.append(d)
            visited.add(nxt)
            walk(start, path, visited)
            visited.discard(nxt)
            path.pop()

    for first in g.directed_edges():
        start = g.origin(first)
        walk(start, [first], {start, g.terminus(first)})
    return found


def is_monotone_cycle(g: LabeledGraph, cycle: tuple[DirectedEdge, ...], strict: bool = True) -> bool:
    """``cycle = (e0, ..., en, e)``: ``~e`` slides along ``(e0..en)`` and the modulus is integral."""
    if not cycle:
        return False
    *path, last = cycle
    if g.terminus(cycle[-1]) != g.origin(cycle[0]):
        return False
    if path and not is_valid_slide_path(g, last.bar, tuple(path)):
        return False
    q = path_modulus(g, cycle)
    return q.denominator == 1 and (not strict or abs(q) != 1)


def embedded_monotone_cycles(g: LabeledGraph) -> list[tuple[DirectedEdge, ...]]:
    return [c for c in embedded_cycles(g) if is_monotone_cycle(g, c)]
