"""Labeled graphs: the presentation of a GBS group.

A labeled graph is a finite connected graph in which every directed edge
``e`` carries a nonzero integer ``label(e)``, read as the index of the edge
group in the vertex group at ``origin(e)``.  Geometric edges are stored once
as :class:`Edge` records; the two orientations are addressed by
:class:`DirectedEdge` values (``~e`` is the reverse of ``e``).

Labels are plain Python ints, so magnitudes are unbounded.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import deque
from dataclasses import dataclass
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import BadInvolution, Disconnected, ValidationError, ZeroLabel


class Edge(NamedTuple):
    """A geometric edge ``origin -> terminus`` with the label at each end."""

    id: str
    origin: str
    terminus: str
    label_from: int
    label_to: int

    @property
    def is_loop(self) -> bool:
        return self.origin == self.terminus


class DirectedEdge(NamedTuple):
    """One orientation of a geometric edge; ``reverse`` selects ``~id``."""

    id: str
    reverse: bool = False

    @property
    def bar(self) -> DirectedEdge:
        return DirectedEdge(self.id, not self.reverse)

    def __str__(self) -> str:
        return ("~" if self.reverse else "") + self.id

    @classmethod
    def parse(cls, text: str) -> DirectedEdge:
        text = text.strip()
        if text.startswith("~"):
            return cls(text[1:], True)
        return cls(text, False)


EdgePath = tuple  # tuple[DirectedEdge, ...]


def format_path(path: Iterable[DirectedEdge]) -> str:
    return "(" + ", ".join(str(d) for d in path) + ")"


def reverse_path(path: Iterable[DirectedEdge]) -> tuple[DirectedEdge, ...]:
    return tuple(d.bar for d in reversed(tuple(path)))


def tighten(path: Iterable[DirectedEdge]) -> tuple[DirectedEdge, ...]:
    """Cancel adjacent ``d, ~d`` pairs until none remain."""
    out: list[DirectedEdge] = []
    for d in path:
        if out and out[-1] == d.bar:
            out.pop()
        else:
            out.append(d)
    return tuple(out)


class LabeledGraph:
    """Immutable labeled graph.

    The constructor trusts its input; use :func:`validate` for untrusted data.
    """

    __slots__ = ("_vertices", "_edges", "_index", "_outgoing", "_hash")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]):
        self._vertices = tuple(sorted(vertices))
        self._edges = tuple(sorted((Edge(*e) for e in edges), key=lambda e: e.id))
        self._index = {e.id: e for e in self._edges}
        self._outgoing: dict[str, tuple[DirectedEdge, ...]] | None = None
        self._hash: int | None = None

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self._edges)

    def edge(self, edge_id: str) -> Edge:
        return self._index[edge_id]

    def has_edge(self, edge_id: str) -> bool:
        return edge_id in self._index

    def origin(self, d: DirectedEdge) -> str:
        e = self._index[d.id]
        return e.terminus if d.reverse else e.origin

    def terminus(self, d: DirectedEdge) -> str:
        e = self._index[d.id]
        return e.origin if d.reverse else e.terminus

    def label(self, d: DirectedEdge) -> int:
        e = self._index[d.id]
        return e.label_to if d.reverse else e.label_from

    def directed_edges(self) -> Iterator[DirectedEdge]:
        for e in self._edges:
            yield DirectedEdge(e.id, False)
            yield DirectedEdge(e.id, True)

    def outgoing(self, v: str) -> tuple[DirectedEdge, ...]:
        """Directed edges with origin ``v``; a loop at ``v`` contributes both."""
        if self._outgoing is None:
            table: dict[str, list[DirectedEdge]] = {u: [] for u in self._vertices}
            for d in self.directed_edges():
                table[self.origin(d)].append(d)
            self._outgoing = {u: tuple(ds) for u, ds in table.items()}
        return self._outgoing[v]

    def degree(self, v: str) -> int:
        return len(self.outgoing(v))

    def with_end(self, d: DirectedEdge, vertex: str, label: int) -> LabeledGraph:
        """Move the origin of ``d`` to ``vertex`` and give it ``label``."""
        e = self._index[d.id]
        if d.reverse:
            new = Edge(e.id, e.origin, vertex, e.label_from, label)
        else:
            new = Edge(e.id, vertex, e.terminus, label, e.label_to)
        return self.replace({e.id: new})

    def replace(
        self,
        edges: Mapping[str, Edge | None] = {},
        add_vertices: Iterable[str] = (),
        remove_vertices: Iterable[str] = (),
    ) -> LabeledGraph:
        """Return a copy with edges replaced (``None`` deletes) and vertices changed."""
        table = dict(self._index)
        for key, value in edges.items():
            if value is None:
                table.pop(key, None)
            else:
                table[key] = value
        drop = set(remove_vertices)
        verts = [v for v in self._vertices if v not in drop]
        verts.extend(add_vertices)
        return LabeledGraph(verts, table.values())

    def _key(self):
        return (self._vertices, self._edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        parts = [
            f"{e.id}:{e.origin}({e.label_from})-{e.terminus}({e.label_to})"
            for e in self._edges
        ]
        return f"LabeledGraph([{', '.join(self._vertices)}]; {'; '.join(parts)})"


def validate(vertices: Iterable[str], edges: Iterable[object]) -> LabeledGraph:
    """Check raw vertex/edge data and build a :class:`LabeledGraph`.

    ``edges`` holds ``Edge`` records or 5-tuples
    ``(id, origin, terminus, label_from, label_to)``.
    """
    verts = list(vertices)
    if not verts:
        raise Disconnected("a labeled graph needs at least one vertex")
    if len(set(verts)) != len(verts):
        dup = next(v for v in verts if verts.count(v) > 1)
        raise ValidationError(f"duplicate vertex id {dup!r}", dup)
    known = set(verts)
    records: list[Edge] = []
    seen: set[str] = set()
    for raw in edges:
        try:
            e = Edge(*raw)
        except TypeError as exc:
            raise ValidationError(f"malformed edge record {raw!r}", raw) from exc
        if e.id in seen:
            raise BadInvolution(f"edge id {e.id!r} used twice", e.id)
        seen.add(e.id)
        for end in (e.origin, e.terminus):
            if end not in known:
                raise BadInvolution(f"edge {e.id!r} ends at unknown vertex {end!r}", e.id)
        for lab in (e.label_from, e.label_to):
            if isinstance(lab, bool) or not isinstance(lab, int):
                raise ValidationError(f"edge {e.id!r} has non-integer label {lab!r}", e.id)
            if lab == 0:
                raise ZeroLabel(f"edge {e.id!r} has a zero label", e.id)
        records.append(e)
    g = LabeledGraph(verts, records)
    reached = _component(g, g.vertices[0])
    if len(reached) != len(g.vertices):
        missing = sorted(set(g.vertices) - reached)[0]
        raise Disconnected(f"vertex {missing!r} is not connected to {g.vertices[0]!r}", missing)
    return g


def _component(g: LabeledGraph, start: str, skip: frozenset[str] = frozenset()) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for d in g.outgoing(v):
            if d.id in skip:
                continue
            w = g.terminus(d)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def betti_number(g: LabeledGraph) -> int:
    return len(g.edges) - len(g.vertices) + 1


def is_reduced(g: LabeledGraph) -> bool:
    return not any(
        not e.is_loop and (abs(e.label_from) == 1 or abs(e.label_to) == 1) for e in g.edges
    )


def bs(p: int, q: int, vertex: str = "v", edge: str = "t") -> LabeledGraph:
    """The one-loop labeled graph of the Baumslag-Solitar group BS(p, q)."""
    return validate([vertex], [(edge, vertex, vertex, p, q)])


# -- admissible sign changes ------------------------------------------------


def negate_vertex(g: LabeledGraph, v: str) -> LabeledGraph:
    """Replace the generator of the vertex group at ``v`` by its inverse."""
    changed = {}
    for e in g.edges:
        a = -e.label_from if e.origin == v else e.label_from
        b = -e.label_to if e.terminus == v else e.label_to
        if (a, b) != (e.label_from, e.label_to):
            changed[e.id] = e._replace(label_from=a, label_to=b)
    return g.replace(changed)


def negate_edge(g: LabeledGraph, edge_id: str) -> LabeledGraph:
    """Replace the generator of an edge group by its inverse."""
    e = g.edge(edge_id)
    return g.replace({edge_id: e._replace(label_from=-e.label_from, label_to=-e.label_to)})


def absolute(g: LabeledGraph) -> LabeledGraph:
    """The positive labeled graph with labels ``|label|``."""
    return LabeledGraph(
        g.vertices,
        (e._replace(label_from=abs(e.label_from), label_to=abs(e.label_to)) for e in g.edges),
    )


def edge_sign(e: Edge) -> int:
    """Orientation value contributed by one geometric edge to any cycle through it."""
    return 1 if (e.label_from > 0) == (e.label_to > 0) else -1


def orientation(g: LabeledGraph, cycle: Iterable[DirectedEdge]) -> int:
    return prod(edge_sign(g.edge(d.id)) for d in cycle)


def normalize_signs(g: LabeledGraph, root: str | None = None) -> LabeledGraph:
    """Make every label positive except on edges outside a BFS spanning tree.

    A non-tree edge whose cycle has orientation -1 keeps exactly one negative
    label, placed on its ``label_to`` end.
    """
    root = g.vertices[0] if root is None else root
    tree: set[str] = set()
    parent_edge: dict[str, DirectedEdge] = {}
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in sorted(g.outgoing(v)):
            w = g.terminus(d)
            if w not in seen:
                seen.add(w)
                tree.add(d.id)
                parent_edge[w] = d
                order.append(w)
                queue.append(w)
    h = g
    for w in order[1:]:
        d = parent_edge[w]
        if h.label(d) < 0:
            h = negate_edge(h, d.id)
        if h.label(d.bar) < 0:
            h = negate_vertex(h, w)
    for e in h.edges:
        if e.id in tree:
            continue
        if e.label_from < 0:
            h = negate_edge(h, e.id)
    return h


# -- canonical codes ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Complete invariant of a labeled graph up to isomorphism and sign changes."""

    code: bytes

    def hex(self, length: int = 12) -> str:
        import hashlib

        return hashlib.sha256(self.code).hexdigest()[:length]

    def __str__(self) -> str:
        return self.code.decode()


def _refined_cells(n: int, recs: list[tuple], colors: list) -> list[list[int]]:
    """Colour refinement; returns vertex cells in canonical order."""
    rank = _ranks(colors)
    while True:
        sig = [[rank[v]] for v in range(n)]
        nbrs: list[list[tuple]] = [[] for _ in range(n)]
        for u, v, a, b, _s in recs:
            loop = u == v
            nbrs[u].append((a, b, rank[v], loop))
            nbrs[v].append((b, a, rank[u], loop))
        keyed = [(sig[v][0], tuple(sorted(nbrs[v]))) for v in range(n)]
        new = _ranks(keyed)
        if len(set(new)) == len(set(rank)):
            break
        rank = new
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(rank[v], []).append(v)
    return [cells[k] for k in sorted(cells)]


def _ranks(values: list) -> list[int]:
    order = {val: i for i, val in enumerate(sorted(set(values)))}
    return [order[val] for val in values]


def _code_for_order(pos: list[int], recs: list[tuple]):
    """Best (code rows, chosen tree) for a fixed vertex order."""
    rows = []
    for u, v, a, b, s in recs:
        pu, pv = pos[u], pos[v]
        if pu > pv or (pu == pv and a > b):
            pu, pv, a, b = pv, pu, b, a
        rows.append(((pu, pv, a, b), s))
    rows.sort(key=lambda r: r[0])
    n = len(pos)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    groups: list[tuple[tuple, list[int]]] = []
    for i, (key, _s) in enumerate(rows):
        if groups and groups[-1][0] == key:
            groups[-1][1].append(i)
        else:
            groups.append((key, [i]))
    tree_groups: list[list[int]] = []
    for key, members in groups:
        pu, pv = key[0], key[1]
        if pu == pv:
            continue
        ru, rv = find(pu), find(pv)
        if ru != rv:
            parent[ru] = rv
            # one representative per sign class; same-sign members are interchangeable
            reps = {}
            for i in members:
                reps.setdefault(rows[i][1], i)
            tree_groups.append(sorted(reps.values()))
    best = None
    for choice in itertools.product(*tree_groups):
        chosen = set(choice)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i in choice:
            (pu, pv, _a, _b), s = rows[i]
            adj[pu].append((pv, s))
            adj[pv].append((pu, s))
        pot = [0] * n
        pot[0] = 1
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y, s in adj[x]:
                if not pot[y]:
                    pot[y] = pot[x] * s
                    queue.append(y)
        out = tuple(
            sorted(
                (key, 1 if i in chosen else s * pot[key[0]] * pot[key[1]])
                for i, (key, s) in enumerate(rows)
            )
        )
        if best is None or out < best[0]:
            best = (out, choice)
    return best


def _canonical_search(g: LabeledGraph, colors: Mapping[str, object] | None = None):
    verts = g.vertices
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    recs = [
        (idx[e.origin], idx[e.terminus], abs(e.label_from), abs(e.label_to), edge_sign(e))
        for e in g.edges
    ]
    raw_colors = [_color_key(colors.get(v) if colors else None) for v in verts]
    cells = _refined_cells(n, recs, raw_colors)
    if prod(factorial(len(c)) for c in cells) > 2_000_000:
        raise ValidationError("graph too symmetric for exhaustive canonical labeling")
    best = None
    for perms in itertools.product(*(itertools.permutations(c) for c in cells)):
        pos = [0] * n
        order = [v for block in perms for v in block]
        for p, v in enumerate(order):
            pos[v] = p
        rows, _choice = _code_for_order(pos, recs)
        cols = tuple(raw_colors[v] for v in order)
        candidate = (n, rows, cols)
        if best is None or candidate < best:
            best = candidate
    return best


def _color_key(c: object):
    if c is None:
        return ()
    if isinstance(c, (tuple, list)):
        return tuple(c)
    return (c,)


def canonical_code(g: LabeledGraph, colors: Mapping[str, object] | None = None) -> CanonicalCode:
    """Code equal for two graphs iff they differ by an isomorphism and sign changes.

    ``colors`` optionally marks vertices (ints or tuples of ints); marked
    vertices must map to equally marked vertices.
    """
    n, rows, cols = _canonical_search(g, colors)
    payload = [n, [[*key, r] for key, r in rows]]
    if any(cols):
        payload.append([list(c) for c in cols])
    return CanonicalCode(json.dumps(payload, separators=(",", ":")).encode())


def canonical_form(g: LabeledGraph) -> LabeledGraph:
    """The representative graph behind :func:`canonical_code`, with ids ``v0.., e0..``."""
    n, rows, _cols = _canonical_search(g)
    width = len(str(max(len(rows) - 1, 0)))
    edges = []
    for i, ((pu, pv, a, b), r) in enumerate(rows):
        edges.append(Edge(f"e{i:0{width}d}", f"v{pu}", f"v{pv}", a, b if r > 0 else -b))
    vw = len(str(n - 1))
    vertices = [f"v{i}" for i in range(n)]
    if vw > 1:
        rename = {f"v{i}": f"v{i:0{vw}d}" for i in range(n)}
        vertices = [rename[v] for v in vertices]
        edges = [e._replace(origin=rename[e.origin], terminus=rename[e.terminus]) for e in edges]
    return LabeledGraph(vertices, edges)


# -- elementary groups ----------------------------------------------------------


class ElementaryClass(enum.Enum):
    NON_ELEMENTARY = "NonElementary"
    INFINITE_CYCLIC = "InfiniteCyclic"
    FREE_ABELIAN_RANK2 = "FreeAbelianRank2"
    KLEIN_BOTTLE = "KleinBottle"

    @property
    def elementary(self) -> bool:
        return self is not ElementaryClass.NON_ELEMENTARY


def classify_elementary(g: LabeledGraph) -> ElementaryClass:
    from .moves import reduce

    r = reduce(g)
    nv, ne = len(r.vertices), len(r.edges)
    if nv == 1 and ne == 0:
        return ElementaryClass.INFINITE_CYCLIC
    if ne == 1:
        e = r.edges[0]
        a, b = e.label_from, e.label_to
        if e.is_loop and abs(a) == 1 and abs(b) == 1:
            return ElementaryClass.FREE_ABELIAN_RANK2 if a * b > 0 else ElementaryClass.KLEIN_BOTTLE
        if not e.is_loop and abs(a) == 2 and abs(b) == 2:
            return ElementaryClass.KLEIN_BOTTLE
    return ElementaryClass.NON_ELEMENTARY


def is_bs1n(g: LabeledGraph) -> bool:
    """Single vertex carrying a single loop with a label of absolute value 1."""
    if len(g.vertices) != 1 or len(g.edges) != 1:
        return False
    e = g.edges[0]
    return abs(e.label_from) == 1 or abs(e.label_to) == 1


def fresh_id(taken: Iterable[str], base: str) -> str:
    taken = set(taken)
    if base not in taken:
        return base
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in taken:
            return cand
    raise AssertionError("unreachable")
