"""Graphs with one independent cycle: normal forms, invariants and the isomorphism test."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import (
    Ascending,
    BettiNotOne,
    Elementary,
    EnumerationLimit,
    MismatchedArity,
    MismatchedQ,
    NonIntegralModulus,
    NotAscending,
    NotReduced,
    UnitLabel,
)
from .graph import (
    CanonicalCode,
    DirectedEdge,
    Edge,
    ElementaryClass,
    LabeledGraph,
    _component,
    absolute,
    betti_number,
    canonical_code,
    classify_elementary,
    fresh_id,
    is_bs1n,
    is_reduced,
    negate_edge,
    normalize_signs,
    reverse_path,
)
from .mobility import (
    DEFAULT_LIMIT,
    edge_slide_closure,
    enumerate_lg_no_mobile,
    iso_no_mobile,
    mobile_edges,
    non_mobile_decomposition,
    single_slides,
    subgraph,
)
from .modular import embedded_cycle, modulus_generator
from .moves import a_move, is_valid_slide_path, path_modulus, reduce, slide


def _require_b1(g: LabeledGraph) -> None:
    if not is_reduced(g):
        raise NotReduced("graph has a non-loop edge with a unit label")
    if betti_number(g) != 1:
        raise BettiNotOne(f"Betti number is {betti_number(g)}")


# -- ascending detection ----------------------------------------------------------


def ascending_witness(g: LabeledGraph) -> tuple[DirectedEdge, ...] | None:
    """An embedded strict monotone cycle ``(e0, ..., en, e)``, or None."""
    _require_b1(g)
    base = embedded_cycle(g)
    for cycle in (base, reverse_path(base)):
        q = path_modulus(g, cycle)
        if q.denominator != 1 or abs(q) == 1:
            continue
        k = len(cycle)
        for j in range(k):
            final = cycle[j]
            path = tuple(cycle[(j + 1 + t) % k] for t in range(k - 1))
            if not path or is_valid_slide_path(g, final.bar, path):
                return path + (final,)
    return None


def is_ascending_b1(g: LabeledGraph) -> bool:
    return ascending_witness(g) is not None


# -- ascending normal form -----------------------------------------------------------


def _tree_path(g: LabeledGraph, start: str, goal: str, skip: set[str]) -> tuple[DirectedEdge, ...]:
    """Path from ``start`` to ``goal`` avoiding the edge ids in ``skip`` (BFS)."""
    back: dict[str, DirectedEdge | None] = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v == goal:
            break
        for d in sorted(g.outgoing(v)):
            if d.id in skip:
                continue
            w = g.terminus(d)
            if w not in back:
                back[w] = d
                queue.append(w)
    path = []
    v = goal
    while back[v] is not None:
        d = back[v]
        path.append(d)
        v = g.origin(d)
    return tuple(reversed(path))


def _toward(g: LabeledGraph, edge_id: str, targets: set[str]) -> DirectedEdge:
    """Orient a bridge so that its terminus lies on the side containing ``targets``."""
    fwd = DirectedEdge(edge_id)
    side = _component(g, g.origin(fwd), frozenset({edge_id}))
    return fwd.bar if side & targets else fwd


@dataclass(frozen=True)
class AscendingNormalForm:
    graph: LabeledGraph
    loop: DirectedEdge
    mobile: frozenset[str]

    @property
    def vertex(self) -> str:
        return self.graph.origin(self.loop)


def _ascending_nf(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> AscendingNormalForm:
    _require_b1(g)
    witness = ascending_witness(g)
    if witness is None:
        raise NotAscending("no embedded strict monotone cycle")
    *path, loop = witness
    h = slide(g, loop.bar, tuple(path)) if path else g
    if abs(h.label(loop)) != 1:
        h = a_move(h, loop)
    mobile = mobile_edges(h, limit)
    v0 = h.origin(loop)
    for eid in sorted(mobile - {loop.id}):
        e = h.edge(eid)
        if v0 in (e.origin, e.terminus):
            continue
        d = _toward(h, eid, {v0})
        route = _tree_path(h, h.terminus(d), v0, {loop.id, eid})
        h = slide(h, d.bar, route)
    h = normalize_signs(h, v0)
    if h.label(loop) < 0:
        h = negate_edge(h, loop.id)
    return AscendingNormalForm(h, loop, mobile)


def ascending_normal_form(g: LabeledGraph) -> LabeledGraph:
    """Strict ascending loop ``(1, q)`` with every mobile edge attached to its vertex.

    Edge ids of ``g`` are kept (a created edge gets a fresh id); compare
    results with :func:`~gbsiso.graph.canonical_code`.
    """
    return _ascending_nf(g).graph


# -- xi invariant --------------------------------------------------------------------


def _strip(n: int, q: int) -> int:
    """Remove from ``n`` every prime factor it shares with ``q``."""
    g = gcd(n, q)
    while g > 1:
        while n % g == 0:
            n //= g
        g = gcd(n, q)
    return n


def _power_of(r: Fraction, q: int) -> bool:
    if r.numerator != 1 and r.denominator != 1:
        return False
    n = r.numerator * r.denominator
    while n % q == 0:
        n //= q
    return n == 1


@dataclass(frozen=True, eq=False)
class XiClass:
    """Tuple of positive rationals modulo powers of ``q`` per entry and ``F(q)`` diagonally.

    ``==`` is equality of classes.
    """

    q: int
    entries: tuple[Fraction, ...]

    @property
    def s(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XiClass):
            return NotImplemented
        if self.q != other.q or self.s != other.s:
            return False
        return xi_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return f"({', '.join(str(x) for x in self.entries)}) mod q={self.q}"


def xi_equal(a: XiClass, b: XiClass) -> bool:
    if a.q != b.q:
        raise MismatchedQ(f"q = {a.q} vs {b.q}")
    if a.s != b.s:
        raise MismatchedArity(f"{a.s} entries vs {b.s}")
    if not a.entries:
        return True
    q = a.q
    ratios = [Fraction(y) / Fraction(x) for x, y in zip(a.entries, b.entries)]
    first = ratios[0]
    if not all(_power_of(r / first, q) for r in ratios[1:]):
        return False
    return _strip(first.numerator, q) == 1 and _strip(first.denominator, q) == 1


# -- pointed labeled graphs -----------------------------------------------------------


@dataclass(frozen=True)
class PointedLabeledGraph:
    graph: LabeledGraph
    basepoint: str
    label: int


def _pointed_members(p: PointedLabeledGraph, limit: int = DEFAULT_LIMIT):
    g = p.graph
    if not is_reduced(g):
        raise NotReduced("graph has a non-loop edge with a unit label")
    if abs(p.label) == 1:
        raise UnitLabel("the distinguished label must not be a unit")
    if betti_number(g) == 1:
        gen = modulus_generator(g)
        if gen.q.denominator == 1 and abs(gen.q) != 1:
            raise NonIntegralModulus(f"graph has the nontrivial integral modulus {gen.q}")
    z = fresh_id(g.vertices, "z")
    mark = fresh_id(g.edge_ids, "d")
    d = DirectedEdge(mark)
    start = g.replace({mark: Edge(mark, p.basepoint, z, abs(p.label), 2)}, add_vertices=[z])

    def read(h: LabeledGraph):
        base, lab = h.origin(d), abs(h.label(d))
        core = h.replace({mark: None}, remove_vertices=[z])
        return canonical_code(core, {base: (lab,)}), (core, base, lab)

    code, info = read(start)
    found = {code: info}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in single_slides(cur, avoid=frozenset({mark})):
            code, info = read(nxt)
            if code not in found:
                found[code] = info
                if len(found) > limit:
                    raise EnumerationLimit(f"pointed space exceeds {limit} classes")
                queue.append(nxt)
    return dict(sorted(found.items()))


def pointed_space(p: PointedLabeledGraph, limit: int = DEFAULT_LIMIT) -> frozenset[CanonicalCode]:
    """Codes of every pointed graph reachable without sliding across the attachment."""
    return frozenset(_pointed_members(p, limit))


def subgroup_class(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> CanonicalCode:
    """Isomorphism-class key of a group given by a tree or unimodular graph."""
    r = reduce(g)
    cls = classify_elementary(r)
    if cls is not ElementaryClass.NON_ELEMENTARY:
        return CanonicalCode(f"elementary:{cls.value}".encode())
    return min(enumerate_lg_no_mobile(r, limit))


def nonmobile_subgroup_iso(gi: LabeledGraph, gj: LabeledGraph) -> bool:
    return subgroup_class(gi) == subgroup_class(gj)


@dataclass(frozen=True)
class PlgiEntry:
    subgroup: CanonicalCode
    space: frozenset[CanonicalCode]
    labels: frozenset[int] = field(compare=False)

    @property
    def key(self):
        return (self.subgroup, tuple(sorted(self.space)))


@dataclass(frozen=True)
class PlgiFingerprint:
    """Sorted multiset of (subgroup class, pointed space) pairs."""

    entries: tuple[PlgiEntry, ...]

    @property
    def labels(self) -> tuple[frozenset[int], ...]:
        return tuple(e.labels for e in self.entries)


@dataclass(frozen=True)
class _Attachment:
    entry: PlgiEntry
    edge: DirectedEdge  # preferred mobile edge, origin in the component


def _attachments(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> list[_Attachment]:
    dec = non_mobile_decomposition(g, preferred=True, limit=limit)
    out = []
    for idx in dec.simply_connected:
        comp = dec.components[idx]
        e = dec.preferred[idx]
        gi = subgraph(g, comp)
        members = _pointed_members(PointedLabeledGraph(gi, g.origin(e), g.label(e)), limit)
        entry = PlgiEntry(
            subgroup_class(gi, limit),
            frozenset(members),
            frozenset(lab for _core, _base, lab in members.values()),
        )
        out.append(_Attachment(entry, e))
    return out


def plgi_fingerprint(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> PlgiFingerprint:
    _require_b1(g)
    entries = sorted((a.entry for a in _attachments(g, limit)), key=lambda e: e.key)
    return PlgiFingerprint(tuple(entries))


@dataclass(frozen=True)
class AscendingProfile:
    """Everything the ascending isomorphism test compares, with entries aligned."""

    q: int
    entries: tuple[PlgiEntry, ...]
    xi: tuple[Fraction, ...]

    @property
    def s(self) -> int:
        return len(self.entries)


def ascending_profile(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> AscendingProfile:
    nf = _ascending_nf(g, limit)
    h = nf.graph
    q = abs(h.label(nf.loop.bar))
    atts = _attachments(h, limit)
    xi = []
    for att in atts:
        if h.terminus(att.edge) != nf.vertex:
            raise AssertionError(f"{att.edge} is not attached to the ascending loop")
        xi.append(Fraction(abs(h.label(att.edge.bar))))
    order = sorted(range(len(atts)), key=lambda i: (atts[i].entry.key, xi[i]))
    return AscendingProfile(q, tuple(atts[i].entry for i in order), tuple(xi[i] for i in order))


def xi_invariant(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> XiClass:
    prof = ascending_profile(g, limit)
    if prof.s == 0:
        raise NotAscending("no s-mobile edges: the group is BS(1,n)")
    return XiClass(prof.q, prof.xi)


# -- non-ascending normal forms -----------------------------------------------------


def _nonascending_checks(g: LabeledGraph) -> None:
    _require_b1(g)
    if classify_elementary(g).elementary:
        raise Elementary("elementary groups are excluded")
    if is_ascending_b1(g):
        raise Ascending("graph has an embedded strict monotone cycle")
    q = modulus_generator(g).q
    if q.denominator != 1 or abs(q) == 1:
        raise NonIntegralModulus(f"modulus generator {q} is not an integer > 1")


MAX_BACKWARD_STEPS = 100_000


def _backwards(h: LabeledGraph, d: DirectedEdge, cycle) -> LabeledGraph:
    """Slide ``d`` against the cycle direction while labels allow."""
    at = {h.origin(c): n for n, c in enumerate(cycle)}
    other = h.terminus(d)
    for _ in range(MAX_BACKWARD_STEPS):
        back = cycle[at[h.origin(d)] - 1].bar
        lab = h.label(d)
        if lab % h.label(back):
            return h
        new = lab // h.label(back) * h.label(back.bar)
        if abs(new) == 1 and h.terminus(back) != other:
            return h
        h = slide(h, d, (back,))
    raise AssertionError("backward sliding did not terminate")


def _nonascending_nf(h: LabeledGraph, mobile: frozenset[str], cycle) -> LabeledGraph:
    on_cycle = {h.origin(c) for c in cycle}
    cycle_ids = {c.id for c in cycle}
    for eid in sorted(mobile - cycle_ids):
        e = h.edge(eid)
        if e.origin in on_cycle or e.terminus in on_cycle:
            continue
        d = _toward(h, eid, on_cycle)
        start = h.terminus(d)
        goal = next(iter(_nearest(h, start, on_cycle, {eid} | cycle_ids)))
        h = slide(h, d.bar, _tree_path(h, start, goal, {eid} | cycle_ids))
    for eid in sorted(mobile - cycle_ids):
        d = _toward(h, eid, on_cycle)
        h = _backwards(h, d.bar, cycle)
    return h


def _nearest(g: LabeledGraph, start: str, targets: set[str], skip: set[str]) -> list[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if v in targets:
            return [v]
        for d in sorted(g.outgoing(v)):
            w = g.terminus(d)
            if d.id not in skip and w not in seen:
                seen.add(w)
                queue.append(w)
    raise AssertionError("cycle not reachable")


def nonascending_normal_form(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> LabeledGraph:
    """Positive labels; mobile edges on the cycle, pushed back against it as far as possible.

    Edge ids of ``g`` are kept.
    """
    _nonascending_checks(g)
    h = absolute(g)
    cycle = modulus_generator(h).cycle
    return _nonascending_nf(h, mobile_edges(h, limit), cycle)


def _inner_options(h: LabeledGraph, d: DirectedEdge, mobile: frozenset[str]) -> list[tuple[str, int]]:
    """Positions and labels reachable by the origin of ``d`` over non-mobile edges."""
    other = h.terminus(d)
    start = (h.origin(d), h.label(d))
    seen = {start}
    queue = deque([start])
    while queue:
        v, lab = queue.popleft()
        for p in h.outgoing(v):
            if p.id in mobile or lab % h.label(p):
                continue
            w, new = h.terminus(p), lab // h.label(p) * h.label(p.bar)
            if w != other and abs(new) == 1:
                continue
            if (w, new) not in seen:
                seen.add((w, new))
                queue.append((w, new))
    return sorted(seen)


def enumerate_normal_forms(g: LabeledGraph, limit: int = DEFAULT_LIMIT) -> dict[CanonicalCode, LabeledGraph]:
    """Every non-ascending normal form of the group, keyed by canonical code."""
    _nonascending_checks(g)
    h = absolute(g)
    mobile = mobile_edges(h, limit)
    layer = [h]
    for eid in h.edge_ids:
        if eid in mobile:
            continue
        seen: set[LabeledGraph] = set()
        nxt = []
        for cur in layer:
            for k in edge_slide_closure(cur, eid, limit):
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        if len(nxt) > limit:
            raise EnumerationLimit(f"more than {limit} graphs")
        layer = nxt
    found: dict[CanonicalCode, LabeledGraph] = {}
    for cur in layer:
        cycle = modulus_generator(cur).cycle
        nf = _nonascending_nf(cur, mobile, cycle)
        on_cycle = {nf.origin(c) for c in cycle}
        inner = [_toward(nf, eid, on_cycle) for eid in sorted(mobile - {c.id for c in cycle})]
        options = [_inner_options(nf, d, mobile) for d in inner]
        for combo in itertools.product(*options):
            k = nf
            for d, (v, lab) in zip(inner, combo):
                k = k.with_end(d, v, lab)
            found.setdefault(canonical_code(k), k)
            if len(found) > limit:
                raise EnumerationLimit(f"more than {limit} normal forms")
    return dict(sorted(found.items()))


# -- the decision procedure ---------------------------------------------------------------


@dataclass(frozen=True)
class IsoVerdict:
    kind: str  # "ISOMORPHIC" | "NOT_ISOMORPHIC" | "UNSUPPORTED"
    reason: str = ""

    @property
    def exit_code(self) -> int:
        return {"ISOMORPHIC": 0, "NOT_ISOMORPHIC": 1, "UNSUPPORTED": 2}[self.kind]

    def __str__(self) -> str:
        if self.kind == "UNSUPPORTED":
            return f"UNSUPPORTED({self.reason})"
        return self.kind


def _yes(reason: str) -> IsoVerdict:
    return IsoVerdict("ISOMORPHIC", reason)


def _no(reason: str) -> IsoVerdict:
    return IsoVerdict("NOT_ISOMORPHIC", reason)


def _same_profile(a: AscendingProfile, b: AscendingProfile) -> bool:
    if a.s != b.s or [e.key for e in a.entries] != [e.key for e in b.entries]:
        return False
    blocks: dict[tuple, list[int]] = {}
    for i, e in enumerate(a.entries):
        blocks.setdefault(e.key, []).append(i)
    groups = list(blocks.values())
    left = XiClass(a.q, a.xi)
    for perms in itertools.product(*(itertools.permutations(idx) for idx in groups)):
        sigma = [0] * a.s
        for idx, perm in zip(groups, perms):
            for i, j in zip(idx, perm):
                sigma[i] = j
        if xi_equal(left, XiClass(b.q, tuple(b.xi[sigma[i]] for i in range(a.s)))):
            return True
    return False


def isomorphic(g: LabeledGraph, h: LabeledGraph, limit: int = DEFAULT_LIMIT) -> IsoVerdict:
    g, h = reduce(g), reduce(h)
    cg, ch = classify_elementary(g), classify_elementary(h)
    if cg.elementary or ch.elementary:
        if cg == ch:
            return _yes(f"both {cg.value}")
        return _no(f"{cg.value} vs {ch.value}")
    bg, bh = betti_number(g), betti_number(h)
    if bg != bh:
        return _no(f"Betti numbers {bg} and {bh}")
    if is_bs1n(g) or is_bs1n(h):
        same = is_bs1n(g) and is_bs1n(h) and canonical_code(g) == canonical_code(h)
        return _yes("same BS(1,n) graph") if same else _no("BS(1,n) has a unique reduced graph")
    mg, mh = mobile_edges(g, limit), mobile_edges(h, limit)
    if not mg:
        return _yes("found in the finite graph space") if iso_no_mobile(g, h, limit) else _no(
            "not in the finite graph space"
        )
    if not mh:
        return _yes("found in the finite graph space") if iso_no_mobile(h, g, limit) else _no(
            "not in the finite graph space"
        )
    if bg >= 2:
        return IsoVerdict("UNSUPPORTED", f"Betti number {bg} with mobile edges")
    qg, qh = modulus_generator(g), modulus_generator(h)
    for gen in (qg, qh):
        # a mobile edge forces an integral modulus
        assert gen.q.denominator == 1 and abs(gen.q) > 1, gen
    if qg.q != qh.q:
        return _no(f"modulus generators {qg.q} and {qh.q}")
    ag, ah = is_ascending_b1(g), is_ascending_b1(h)
    if ag != ah:
        return _no("only one group is ascending")
    if ag:
        pg, ph = ascending_profile(g, limit), ascending_profile(h, limit)
        if pg.s != ph.s:
            return _no(f"s = {pg.s} vs {ph.s}")
        if _same_profile(pg, ph):
            return _yes("matching xi and non-mobile subgroups")
        return _no("xi or pointed spaces differ")
    target = canonical_code(nonascending_normal_form(h, limit))
    if target in enumerate_normal_forms(g, limit):
        return _yes("normal form found")
    return _no("normal form not among the enumerated normal forms")
