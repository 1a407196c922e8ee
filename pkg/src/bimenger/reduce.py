"""Graph reductions with invertible bookkeeping.

Three constructions feed the LP pipeline:

* terminal attachment: new terminals s and t wired to the source and
  target sets through per-vertex gadgets, so that s-t links of the
  result correspond exactly to set-to-set links of the input;
* vertex splitting: every non-terminal v becomes v+/v- joined by a
  capacity-one split edge, plus a closing edge f from t back to s, which
  turns internal vertex-disjointness into edge-disjointness;
* doubling: two disjoint copies, used to reduce X-path packing to
  turnaround packing between the copies.

The terminal attachment deliberately does not wire x to s by two
parallel edges: that would create a two-edge closed trail at s standing
for a trivial path, inflating packings on instances with no links at
all.  The gadget below admits exactly one s-edge per source vertex and
pushes the sign choice one step away from s, which kills the spurious
trail while keeping every genuine link liftable.  This equivalence is
enforced by oracle-parity tests rather than assumed.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

from .bigraph import (
    MINUS,
    PLUS,
    BidirectedGraph,
    Edge,
    EdgeId,
    Sign,
    UnknownVertex,
    VertexId,
    vertex_sort_key,
)
from .walks import Link, Walk, check_walk


class EqualTerminals(Exception):
    """s and t must be distinct."""


class NotNormalized(Exception):
    """Splitting requires all-minus signs at s and all-plus signs at t."""


class DirectTerminalEdge(Exception):
    """A direct s-t edge makes every internal separator infinite."""


class InvalidDerivedLink(Exception):
    """A link handed to a backward map does not fit the construction."""


class UnmappableEdge(Exception):
    """A cut edge with no original vertex to charge (the closing edge f)."""


@dataclasses.dataclass(frozen=True)
class ReductionMap:
    """Bookkeeping for one reduction step.

    ``vertex_map`` sends original vertices to their derived form (a
    tuple for split/double).  ``edge_map`` sends original edge ids to
    derived edge ids.  ``special`` holds the construction-specific
    records (terminals, gadget tables, the closing edge f, copies).
    """

    kind: str  # "terminal" | "split" | "double"
    source: BidirectedGraph
    derived: BidirectedGraph
    vertex_map: dict
    edge_map: dict
    special: dict


def _fresh(base: str, used: set) -> str:
    name = base
    while name in used:
        name += "'"
    used.add(name)
    return name


def _next_eid(edges: Sequence[Edge]) -> int:
    return max((e.eid for e in edges), default=-1) + 1


def attach_terminals(
    g: BidirectedGraph, X: Iterable, Y: Iterable
) -> tuple[BidirectedGraph, VertexId, VertexId, ReductionMap]:
    """Attach auxiliary terminals s and t through per-vertex gadgets.

    For each x in X a fresh vertex x~X is added with a single edge
    s--x~X (minus at s, plus at x~X) and two parallel edges x~X--x
    (minus at x~X, one with plus and one with minus at x); symmetrically
    for Y with t.  Every half-edge at s is minus and every half-edge at
    t is plus, so the output is already normalized for splitting.
    """
    X, Y = set(X), set(Y)
    missing = (X | Y) - g.vertex_set
    if missing:
        raise UnknownVertex(f"terminal sets reference undeclared vertices {sorted(map(str, missing))}")
    if not X or not Y:
        raise ValueError("attach_terminals needs nonempty X and Y")

    used = {str(v) for v in g.vertices}
    s = _fresh("s", used)
    t = _fresh("t", used)
    x_order = sorted(X, key=vertex_sort_key)
    y_order = sorted(Y, key=vertex_sort_key)
    x_gadget = {x: _fresh(f"{x}~X", used) for x in x_order}
    y_gadget = {y: _fresh(f"{y}~Y", used) for y in y_order}

    vertices = list(g.vertices) + [s, t] + [x_gadget[x] for x in x_order] + [y_gadget[y] for y in y_order]
    edges = list(g.edges)
    eid = _next_eid(edges)
    gadget_origin: dict[EdgeId, VertexId] = {}
    arrival_edge: dict[tuple[VertexId, str, Sign], EdgeId] = {}

    for x in x_order:
        xg = x_gadget[x]
        edges.append(Edge(eid, s, xg, MINUS, PLUS))
        gadget_origin[eid] = x
        eid += 1
        for sign_at_x in (PLUS, MINUS):
            edges.append(Edge(eid, xg, x, MINUS, sign_at_x))
            gadget_origin[eid] = x
            arrival_edge[(x, "X", sign_at_x)] = eid
            eid += 1
    for y in y_order:
        yg = y_gadget[y]
        edges.append(Edge(eid, t, yg, PLUS, MINUS))
        gadget_origin[eid] = y
        eid += 1
        for sign_at_y in (PLUS, MINUS):
            edges.append(Edge(eid, yg, y, PLUS, sign_at_y))
            gadget_origin[eid] = y
            arrival_edge[(y, "Y", sign_at_y)] = eid
            eid += 1

    g_hat = BidirectedGraph(tuple(vertices), tuple(edges))
    rmap = ReductionMap(
        kind="terminal",
        source=g,
        derived=g_hat,
        vertex_map={v: v for v in g.vertices},
        edge_map={e.eid: e.eid for e in g.edges},
        special={
            "s": s,
            "t": t,
            "X": frozenset(X),
            "Y": frozenset(Y),
            "x_gadget": x_gadget,
            "y_gadget": y_gadget,
            "gadget_origin": gadget_origin,
            "arrival_edge": arrival_edge,
        },
    )
    return g_hat, s, t, rmap


def normalize_terminals(g: BidirectedGraph, s: VertexId, t: VertexId) -> BidirectedGraph:
    """Force sign minus on every half-edge at s and plus on every one at t.

    Links meet s and t only as walk endpoints, which carry no sign
    condition, so the s-t link structure is unchanged.
    """
    if s == t:
        raise EqualTerminals(f"terminals coincide: {s!r}")
    if not g.has_vertex(s) or not g.has_vertex(t):
        raise UnknownVertex("terminal not in graph")
    edges = []
    for e in g.edges:
        su, sv = e.sign_u, e.sign_v
        if e.u == s:
            su = MINUS
        if e.u == t:
            su = PLUS
        if e.v == s:
            sv = MINUS
        if e.v == t:
            sv = PLUS
        edges.append(Edge(e.eid, e.u, e.v, su, sv))
    return BidirectedGraph(g.vertices, tuple(edges))


def split_and_close(
    g: BidirectedGraph, s: VertexId, t: VertexId
) -> tuple[BidirectedGraph, EdgeId, ReductionMap]:
    """Split every non-terminal vertex and close the graph with edge f.

    Each v outside {s,t} becomes v+ (inheriting the plus edge ends) and
    v- (the minus ends), joined by a split edge with minus at v+ and
    plus at v-.  A new edge f joins t to s with plus at s and minus at
    t.  Requires normalized terminals and no direct s-t edge.
    """
    if s == t:
        raise EqualTerminals(f"terminals coincide: {s!r}")
    if not g.has_vertex(s) or not g.has_vertex(t):
        raise UnknownVertex("terminal not in graph")
    for e in g.edges:
        if {e.u, e.v} == {s, t}:
            raise DirectTerminalEdge(f"edge {e.eid} joins {s!r} and {t!r} directly")
        if (e.u == s and e.sign_u is not MINUS) or (e.v == s and e.sign_v is not MINUS):
            raise NotNormalized(f"edge {e.eid} has sign + at {s!r}")
        if (e.u == t and e.sign_u is not PLUS) or (e.v == t and e.sign_v is not PLUS):
            raise NotNormalized(f"edge {e.eid} has sign - at {t!r}")

    used = {str(v) for v in g.vertices}
    plus_of, minus_of = {}, {}
    non_terminals = [v for v in g.vertices if v not in (s, t)]
    for v in non_terminals:
        plus_of[v] = _fresh(f"{v}+", used)
        minus_of[v] = _fresh(f"{v}-", used)

    def image(v: VertexId, sign: Sign) -> VertexId:
        if v in (s, t):
            return v
        return plus_of[v] if sign is PLUS else minus_of[v]

    vertices = [s, t]
    for v in non_terminals:
        vertices.append(plus_of[v])
        vertices.append(minus_of[v])

    edges = [
        Edge(e.eid, image(e.u, e.sign_u), image(e.v, e.sign_v), e.sign_u, e.sign_v)
        for e in g.edges
    ]
    eid = _next_eid(edges)
    split_edge_of: dict[VertexId, EdgeId] = {}
    split_origin: dict[EdgeId, VertexId] = {}
    for v in non_terminals:
        edges.append(Edge(eid, plus_of[v], minus_of[v], MINUS, PLUS))
        split_edge_of[v] = eid
        split_origin[eid] = v
        eid += 1
    f = eid
    edges.append(Edge(f, s, t, PLUS, MINUS))

    back_vertex = {}
    for v in non_terminals:
        back_vertex[plus_of[v]] = v
        back_vertex[minus_of[v]] = v

    g_prime = BidirectedGraph(tuple(vertices), tuple(edges))
    rmap = ReductionMap(
        kind="split",
        source=g,
        derived=g_prime,
        vertex_map={v: (plus_of[v], minus_of[v]) for v in non_terminals},
        edge_map={e.eid: e.eid for e in g.edges},
        special={
            "s": s,
            "t": t,
            "f": f,
            "split_edge_of": split_edge_of,
            "split_origin": split_origin,
            "back_vertex": back_vertex,
        },
    )
    return g_prime, f, rmap


def double_for_xpaths(
    g: BidirectedGraph, X: Iterable
) -> tuple[BidirectedGraph, frozenset, frozenset, ReductionMap]:
    """Disjoint union of two relabelled copies; X1 and X2 are the images of X."""
    X = set(X)
    missing = X - g.vertex_set
    if missing:
        raise UnknownVertex(f"X references undeclared vertices {sorted(map(str, missing))}")
    used = {str(v) for v in g.vertices}
    copy1 = {v: _fresh(f"{v}'", used) for v in g.vertices}
    copy2 = {v: _fresh(f"{v}''", used) for v in g.vertices}

    vertices = [copy1[v] for v in g.vertices] + [copy2[v] for v in g.vertices]
    edges = [Edge(e.eid, copy1[e.u], copy1[e.v], e.sign_u, e.sign_v) for e in g.edges]
    eid = _next_eid(edges)
    edge_map = {}
    for e in g.edges:
        edges.append(Edge(eid, copy2[e.u], copy2[e.v], e.sign_u, e.sign_v))
        edge_map[e.eid] = (e.eid, eid)
        eid += 1

    g2 = BidirectedGraph(tuple(vertices), tuple(edges))
    back_vertex = {w: v for v, w in copy1.items()}
    back_vertex.update({w: v for v, w in copy2.items()})
    rmap = ReductionMap(
        kind="double",
        source=g,
        derived=g2,
        vertex_map={v: (copy1[v], copy2[v]) for v in g.vertices},
        edge_map=edge_map,
        special={
            "copy1": copy1,
            "copy2": copy2,
            "back_vertex": back_vertex,
            "back_edge": {d: o for o, (d1, d2) in edge_map.items() for d in (d1, d2)},
        },
    )
    return g2, frozenset(copy1[x] for x in X), frozenset(copy2[x] for x in X), rmap


# ---------------------------------------------------------------------------
# backward maps


def _unsplit_walk(rmap: ReductionMap, w: Walk) -> Walk:
    """Collapse v+/v- pairs and drop split edges; result lives in rmap.source."""
    back = rmap.special["back_vertex"]
    split_origin = rmap.special["split_origin"]
    if rmap.special["f"] in w.edges:
        raise InvalidDerivedLink("link uses the closing edge f")

    def back_v(v):
        return back.get(v, v)

    vertices = [back_v(w.vertices[0])]
    edges = []
    for eid, nxt in zip(w.edges, w.vertices[1:]):
        if eid in split_origin:
            if back_v(nxt) != vertices[-1]:
                raise InvalidDerivedLink("split edge does not stay on one original vertex")
            continue
        edges.append(eid)
        vertices.append(back_v(nxt))
    out = Walk(tuple(vertices), tuple(edges))
    if not check_walk(rmap.source, out):
        raise InvalidDerivedLink("collapsed walk is not valid in the source graph")
    return out


def _strip_terminal_walk(rmap: ReductionMap, w: Walk) -> Walk:
    """Remove the two-edge gadget prefix/suffix of an s-t, s-s or t-t walk."""
    s, t = rmap.special["s"], rmap.special["t"]
    gadget_origin = rmap.special["gadget_origin"]
    if w.start not in (s, t) or w.end not in (s, t):
        raise InvalidDerivedLink("walk does not start and end at the auxiliary terminals")
    if len(w.edges) < 4:
        raise InvalidDerivedLink("walk too short to carry the terminal gadgets")
    for eid in w.edges[:2] + w.edges[-2:]:
        if eid not in gadget_origin:
            raise InvalidDerivedLink("walk does not enter the graph through a gadget")
    inner_vertices = w.vertices[2:-2]
    inner_edges = w.edges[2:-2]
    out = Walk(tuple(inner_vertices), tuple(inner_edges))
    if not check_walk(rmap.source, out):
        raise InvalidDerivedLink("stripped walk is not valid in the source graph")
    return out


def _map_link_back_one(rmap: ReductionMap, link: Link) -> Link:
    if rmap.kind == "split":
        return Link(link.kind, tuple(_unsplit_walk(rmap, w) for w in link.walks))
    if rmap.kind == "terminal":
        return Link(link.kind, tuple(_strip_terminal_walk(rmap, w) for w in link.walks))
    raise InvalidDerivedLink(f"no link mapping for reduction kind {rmap.kind!r}")


def map_links_back(map_chain: Sequence[ReductionMap], links: Iterable[Link]) -> list[Link]:
    """Map links of the most-derived graph back through the chain.

    ``map_chain`` is in application order (original graph first); paths
    map to paths and turnarounds to turnarounds.
    """
    out = list(links)
    for rmap in reversed(map_chain):
        out = [_map_link_back_one(rmap, link) for link in out]
    return out


def map_cut_to_separator(map_chain: Sequence[ReductionMap], F: Iterable[EdgeId]) -> frozenset:
    """Charge every cut edge to one original vertex.

    Split edges map to the vertex they split, gadget edges to the
    terminal-set vertex they guard, and surviving original edges to
    their lexicographically least endpoint outside the terminals.
    """
    tokens = [("edge", eid) for eid in F]
    exclude: set = set()
    for rmap in reversed(map_chain):
        nxt = []
        if rmap.kind == "split":
            split_origin = rmap.special["split_origin"]
            f = rmap.special["f"]
            for kind, payload in tokens:
                if kind == "vertex":
                    nxt.append((kind, rmap.special["back_vertex"].get(payload, payload)))
                elif payload == f:
                    raise UnmappableEdge("the closing edge f cannot be charged to a vertex")
                elif payload in split_origin:
                    nxt.append(("vertex", split_origin[payload]))
                else:
                    nxt.append(("edge", payload))
            exclude = {rmap.special["s"], rmap.special["t"]}
        elif rmap.kind == "terminal":
            gadget_origin = rmap.special["gadget_origin"]
            for kind, payload in tokens:
                if kind == "vertex":
                    nxt.append((kind, payload))  # original ids are unchanged
                elif payload in gadget_origin:
                    nxt.append(("vertex", gadget_origin[payload]))
                else:
                    nxt.append(("edge", payload))
            exclude = set()
        else:
            raise UnmappableEdge(f"no cut mapping for reduction kind {rmap.kind!r}")
        tokens = nxt

    original = map_chain[0].source
    out = set()
    for kind, payload in tokens:
        if kind == "vertex":
            out.add(payload)
            continue
        e = original.edge(payload)
        candidates = [v for v in e.endpoints if v not in exclude]
        if not candidates:
            raise UnmappableEdge(f"edge {payload} joins the terminals directly")
        out.add(min(candidates, key=vertex_sort_key))
    return frozenset(out)


# ---------------------------------------------------------------------------
# forward lifting (used by round-trip tests)


def lift_link_through_terminal(rmap: ReductionMap, link: Link) -> Link:
    """Lift an X-Y link of the source graph to an s-t link of the gadgeted graph."""
    s, t = rmap.special["s"], rmap.special["t"]
    g_hat = rmap.derived
    x_gadget, y_gadget = rmap.special["x_gadget"], rmap.special["y_gadget"]
    arrival = rmap.special["arrival_edge"]

    def s_edge(x):
        xg = x_gadget[x]
        (e,) = [e for e in g_hat.incident(s) if e.other(s) == xg]
        return e.eid

    def t_edge(y):
        yg = y_gadget[y]
        (e,) = [e for e in g_hat.incident(t) if e.other(t) == yg]
        return e.eid

    def lift_path(w: Walk) -> Walk:
        x, y = w.start, w.end
        if w.is_trivial:
            ax = arrival[(x, "X", PLUS)]
            ay = arrival[(y, "Y", MINUS)]
        else:
            ax = arrival[(x, "X", g_hat.edge(w.edges[0]).sign_at(x).flip())]
            ay = arrival[(y, "Y", g_hat.edge(w.edges[-1]).sign_at(y).flip())]
        vertices = (s, x_gadget[x]) + w.vertices + (y_gadget[y], t)
        edges = (s_edge(x), ax) + w.edges + (ay, t_edge(y))
        return Walk(vertices, edges)

    def lift_part(w: Walk, side: str) -> Walk:
        gadget = x_gadget if side == "X" else y_gadget
        term = s if side == "X" else t
        term_edge = s_edge if side == "X" else t_edge
        a, b = w.start, w.end
        ea = arrival[(a, side, g_hat.edge(w.edges[0]).sign_at(a).flip())]
        eb = arrival[(b, side, g_hat.edge(w.edges[-1]).sign_at(b).flip())]
        vertices = (term, gadget[a]) + w.vertices + (gadget[b], term)
        edges = (term_edge(a), ea) + w.edges + (eb, term_edge(b))
        return Walk(vertices, edges)

    if link.kind == "path":
        out = Link("path", (lift_path(link.path),))
    else:
        out = Link(
            "turnaround",
            (lift_part(link.ss_part, "X"), lift_part(link.tt_part, "Y")),
        )
    for w in out.walks:
        if not check_walk(g_hat, w):
            raise InvalidDerivedLink("lifted walk is not valid in the gadgeted graph")
    return out


def lift_walk_through_split(rmap: ReductionMap, w: Walk) -> Walk:
    """Lift a walk of the source graph to the split graph, inserting split edges."""
    g, g_prime = rmap.source, rmap.derived
    s, t = rmap.special["s"], rmap.special["t"]
    split_edge_of = rmap.special["split_edge_of"]
    vmap = rmap.vertex_map

    def image(v, sign):
        if v in (s, t):
            return v
        plus, minus = vmap[v]
        return plus if sign is PLUS else minus

    vertices = []
    edges = []
    if w.is_trivial:
        raise InvalidDerivedLink("cannot lift a trivial walk into the split graph")
    first = g.edge(w.edges[0])
    vertices.append(image(w.start, first.sign_at(w.start)))
    for i, eid in enumerate(w.edges):
        e = g.edge(eid)
        v_prev, v_next = w.vertices[i], w.vertices[i + 1]
        if image(v_prev, e.sign_at(v_prev)) != vertices[-1]:
            # hop across the split edge before leaving v_prev
            edges.append(split_edge_of[v_prev])
            vertices.append(image(v_prev, e.sign_at(v_prev)))
        edges.append(eid)
        vertices.append(image(v_next, e.sign_at(v_next)))
    out = Walk(tuple(vertices), tuple(edges))
    if not check_walk(g_prime, out):
        raise InvalidDerivedLink("lifted walk is not valid in the split graph")
    return out
