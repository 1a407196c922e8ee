"""Brute-force ground truth for packings and separators.

Everything here is exhaustive search at desk scale: packings by
branch-and-bound over the enumerated link list with value-based pruning,
separators by subset enumeration in increasing cardinality (first hit is
a minimum, ties resolved lexicographically).  Certainty over speed.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Iterable

from .bigraph import BidirectedGraph, VertexId, delete_vertices, vertex_sort_key
from .reduce import EqualTerminals
from .walks import (
    Link,
    enumerate_almost_paths,
    enumerate_paths,
    enumerate_st_links,
    enumerate_xy_links,
)

DEFAULT_MAX_VERTICES = 10
DEFAULT_MAX_EDGES = 16


class SizeBoundExceeded(Exception):
    """Instance too large for exhaustive search."""


@dataclasses.dataclass(frozen=True)
class PackingResult:
    value: int
    links: tuple[Link, ...]


@dataclasses.dataclass(frozen=True)
class SeparatorResult:
    size: float  # nonnegative integer, or math.inf
    vertices: frozenset

    @property
    def is_infinite(self) -> bool:
        return self.size == math.inf


def _check_bounds(g: BidirectedGraph, max_vertices: int, max_edges: int) -> None:
    if g.n > max_vertices or g.m > max_edges:
        raise SizeBoundExceeded(
            f"oracle bound exceeded: {g.n} vertices / {g.m} edges "
            f"(limits {max_vertices}/{max_edges})"
        )


def _footprint_key(fs: frozenset) -> tuple:
    return tuple(sorted(map(str, fs)))


def _max_weight_disjoint(items: list[tuple[int, frozenset, Link]]) -> tuple[int, list[Link]]:
    """Branch and bound for a maximum-weight family of disjoint footprints."""
    items = sorted(items, key=lambda it: (-it[0], _footprint_key(it[1])))
    suffix = [0] * (len(items) + 1)
    for i in range(len(items) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + items[i][0]
    best_val = 0
    best_sel: list[Link] = []

    def rec(i: int, used: frozenset, val: int, sel: list[Link]) -> None:
        nonlocal best_val, best_sel
        if val > best_val:
            best_val, best_sel = val, sel[:]
        for j in range(i, len(items)):
            if val + suffix[j] <= best_val:
                return
            w, fs, link = items[j]
            if fs & used:
                continue
            sel.append(link)
            rec(j + 1, used | fs, val + w, sel)
            sel.pop()

    rec(0, frozenset(), 0, [])
    return best_val, best_sel


def _dedupe_by_footprint(pairs: Iterable[tuple[frozenset, Link]]) -> list[tuple[int, frozenset, Link]]:
    """Keep one heaviest witness per footprint; a path never beats a
    turnaround on the same vertex set."""
    best: dict[frozenset, tuple[int, Link]] = {}
    for fs, link in pairs:
        cur = best.get(fs)
        if cur is None or link.weight > cur[0]:
            best[fs] = (link.weight, link)
    return [(w, fs, link) for fs, (w, link) in best.items()]


def _exists_path(g, A, Bset, forbidden=frozenset(), nontrivial_only=False) -> bool:
    A = {a for a in A if a in g.vertex_set and a not in forbidden}
    Bset = {b for b in Bset if b in g.vertex_set and b not in forbidden}
    if not A or not Bset:
        return False
    if not nontrivial_only and A & Bset:
        return True

    def dfs(v, last_sign, visited) -> bool:
        for e in g.incident(v):
            if last_sign is not None and e.sign_at(v) == last_sign:
                continue
            w = e.other(v)
            if w in visited or w in forbidden:
                continue
            if w in Bset:
                return True
            visited.add(w)
            if dfs(w, e.sign_at(w), visited):
                return True
            visited.discard(w)
        return False

    return any(dfs(a, None, {a}) for a in A)


def _exists_almost_path(g, v, forbidden=frozenset()) -> bool:
    if v in forbidden or v not in g.vertex_set:
        return False

    def dfs(cur, last_sign, visited, used) -> bool:
        for e in g.incident(cur):
            if e.sign_at(cur) == last_sign or e.eid in used:
                continue
            w = e.other(cur)
            if w == v:
                return True
            if w in visited or w in forbidden:
                continue
            visited.add(w)
            used.add(e.eid)
            if dfs(w, e.sign_at(w), visited, used):
                return True
            used.discard(e.eid)
            visited.discard(w)
        return False

    for e in g.incident(v):
        w = e.other(v)
        if w in forbidden:
            continue
        if dfs(w, e.sign_at(w), {v, w}, {e.eid}):
            return True
    return False


def has_xy_link(g: BidirectedGraph, X: Iterable, Y: Iterable) -> bool:
    X, Y = set(X), set(Y)
    if _exists_path(g, X, Y):
        return True
    for p in enumerate_paths(g, X, X, nontrivial_only=True):
        if _exists_path(g, Y, Y, forbidden=frozenset(p.vertices), nontrivial_only=True):
            return True
    return False


def has_st_link(g: BidirectedGraph, s: VertexId, t: VertexId) -> bool:
    if _exists_path(g, {s}, {t}):
        return True
    for p in enumerate_almost_paths(g, s):
        forbidden = frozenset(p.vertices)
        if t in forbidden:
            continue
        if _exists_almost_path(g, t, forbidden=forbidden):
            return True
    return False


def oracle_max_links(
    g: BidirectedGraph,
    X: Iterable,
    Y: Iterable,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> PackingResult:
    """Exact maximum over pairwise vertex-disjoint link families,
    turnarounds counted twice."""
    _check_bounds(g, max_vertices, max_edges)
    links = enumerate_xy_links(g, X, Y)
    items = _dedupe_by_footprint((link.vertex_set(), link) for link in links)
    value, sel = _max_weight_disjoint(items)
    return PackingResult(value, tuple(sel))


def oracle_min_separator(
    g: BidirectedGraph,
    X: Iterable,
    Y: Iterable,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> SeparatorResult:
    """Smallest vertex set whose deletion leaves no X-Y link."""
    _check_bounds(g, max_vertices, max_edges)
    X, Y = set(X), set(Y)
    ordered = sorted(g.vertices, key=vertex_sort_key)
    for k in range(len(ordered) + 1):
        for S in itertools.combinations(ordered, k):
            if not has_xy_link(delete_vertices(g, S), X, Y):
                return SeparatorResult(k, frozenset(S))
    # deleting everything always works, so we never get here
    raise AssertionError("unreachable: full vertex set is always a separator")


def oracle_st(
    g: BidirectedGraph,
    s: VertexId,
    t: VertexId,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> tuple[PackingResult, SeparatorResult]:
    """Maximum internally vertex-disjoint s-t links (turnarounds twice) and
    the minimum internal separator; the separator is infinite when a direct
    s-t edge makes every internal vertex set insufficient."""
    if s == t:
        raise EqualTerminals(f"terminals coincide: {s!r}")
    _check_bounds(g, max_vertices, max_edges)
    links = enumerate_st_links(g, s, t)

    direct = [lk for lk in links if not (lk.vertex_set() - {s, t})]
    rest = []
    for lk in links:
        internal = lk.vertex_set() - {s, t}
        if internal:
            rest.append((internal, lk))
    value, sel = _max_weight_disjoint(_dedupe_by_footprint(rest))
    packing = PackingResult(value + len(direct), tuple(direct) + tuple(sel))

    if direct:
        separator = SeparatorResult(math.inf, frozenset())
    else:
        separator = None
        ordered = sorted((v for v in g.vertices if v not in (s, t)), key=vertex_sort_key)
        for k in range(len(ordered) + 1):
            for S in itertools.combinations(ordered, k):
                if not has_st_link(delete_vertices(g, S), s, t):
                    separator = SeparatorResult(k, frozenset(S))
                    break
            if separator is not None:
                break
        assert separator is not None
    return packing, separator


def min_xpath_hitting_set(g: BidirectedGraph, X: Iterable) -> SeparatorResult:
    """Smallest vertex set meeting every nontrivial X-X path."""
    X = set(X)
    ordered = sorted(g.vertices, key=vertex_sort_key)
    for k in range(len(ordered) + 1):
        for S in itertools.combinations(ordered, k):
            if not _exists_path(delete_vertices(g, S), X, X, nontrivial_only=True):
                return SeparatorResult(k, frozenset(S))
    raise AssertionError("unreachable: full vertex set always hits")


def oracle_xpaths(
    g: BidirectedGraph,
    X: Iterable,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> tuple[int, int]:
    """(maximum number of vertex-disjoint nontrivial X-X paths,
    minimum size of a vertex set hitting every such path)."""
    _check_bounds(g, max_vertices, max_edges)
    X = set(X)
    paths = enumerate_paths(g, X, X, nontrivial_only=True)
    items = _dedupe_by_footprint(
        (frozenset(p.vertices), Link("path", (p,))) for p in paths
    )
    max_packing, _ = _max_weight_disjoint(items)
    hitting = min_xpath_hitting_set(g, X)
    return max_packing, int(hitting.size)
