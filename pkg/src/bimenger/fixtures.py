"""Small canonical instances used across tests, demos and the shipped files.

The two six-vertex instances are disjoint pairs of triangles with every
half-edge sign +.  With all signs equal no walk can turn at an internal
vertex, so every nontrivial path is a single edge and every link between
the two sides is a turnaround.
"""

from __future__ import annotations

from .bigraph import PLUS, BidirectedGraph, build_graph


def fig1a() -> tuple[BidirectedGraph, set, set]:
    """Two disjoint all-plus triangles; packing 2, minimum separator 2."""
    vertices = ["x1", "x2", "x3", "y1", "y2", "y3"]
    edges = [
        ("x1", "x2", PLUS, PLUS),
        ("x2", "x3", PLUS, PLUS),
        ("x3", "x1", PLUS, PLUS),
        ("y1", "y2", PLUS, PLUS),
        ("y2", "y3", PLUS, PLUS),
        ("y3", "y1", PLUS, PLUS),
    ]
    g = build_graph(vertices, edges)
    return g, {"x1", "x2", "x3"}, {"y1", "y2", "y3"}


def fig1b() -> tuple[BidirectedGraph, set, set]:
    """fig1a minus one X-side edge; the shared vertex is renamed a.

    Packing stays 2 but deleting a alone now kills every link, so the
    min-max inequality is strict here.
    """
    vertices = ["a", "x2", "x3", "y1", "y2", "y3"]
    edges = [
        ("a", "x2", PLUS, PLUS),
        ("x3", "a", PLUS, PLUS),
        ("y1", "y2", PLUS, PLUS),
        ("y2", "y3", PLUS, PLUS),
        ("y3", "y1", PLUS, PLUS),
    ]
    g = build_graph(vertices, edges)
    return g, {"a", "x2", "x3"}, {"y1", "y2", "y3"}


def x_triangle() -> tuple[BidirectedGraph, set]:
    """One all-plus triangle with every vertex in X; max X-path packing 1,
    min hitting set 2."""
    vertices = ["x1", "x2", "x3"]
    edges = [
        ("x1", "x2", PLUS, PLUS),
        ("x2", "x3", PLUS, PLUS),
        ("x3", "x1", PLUS, PLUS),
    ]
    g = build_graph(vertices, edges)
    return g, {"x1", "x2", "x3"}
