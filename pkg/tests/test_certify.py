from fractions import Fraction

import pytest

from bimenger import (
    DualInfeasible,
    NotBalanced,
    NotIntegral,
    build_graph,
    check_no_turnaround_equality,
    classify_link,
    decompose_packing,
    delete_vertices,
    enumerate_st_links,
    extract_cut,
    oracle_max_links,
    oracle_min_separator,
    oracle_st,
    oracle_xpaths,
    solve_menger,
    solve_st,
    solve_xpaths,
)
from bimenger.bigraph import MINUS, PLUS
from bimenger.certify import link_sigma_sum
from bimenger.fixtures import fig1a, fig1b, x_triangle
from bimenger.oracle import has_xy_link
from bimenger.ratlp import build_primal, primal_vectors, simplex_max, solve_integral_max
from bimenger.reduce import DirectTerminalEdge, normalize_terminals, split_and_close

from .conftest import random_graph, random_sets


def st_pipeline(g, s, t):
    gn = normalize_terminals(g, s, t)
    g_prime, f, smap = split_and_close(gn, s, t)
    P = build_primal(g_prime, f)
    sol = solve_integral_max(P)
    x, xf = primal_vectors(P, sol)
    return g_prime, f, smap, x, int(xf)


def test_decompose_single_path():
    g = build_graph(
        ["s", "v", "t"],
        [("s", "v", MINUS, PLUS), ("v", "t", MINUS, PLUS)],
    )
    g_prime, f, smap, x, xf = st_pipeline(g, "s", "t")
    assert xf == 1
    dec = decompose_packing(g_prime, f, x, xf)
    assert len(dec.links) == 1
    assert dec.links[0].kind == "path"
    assert dec.slack_cycles == 0


def test_decompose_turnaround_uses_two_f_copies():
    g = build_graph(
        ["s", "u", "t", "w"],
        [
            ("s", "u", MINUS, PLUS),
            ("s", "u", MINUS, MINUS),
            ("t", "w", PLUS, PLUS),
            ("t", "w", PLUS, MINUS),
        ],
    )
    g_prime, f, smap, x, xf = st_pipeline(g, "s", "t")
    assert xf == 2
    dec = decompose_packing(g_prime, f, x, xf)
    assert [l.kind for l in dec.links] == ["turnaround"]
    assert dec.links[0].weight == 2
    ss, tt = dec.links[0].walks
    assert ss.start == ss.end == "s"
    assert tt.start == tt.end == "t"


def test_decompose_discards_slack_cycle():
    g = build_graph(
        ["s", "v", "t", "c1", "c2"],
        [
            ("s", "v", MINUS, PLUS),
            ("v", "t", MINUS, PLUS),
            ("c1", "c2", PLUS, PLUS),
            ("c1", "c2", MINUS, MINUS),
        ],
    )
    g_prime, f, smap, x, xf = st_pipeline(g, "s", "t")
    base = decompose_packing(g_prime, f, x, xf)
    augmented = dict(x)
    for eid in (2, 3):
        augmented[eid] = 1
    for v in ("c1", "c2"):
        augmented[smap.special["split_edge_of"][v]] = 1
    dec = decompose_packing(g_prime, f, augmented, xf)
    assert dec.slack_cycles == 1
    assert [l.canonical_key() for l in dec.links] == [
        l.canonical_key() for l in base.links
    ]


def test_decompose_rejects_fractional():
    g = build_graph(
        ["s", "v", "t"],
        [("s", "v", MINUS, PLUS), ("v", "t", MINUS, PLUS)],
    )
    g_prime, f, smap, x, xf = st_pipeline(g, "s", "t")
    bad = dict(x)
    bad[0] = Fraction(1, 2)
    with pytest.raises(NotIntegral):
        decompose_packing(g_prime, f, bad, xf)


def test_decompose_rejects_unbalanced():
    g = build_graph(
        ["s", "v", "t"],
        [("s", "v", MINUS, PLUS), ("v", "t", MINUS, PLUS)],
    )
    g_prime, f, smap, x, xf = st_pipeline(g, "s", "t")
    bad = {eid: 0 for eid in x}
    with pytest.raises(NotBalanced):
        decompose_packing(g_prime, f, bad, xf)


def test_extract_cut_rejects_zero_dual():
    g = build_graph(
        ["s", "v", "t"],
        [("s", "v", MINUS, PLUS), ("v", "t", MINUS, PLUS)],
    )
    g_prime, f, smap, x, xf = st_pipeline(g, "s", "t")
    z = {v: 0 for v in g_prime.vertices}
    y = {e.eid: 0 for e in g_prime.edges if e.eid != f}
    with pytest.raises(DualInfeasible):
        extract_cut(g_prime, f, z, y)


def test_cut_on_three_vertex_path():
    cert = solve_st(
        build_graph(
            ["s", "v", "t"],
            [("s", "v", MINUS, PLUS), ("v", "t", MINUS, PLUS)],
        ),
        "s",
        "t",
        keep_internals=True,
    )
    cut = cert.internals["cut"]
    assert len(cut.edges) == 1
    assert cert.separator == {"v"}


def _assert_cut_soundness(cert):
    g_prime = cert.internals["g_prime"]
    f = cert.internals["f"]
    z, y = cert.internals["z"], cert.internals["y"]
    cut = cert.internals["cut"].edges
    fe = g_prime.edge(f)
    s, t = fe.u, fe.v
    assert f not in cut
    assert len(cut) <= sum(y.values())
    for link in enumerate_st_links(g_prime, s, t):
        if f in link.edge_set():
            continue
        total = link_sigma_sum(g_prime, z, link)
        expect = (z[t] - z[s]) * (1 if link.kind == "path" else 2)
        assert total == expect
        assert total < 0
        assert cut & link.edge_set()


def test_cut_soundness_fig1a():
    g, X, Y = fig1a()
    cert = solve_menger(g, X, Y, keep_internals=True)
    _assert_cut_soundness(cert)


def test_cut_soundness_randomized(rng):
    done = 0
    for _ in range(12):
        g = random_graph(rng, rng.randrange(2, 6), rng.randrange(0, 7))
        X, Y = random_sets(rng, g, max_size=2, overlap=bool(rng.randrange(2)))
        if not X or not Y:
            continue
        cert = solve_menger(g, X, Y, keep_internals=True)
        _assert_cut_soundness(cert)
        done += 1
    assert done >= 6


def test_solve_fig1a():
    g, X, Y = fig1a()
    cert = solve_menger(g, X, Y)
    assert cert.value == 2
    assert len(cert.separator) == 2
    assert cert.checks["separator_verified"] is True
    assert sum(l.weight for l in cert.links) == 2
    assert all(classify_link(g, l, X, Y).kind == l.kind for l in cert.links)


def test_solve_fig1b_strict_inequality():
    g, X, Y = fig1b()
    cert = solve_menger(g, X, Y)
    assert cert.value == 2
    assert cert.separator == {"a"}
    assert not has_xy_link(delete_vertices(g, cert.separator), X, Y)


def test_solve_single_vertex_trivial_path():
    g = build_graph(["v"], [])
    cert = solve_menger(g, {"v"}, {"v"})
    assert cert.value == 1
    assert cert.separator == {"v"}
    assert cert.links[0].path.is_trivial


def test_solve_empty_sets_short_circuit():
    g = build_graph(["v"], [])
    cert = solve_menger(g, set(), {"v"})
    assert cert.value == 0
    assert cert.separator == frozenset()
    assert cert.links == ()


def test_solve_linkless_instance_is_zero():
    g = build_graph(["x", "y"], [])
    cert = solve_menger(g, {"x"}, {"y"})
    assert cert.value == 0
    assert cert.separator == frozenset()


def test_solve_st_path():
    g = build_graph(
        ["s", "v", "t"],
        [("s", "v", MINUS, PLUS), ("v", "t", MINUS, PLUS)],
    )
    cert = solve_st(g, "s", "t")
    assert cert.value == 1
    assert cert.separator == {"v"}


def test_solve_st_turnaround_pair():
    g = build_graph(
        ["s", "u", "t", "w"],
        [
            ("s", "u", MINUS, PLUS),
            ("s", "u", MINUS, MINUS),
            ("t", "w", PLUS, PLUS),
            ("t", "w", PLUS, MINUS),
        ],
    )
    cert = solve_st(g, "s", "t")
    assert cert.value == 2
    pk, _ = oracle_st(g, "s", "t")
    assert pk.value == 2


def test_solve_st_direct_edge_refused():
    g = build_graph(["s", "t"], [("s", "t", PLUS, PLUS)])
    with pytest.raises(DirectTerminalEdge):
        solve_st(g, "s", "t")


def test_solve_st_separator_avoids_terminals(rng):
    for _ in range(8):
        g = random_graph(rng, rng.randrange(3, 6), rng.randrange(0, 8))
        s, t = g.vertices[0], g.vertices[1]
        if any({e.u, e.v} == {s, t} for e in g.edges):
            continue
        cert = solve_st(g, s, t)
        assert s not in cert.separator and t not in cert.separator
        pk, sep = oracle_st(g, s, t)
        assert cert.value == pk.value
        assert len(cert.separator) <= cert.value


def test_xpaths_triangle():
    g, X = x_triangle()
    cert = solve_xpaths(g, X)
    assert cert.value == 1
    assert len(cert.separator) <= 2
    assert cert.checks["cor15_bound"] is True
    assert oracle_xpaths(g, X) == (1, 2)


def test_xpaths_single_edge():
    g = build_graph(["a", "b"], [("a", "b", PLUS, MINUS)])
    cert = solve_xpaths(g, {"a", "b"})
    assert cert.value == 1
    assert len(cert.separator) == 1


def test_xpaths_edgeless():
    g = build_graph(["a", "b"], [])
    cert = solve_xpaths(g, {"a", "b"})
    assert cert.value == 0
    assert cert.separator == frozenset()


def test_xpaths_matches_oracle_randomized(rng):
    for _ in range(8):
        g = random_graph(rng, rng.randrange(2, 5), rng.randrange(0, 6))
        X = set(g.vertices[: rng.randrange(1, g.n + 1)])
        cert = solve_xpaths(g, X)
        packing, hitting = oracle_xpaths(g, X)
        assert cert.value == packing
        assert 2 * cert.value >= hitting
        assert 2 * cert.value >= len(cert.separator)


def test_no_turnaround_equality_on_dag_encoding():
    g = build_graph(
        ["a", "b", "c"],
        [("a", "b", MINUS, PLUS), ("b", "c", MINUS, PLUS)],
    )
    verdict = check_no_turnaround_equality(g, {"a"}, {"c"})
    assert verdict.applicable
    assert verdict.holds
    assert verdict.max_paths == verdict.min_separator == 1


def test_no_turnaround_equality_fig1a_not_applicable():
    g, X, Y = fig1a()
    verdict = check_no_turnaround_equality(g, X, Y)
    assert not verdict.applicable
    assert verdict.holds is None


def test_no_turnaround_equality_edgeless():
    g = build_graph(["a", "b"], [])
    verdict = check_no_turnaround_equality(g, {"a"}, {"b"})
    assert verdict.applicable
    assert verdict.holds
    assert verdict.max_paths == 0


def test_certificates_are_deterministic():
    g, X, Y = fig1b()
    a = solve_menger(g, X, Y)
    b = solve_menger(g, X, Y)
    assert a == b


def test_decomposed_links_classify_in_split_graph(rng):
    for _ in range(8):
        g = random_graph(rng, rng.randrange(3, 6), rng.randrange(1, 8))
        s, t = g.vertices[0], g.vertices[1]
        gn = normalize_terminals(g, s, t)
        if any({e.u, e.v} == {s, t} for e in gn.edges):
            continue
        g_prime, f, smap, x, xf = st_pipeline(g, s, t)
        dec = decompose_packing(g_prime, f, x, xf)
        assert sum(l.weight for l in dec.links) == xf
        for link in dec.links:
            assert classify_link(g_prime, link, {s}, {t}).kind == link.kind


def test_certificate_chain_randomized(rng):
    for _ in range(15):
        g = random_graph(rng, rng.randrange(2, 7), rng.randrange(0, 10))
        X, Y = random_sets(rng, g, overlap=bool(rng.randrange(2)))
        cert = solve_menger(g, X, Y)
        pk = oracle_max_links(g, X, Y)
        sep = oracle_min_separator(g, X, Y)
        assert cert.value == pk.value
        assert pk.value >= sep.size
        assert len(cert.separator) <= cert.value
        assert cert.checks["duality"]
        if X and Y:
            assert cert.checks["separator_verified"] is True
            assert cert.value == sum(l.weight for l in cert.links)
