import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from covfail.complex import (
    CommunicationGraph,
    Node,
    SimplicialComplex2,
    betti_numbers,
    build_rips_2skeleton,
    graph_betti,
    link,
    remove_vertices,
    restrict_link,
    rips_graph_from_points,
    validate_fence,
)
from covfail.errors import FenceGapError, FenceInvalid, FenceRemovalError, UnknownVertex
from covfail.fixtures import fence_graph, pair_graph, wheel_graph
from oracles import abstract_complexes, boundary2, rank_gf2


def brute_triangles(g: CommunicationGraph) -> set[frozenset[str]]:
    adj = {frozenset(e) for e in g.edges}
    ids = [n.id for n in g.nodes]
    return {
        frozenset(t)
        for t in itertools.combinations(ids, 3)
        if all(frozenset(p) in adj for p in itertools.combinations(t, 2))
    }


@pytest.mark.parametrize(
    "graph, counts",
    [
        (wheel_graph(6), (7, 12, 6)),
        (fence_graph(5), (5, 5, 0)),
        (pair_graph(), (8, 19, 18)),
    ],
)
def test_fixture_sizes(graph, counts):
    K = build_rips_2skeleton(graph)
    assert (len(K.vertices), len(K.edges), len(K.triangles)) == counts
    assert K.labeled()[2] == brute_triangles(graph)
    assert K.clique_complete


def test_pair_triangle_split():
    K = build_rips_2skeleton(pair_graph())
    _, _, tris = K.labeled()
    with_a = {t for t in tris if "a" in t and "b" not in t}
    with_b = {t for t in tris if "b" in t and "a" not in t}
    both = {t for t in tris if {"a", "b"} <= t}
    assert len(with_a) == len(with_b) == len(both) == 6


def test_validate_fence_reports_every_gap():
    g = fence_graph(5)
    g.edges.remove(("v2", "v3"))
    g.edges.remove(("v5", "v1"))
    diag = validate_fence(g)
    assert not diag.ok
    assert set(map(frozenset, diag.missing_edges)) == {frozenset(("v2", "v3")), frozenset(("v5", "v1"))}
    with pytest.raises(FenceInvalid):
        diag.raise_if_invalid()


@pytest.mark.parametrize("order", [["v1", "v2"], ["v1", "v2", "v1"]])
def test_short_or_repeating_fence_rejected(order):
    g = fence_graph(3)
    g.fence_order = order
    assert not validate_fence(g).ok


def test_rips_edges_use_strict_distance():
    pts = [("p", 0.0, 0.0), ("q", 1.0, 0.0), ("r", 0.5, 0.5)]
    # r_b exactly equal to |pq| drops that pair, which here is a fence gap
    with pytest.raises(FenceGapError):
        rips_graph_from_points(pts, 1.0, ["p", "q", "r"])
    g = rips_graph_from_points(pts, 1.0 + 1e-12, ["p", "q", "r"])
    assert {frozenset(e) for e in g.edges} == {frozenset("pq"), frozenset("pr"), frozenset("qr")}
    assert g.node("r").pos == (0.5, 0.5)


def test_rips_needs_three_fence_nodes():
    with pytest.raises(FenceInvalid):
        rips_graph_from_points([("p", 0, 0), ("q", 0.1, 0)], 1.0, ["p", "q"])


@given(
    st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=0, max_size=12),
    st.floats(0.3, 0.9),
)
def test_rips_edges_match_pairwise_distances(interior, r_b):
    fence = [("f0", 0.0, 0.0), ("f1", 0.2, 0.0), ("f2", 0.1, 0.15)]
    pts = fence + [(f"x{i}", x, y) for i, (x, y) in enumerate(interior)]
    g = rips_graph_from_points(pts, r_b, ["f0", "f1", "f2"])
    want = {
        frozenset((p[0], q[0]))
        for p, q in itertools.combinations(pts, 2)
        if math.dist(p[1:], q[1:]) < r_b
    }
    assert {frozenset(e) for e in g.edges} == want


def test_from_simplices_rejects_missing_faces():
    with pytest.raises(UnknownVertex):
        SimplicialComplex2.from_simplices("abc", "abc", [("a", "b"), ("b", "c"), ("a", "c")], [("a", "b", "d")])
    with pytest.raises(ValueError, match="missing edge"):
        SimplicialComplex2.from_simplices("abcd", "abc", [("a", "b"), ("b", "c"), ("a", "c"), ("a", "d")], [("a", "c", "d")])


def test_unknown_label(wheel):
    with pytest.raises(UnknownVertex, match="zz"):
        wheel.index("zz")


def test_remove_vertices_and_link(wheel):
    h = wheel.index("h")
    lk = link(wheel, h)
    verts, edges = lk.labeled(wheel.labels)
    assert verts == {f"v{i}" for i in range(1, 7)}
    assert len(edges) == 6
    assert graph_betti(lk) == (1, 1)
    R = remove_vertices(wheel, {h})
    assert len(R.triangles) == 0 and len(R.edges) == 6
    assert R.labels == wheel.labels
    with pytest.raises(UnknownVertex):
        R.index("h")
    with pytest.raises(FenceRemovalError):
        remove_vertices(wheel, {wheel.index("v1")})


@given(abstract_complexes(), st.data())
def test_link_restriction_commutes_with_removal(K, data):
    """Lk(v, K_w) is Lk(v, K) with the simplices through w deleted."""
    if len(K.interior) < 2:
        return
    w, v = data.draw(st.permutations(sorted(K.interior)))[:2]
    Kw = remove_vertices(K, {w})
    got = restrict_link(link(K, v), Kw)
    want = link(Kw, v)
    assert got == want


@given(abstract_complexes())
def test_betti_numbers_against_dense_ranks(K):
    b0, b1, b2 = betti_numbers(K)
    # Euler characteristic
    assert b0 - b1 + b2 == len(K.vertices) - len(K.edges) + len(K.triangles)
    d2 = boundary2(K)
    r2 = rank_gf2(d2) if d2.size else 0
    assert b2 == len(K.triangles) - r2
    assert b0 >= 1


def test_pair_has_second_homology(pair):
    assert betti_numbers(pair)[2] > 0


def test_fence_cycle_homology(fence5):
    assert betti_numbers(fence5) == (1, 1, 0)
