import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from covfail.complex import remove_vertices
from covfail.errors import BlockError, IncidenceError
from covfail.persistence import (
    FENCE,
    SKELETON,
    TRIANGLES,
    build_boundary_matrix,
    check_dsg,
    check_dsg_prefix,
    dsg_oracle,
    move_triangles_to_end,
    reduce_complex,
    transpose,
)
from oracles import abstract_complexes, criterion_dense, ru_violations


def test_filtration_blocks(twin):
    order, D = build_boundary_matrix(twin)
    k = len(twin.fence)
    assert order.fence_end == 2 * k
    assert all(len(s) == 1 for s in order.simplices[:k])
    assert all(len(s) == 2 for s in order.simplices[k : 2 * k])
    assert order.block_of(0) == FENCE
    assert order.block_of(order.fence_end) == SKELETON
    assert order.block_of(order.tri_start) == TRIANGLES
    assert all(len(s) == 3 for s in order.simplices[order.tri_start :])
    # faces come before cofaces
    for j, col in enumerate(D.columns):
        assert all(r < j for r in col)


@pytest.mark.parametrize("name, expected", [("wheel", True), ("twin", True), ("pair", True), ("fence5", False)])
def test_fixture_verdicts(name, expected, request):
    K = request.getfixturevalue(name)
    s = reduce_complex(K)
    assert check_dsg(s).passed is expected
    assert dsg_oracle(K).passed is expected
    assert not ru_violations(s)


@given(abstract_complexes())
def test_reduction_is_a_valid_decomposition(K):
    assert ru_violations(reduce_complex(K)) == []


@given(abstract_complexes())
def test_verdict_matches_dense_criterion(K):
    assert check_dsg(reduce_complex(K)).passed == criterion_dense(K)


@given(abstract_complexes())
def test_witness_bounds_the_fence(K):
    s = reduce_complex(K)
    v = check_dsg(s)
    if not v.passed:
        return
    assert set(v.boundary) == set(s.fence_edge_ids)
    acc = 0
    for t in s.witness_chain(v.column):
        acc ^= s.boundary[t]
    assert acc == s.rcol[v.column]
    oracle = dsg_oracle(K)
    assert oracle.passed
    edges = {}
    for tri in oracle.chain:
        for e in ((tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])):
            edges[e] = edges.get(e, 0) ^ 1
    assert {e for e, odd in edges.items() if odd} == set(K.fence_edges)


def test_transposition_guards(wheel):
    s = reduce_complex(wheel)
    k = len(wheel.fence)
    with pytest.raises(BlockError):
        transpose(s, s.order.fence_end - 1)
    with pytest.raises(BlockError):
        transpose(s, s.order.tri_start - 1)
    with pytest.raises(IndexError):
        transpose(s, len(s) - 1)
    # last interior vertex is followed by its first edge
    h_pos = s.order.fence_end
    assert len(s.simplices[s.perm[h_pos]]) == 1
    with pytest.raises(IncidenceError):
        transpose(s, h_pos)
    assert not ru_violations(s)


@given(abstract_complexes(), st.integers(0, 2**32 - 1))
def test_random_transpositions_keep_invariants(K, seed):
    rng = random.Random(seed)
    s = reduce_complex(K)
    done = 0
    for _ in range(40):
        i = rng.randrange(len(s) - 1)
        try:
            transpose(s, i)
            done += 1
        except (BlockError, IncidenceError):
            continue
    assert ru_violations(s) == []


@given(abstract_complexes(), st.data())
def test_moving_triangles_out_equals_vertex_removal(K, data):
    if not K.interior:
        return
    A = data.draw(st.sets(st.sampled_from(sorted(K.interior)), min_size=1))
    s = reduce_complex(K)
    doomed = s.triangles_meeting(A)
    move_triangles_to_end(s, doomed)
    live = len(s) - len(doomed)
    assert check_dsg_prefix(s, live).passed == criterion_dense(remove_vertices(K, A))
    assert ru_violations(s) == []


def test_move_to_end_respects_live_boundary(pair):
    s = reduce_complex(pair)
    a, b = pair.index("a"), pair.index("b")
    first = s.triangles_meeting({a}) - s.triangles_meeting({b})
    s.move_to_end(first)
    s.live_count -= len(first)
    assert s.check().passed
    rest = s.triangles_meeting({b})
    s.move_to_end(rest, end=s.live_count)
    s.live_count -= len(rest)
    assert not s.check().passed
    with pytest.raises(ValueError):
        s.move_to_end({next(iter(first))}, end=s.live_count)
    with pytest.raises(BlockError):
        s.move_to_end({0})


def test_clone_is_independent(twin):
    s = reduce_complex(twin)
    c = s.clone()
    c.move_to_end(c.triangles_meeting({twin.index("a")}))
    assert s.perm == sorted(s.perm)
    assert c.perm != s.perm
