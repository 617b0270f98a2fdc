import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from covfail.complex import build_rips_2skeleton, validate_fence
from covfail.generate import (
    UNIT_SQUARE,
    GeneratorSpec,
    coverage_oracle,
    fence_points,
    generate,
    inside,
    is_convex,
    polygon_area,
    random_instances,
)
from covfail.graphfile import emit_graph
from covfail.persistence import dsg_oracle


def test_default_cover_radius():
    spec = GeneratorSpec(r_b=0.3)
    assert spec.r_c == pytest.approx(0.3 / math.sqrt(3))
    assert spec.spacing == pytest.approx(0.15)


def test_small_cover_radius_needs_override():
    with pytest.raises(ValueError, match="below"):
        GeneratorSpec(r_b=0.4, r_c=0.1)
    spec = GeneratorSpec(r_b=0.4, r_c=0.1, allow_small_rc=True)
    assert spec.warnings


def test_non_convex_domain_rejected():
    with pytest.raises(ValueError):
        GeneratorSpec(polygon=[(0, 0), (2, 0), (1, 0.2), (2, 2), (0, 2)])


def test_geometry_helpers():
    assert polygon_area(UNIT_SQUARE) == 1.0
    assert is_convex(UNIT_SQUARE)
    pts = np.array([[0.5, 0.5], [1.0, 0.5], [1.5, 0.5]])
    assert inside(UNIT_SQUARE, pts).tolist() == [True, True, False]
    assert inside(UNIT_SQUARE, pts, strict=True).tolist() == [True, False, False]


@given(st.floats(0.05, 0.9))
def test_fence_spacing(spacing):
    pts = fence_points(UNIT_SQUARE, spacing)
    gaps = [math.dist(p, q) for p, q in zip(pts, pts[1:] + pts[:1])]
    assert max(gaps) <= spacing + 1e-12
    for corner in UNIT_SQUARE:
        assert any(math.dist(corner, p) < 1e-12 for p in pts)


def test_fence_only_instance_fails():
    g = generate(GeneratorSpec(n=0, r_b=0.4, seed=1))
    assert all(n.fence for n in g.nodes)
    assert validate_fence(g).ok
    assert not dsg_oracle(build_rips_2skeleton(g)).passed


def test_deterministic_per_seed():
    a = emit_graph(generate(GeneratorSpec(n=30, seed=4)))
    b = emit_graph(generate(GeneratorSpec(n=30, seed=4)))
    c = emit_graph(generate(GeneratorSpec(n=30, seed=5)))
    assert a == b and a != c


def test_mean_degree_eight_instance_is_valid():
    n = 50
    # expected degree ~ (n - 1) * pi * r_b^2 on the unit square
    r_b = math.sqrt(8 / ((n - 1) * math.pi))
    g = generate(GeneratorSpec(n=n, r_b=r_b, seed=0))
    assert validate_fence(g).ok
    assert sum(1 for n_ in g.nodes if not n_.fence) == n


def test_coverage_single_disk():
    r = 0.3
    half = 0.99 * r / math.sqrt(2)
    square = [(-half, -half), (half, -half), (half, half), (-half, half)]
    assert coverage_oracle([(0.0, 0.0)], r, square).covered
    res = coverage_oracle([(0.0, 0.0)], r / 2, square)
    assert not res.covered and res.worst_distance > r / 2


def test_coverage_empty_node_set():
    res = coverage_oracle([], 0.5, UNIT_SQUARE)
    assert not res.covered and res.worst_distance == math.inf


def test_coverage_rejects_bad_step():
    with pytest.raises(ValueError):
        coverage_oracle([(0, 0)], 0.5, UNIT_SQUARE, h=0)


def test_random_instances_bounds():
    for name, g in random_instances(3, 40, max_nodes=25, max_interior=10):
        assert validate_fence(g).ok
        assert len(g.nodes) <= 25
        assert len(g.interior_ids) <= 10
