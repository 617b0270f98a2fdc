"""Synthetic sensor networks and the geometric coverage ground truth."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .complex import CommunicationGraph, Node, rips_graph_from_points

Point = tuple[float, float]

UNIT_SQUARE: tuple[Point, ...] = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


@dataclass
class GeneratorSpec:
    polygon: Sequence[Point] = UNIT_SQUARE
    n: int = 20
    r_b: float = 0.4
    r_c: float | None = None  # defaults to r_b / sqrt(3)
    seed: int = 0
    spacing: float | None = None  # fence spacing, defaults to r_b / 2
    allow_small_rc: bool = False
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.r_c is None:
            self.r_c = self.r_b / math.sqrt(3)
        if self.spacing is None:
            self.spacing = self.r_b / 2
        if self.r_c < self.r_b / math.sqrt(3) * (1 - 1e-12):
            msg = f"r_c={self.r_c:.6g} is below r_b/sqrt(3)={self.r_b / math.sqrt(3):.6g}"
            if not self.allow_small_rc:
                raise ValueError(msg)
            self.warnings.append(msg)
        if not 0 < self.spacing < self.r_b:
            raise ValueError("fence spacing must lie in (0, r_b)")
        if self.n < 0:
            raise ValueError("sensor count must be nonnegative")
        if len(self.polygon) < 3 or not is_convex(self.polygon):
            raise ValueError("domain must be a convex polygon with >= 3 vertices")


def polygon_area(poly: Sequence[Point]) -> float:
    s = 0.0
    for (x0, y0), (x1, y1) in zip(poly, list(poly[1:]) + [poly[0]]):
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def is_convex(poly: Sequence[Point]) -> bool:
    signs = set()
    k = len(poly)
    for i in range(k):
        (ax, ay), (bx, by), (cx, cy) = poly[i], poly[(i + 1) % k], poly[(i + 2) % k]
        cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
        if cross:
            signs.add(cross > 0)
    return len(signs) == 1


def inside(poly: Sequence[Point], pts: np.ndarray, strict: bool = False) -> np.ndarray:
    """Point-in-convex-polygon test, vectorised over rows of ``pts``."""
    P = np.asarray(poly, dtype=float)
    orient = 1.0 if sum(
        P[i, 0] * P[(i + 1) % len(P), 1] - P[(i + 1) % len(P), 0] * P[i, 1] for i in range(len(P))
    ) > 0 else -1.0
    ok = np.ones(len(pts), dtype=bool)
    for i in range(len(P)):
        a, b = P[i], P[(i + 1) % len(P)]
        cross = orient * ((b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0]))
        ok &= cross > 0 if strict else cross >= -1e-12
    return ok


def fence_points(poly: Sequence[Point], spacing: float) -> list[Point]:
    """Polygon corners plus evenly spaced points, consecutive gaps <= spacing."""
    out: list[Point] = []
    for (x0, y0), (x1, y1) in zip(poly, list(poly[1:]) + [poly[0]]):
        length = math.hypot(x1 - x0, y1 - y0)
        k = max(1, math.ceil(length / spacing - 1e-9))
        for i in range(k):
            out.append((x0 + (x1 - x0) * i / k, y0 + (y1 - y0) * i / k))
    return out


def generate(spec: GeneratorSpec) -> CommunicationGraph:
    """Deterministic random network for ``spec.seed``."""
    rng = np.random.default_rng(spec.seed)
    fence = fence_points(spec.polygon, spec.spacing)
    P = np.asarray(spec.polygon, dtype=float)
    lo, hi = P.min(axis=0), P.max(axis=0)
    interior: list[np.ndarray] = []
    while len(interior) < spec.n:
        cand = rng.uniform(lo, hi, size=(max(16, 2 * spec.n), 2))
        interior.extend(cand[inside(spec.polygon, cand, strict=True)])
    points = [(f"f{i}", float(x), float(y)) for i, (x, y) in enumerate(fence)]
    points += [(f"n{i}", float(x), float(y)) for i, (x, y) in enumerate(interior[: spec.n])]
    g = rips_graph_from_points(points, spec.r_b, [p[0] for p in points[: len(fence)]])
    g.params.update(rb=spec.r_b, rc=float(spec.r_c), area=polygon_area(spec.polygon))
    return g


@dataclass(frozen=True)
class CoverageResult:
    covered: bool
    worst_point: Point | None
    worst_distance: float


def coverage_oracle(
    positions: Sequence[Point],
    r_c: float,
    polygon: Sequence[Point],
    h: float | None = None,
) -> CoverageResult:
    """Grid test of whether the radius-``r_c`` disks cover the polygon.

    Gaps narrower than the grid step can be missed.
    """
    h = r_c / 50 if h is None else h
    if not h > 0:
        raise ValueError("grid step must be positive")
    P = np.asarray(polygon, dtype=float)
    lo, hi = P.min(axis=0), P.max(axis=0)
    xs = np.arange(lo[0], hi[0] + h / 2, h)
    ys = np.arange(lo[1], hi[1] + h / 2, h)
    grid = np.stack(np.meshgrid(xs, ys), axis=-1).reshape(-1, 2)
    grid = grid[inside(polygon, grid)]
    if len(grid) == 0:
        return CoverageResult(True, None, 0.0)
    if len(positions) == 0:
        return CoverageResult(False, tuple(grid[0]), math.inf)
    dist, _ = cKDTree(np.asarray(positions, dtype=float)).query(grid)
    k = int(np.argmax(dist))
    worst = float(dist[k])
    return CoverageResult(worst <= r_c, (float(grid[k, 0]), float(grid[k, 1])), worst)


def random_abstract_graph(
    rng: random.Random,
    n_fence: int,
    n_interior: int,
    p_edge: float,
    p_fence_link: float | None = None,
) -> CommunicationGraph:
    """Random (non-geometric) network: fence cycle plus random links.

    Useful for stressing the algebra on shapes a planar point set rarely
    produces (non-trivial H2, disconnected links, fence chords).
    """
    fence = [f"v{i}" for i in range(1, n_fence + 1)]
    inner = [f"w{i}" for i in range(1, n_interior + 1)]
    nodes = [Node(v, True) for v in fence] + [Node(w) for w in inner]
    edges = list(zip(fence, fence[1:] + fence[:1]))
    pf = p_edge if p_fence_link is None else p_fence_link
    for i, u in enumerate(inner):
        for w in inner[i + 1:]:
            if rng.random() < p_edge:
                edges.append((u, w))
        for v in fence:
            if rng.random() < pf:
                edges.append((u, v))
    return CommunicationGraph(nodes, edges, fence)


def random_instances(
    seed: int,
    count: int,
    max_nodes: int = 25,
    max_interior: int | None = None,
    geometric_share: float = 0.5,
):
    """Yield ``count`` small mixed instances as ``(name, graph)`` pairs.

    Geometric draws sit in the unit square with ``r_b`` large enough that the
    fence stays short; abstract draws cover shapes the plane rarely gives.
    """
    rng = random.Random(seed)
    cap = max_nodes if max_interior is None else max_interior
    for k in range(count):
        if rng.random() < geometric_share:
            r_b = rng.uniform(0.5, 0.95)
            n_fence = len(fence_points(UNIT_SQUARE, r_b / 2))
            n = rng.randint(0, max(0, min(cap, max_nodes - n_fence)))
            spec = GeneratorSpec(n=n, r_b=r_b, seed=rng.randrange(2**32))
            yield f"geo{k}", generate(spec)
        else:
            n_fence = rng.randint(3, 8)
            n = rng.randint(1, max(1, min(cap, max_nodes - n_fence)))
            g = random_abstract_graph(rng, n_fence, n, rng.uniform(0.3, 0.85))
            yield f"abs{k}", g


def delaunay_instance(seed: int, n_fence: int, n_interior: int, n_leaves: int = 0) -> CommunicationGraph:
    """Delaunay triangulation of a convex fence polygon and random interior points.

    The fence is a regular polygon so every fence point is a hull vertex.
    Each leaf is an extra node joined to both ends of a random edge; its link
    is a single edge, so it is never flagged. Such networks rarely contain a
    4-clique, which keeps the 2-skeleton free of 2-cycles.
    """
    from scipy.spatial import Delaunay

    if n_fence < 3:
        raise ValueError("need at least 3 fence nodes")
    rng = np.random.default_rng(seed)
    ang = 2 * np.pi * np.arange(n_fence) / n_fence
    fence_xy = np.column_stack([0.5 + 0.5 * np.cos(ang), 0.5 + 0.5 * np.sin(ang)])
    inner: list[np.ndarray] = []
    while len(inner) < n_interior:
        cand = rng.uniform(0, 1, size=(4 * n_interior + 4, 2))
        inner.extend(cand[inside([tuple(p) for p in fence_xy], cand, strict=True)])
    xy = np.vstack([fence_xy, np.asarray(inner[:n_interior]).reshape(-1, 2)])
    ids = [f"f{i}" for i in range(n_fence)] + [f"n{i}" for i in range(n_interior)]
    edges: set[tuple[int, int]] = set()
    for simplex in Delaunay(xy).simplices:
        a, b, c = sorted(int(x) for x in simplex)
        edges.update({(a, b), (a, c), (b, c)})
    edges.update((min(i, (i + 1) % n_fence), max(i, (i + 1) % n_fence)) for i in range(n_fence))
    nodes = [Node(ids[k], k < n_fence, (float(x), float(y))) for k, (x, y) in enumerate(xy)]
    out_edges = [(ids[a], ids[b]) for a, b in sorted(edges)]
    pool = sorted(edges)
    for j in range(n_leaves):
        a, b = pool[int(rng.integers(len(pool)))]
        leaf = f"x{j}"
        mid = (xy[a] + xy[b]) / 2
        nodes.append(Node(leaf, False, (float(mid[0]), float(mid[1]))))
        out_edges += [(ids[a], leaf), (ids[b], leaf)]
    return CommunicationGraph(nodes, out_edges, ids[:n_fence])
