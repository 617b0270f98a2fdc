"""Two-terminal network reliability turned into a 2-dimensional instance.

Given ``G`` with terminals ``s, t`` and a rank map ``r`` (``s`` first, ``t``
last, everything else in input order), every edge is subdivided at integer
levels and the product ``G' x [0, 1]`` is built with the bottom and top copies
collapsed level by level. Each subedge rectangle is coned off from a
barycenter vertex, which inherits the subedge's failure probability. The
boundary circle ``Y`` (bottom arc, top arc, ``s x I``, ``t x I``) is stored as
the fence of the resulting complex so the criterion solver applies unchanged.

Vertical segments ``x x I`` of distinct points at the same level would share
both endpoints, so those get a midpoint vertex; a rectangle then has up to six
triangles instead of four.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from scipy.cluster.hierarchy import DisjointSet

from . import gf2
from .complex import SimplicialComplex2
from .errors import DegenerateGraph, TooLarge
from .persistence import fence_system

Prob = Union[float, Fraction]


@dataclass
class ReliabilityInstance:
    vertices: list[str]
    edges: list[tuple[str, str]]
    s: str
    t: str
    p: dict[tuple[str, str], Prob]  # edge failure probability, keyed like ``edges``
    q: Prob = 1

    def __post_init__(self):
        if not self.vertices:
            raise DegenerateGraph("graph has no vertices")
        if self.s == self.t:
            raise DegenerateGraph("terminals must differ")
        vs = set(self.vertices)
        for x in (self.s, self.t):
            if x not in vs:
                raise DegenerateGraph(f"terminal {x!r} is not a vertex")
        seen = set()
        for u, v in self.edges:
            if u not in vs or v not in vs or u == v:
                raise DegenerateGraph(f"bad edge ({u}, {v})")
            key = frozenset((u, v))
            if key in seen:
                raise DegenerateGraph(f"duplicate edge ({u}, {v})")
            seen.add(key)
            if (u, v) not in self.p or not 0 <= self.p[(u, v)] <= 1:
                raise ValueError(f"edge ({u}, {v}) needs a failure probability in [0, 1]")
        if not 0 < self.q <= 1:
            raise ValueError("threshold q must lie in (0, 1]")


@dataclass
class Reduced2DInstance:
    X: SimplicialComplex2
    fail_prob: dict[int, Prob]  # non-Y vertex index -> failure probability
    rank: dict[str, int]
    rectangles: dict[str, tuple[tuple[str, str], int]] = field(default_factory=dict)

    @property
    def y_edges(self) -> tuple[tuple[int, int], ...]:
        return self.X.fence_edges


def rank_map(inst: ReliabilityInstance) -> dict[str, int]:
    middle = [v for v in inst.vertices if v not in (inst.s, inst.t)]
    r = {inst.s: 1, inst.t: len(inst.vertices)}
    r.update({v: k for k, v in enumerate(middle, start=2)})
    return r


def reduce_instance(inst: ReliabilityInstance) -> Reduced2DInstance:
    r = rank_map(inst)
    n = len(inst.vertices)
    if n < 2:
        raise DegenerateGraph("need at least the two terminals")

    # G' points by level; each subedge is (edge index, level j) spanning [j, j+1].
    at_level: dict[int, list[str]] = {j: [] for j in range(1, n + 1)}
    for v in inst.vertices:
        at_level[r[v]].append(v)
    subedges: list[tuple[int, int, str, str]] = []
    for k, (u, v) in enumerate(inst.edges):
        if r[u] > r[v]:
            u, v = v, u
        pts = [u] + [f"e{k}@{j}" for j in range(r[u] + 1, r[v])] + [v]
        for j in range(r[u] + 1, r[v]):
            at_level[j].append(f"e{k}@{j}")
        for j, (x, y) in enumerate(zip(pts, pts[1:]), start=r[u]):
            subedges.append((k, j, x, y))

    bottom = [f"B{j}" for j in range(1, n + 1)]
    top = [f"T{j}" for j in range(1, n + 1)]
    labels: list[str] = bottom + top
    edges: set[tuple[str, str]] = set()
    triangles: list[tuple[str, str, str]] = []
    fail_prob: dict[str, Prob] = {}

    # vertical path of each G' point x: B_j -> [M_x] -> T_j
    vertical: dict[str, list[str]] = {}
    for j, pts in at_level.items():
        for x in pts:
            if len(pts) > 1:
                mid = f"M[{x}]"
                labels.append(mid)
                fail_prob[mid] = 0
                vertical[x] = [f"B{j}", mid, f"T{j}"]
            else:
                vertical[x] = [f"B{j}", f"T{j}"]
            edges.update(zip(vertical[x], vertical[x][1:]))

    rectangles: dict[str, tuple[tuple[str, str], int]] = {}
    for k, j, x, y in subedges:
        u, v = inst.edges[k]
        c = f"C[{u}-{v}@{j}]"
        labels.append(c)
        low_level = min(r[u], r[v])
        fail_prob[c] = inst.p[(u, v)] if j == low_level else 0
        rectangles[c] = ((u, v), j)
        cycle = [f"B{j}", f"B{j + 1}", *vertical[y][1:-1], f"T{j + 1}", f"T{j}",
                 *reversed(vertical[x][1:-1])]
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            edges.add((a, b))
            edges.add((c, a))
            triangles.append((c, a, b))

    fence = bottom + list(reversed(top))
    edges.update(zip(fence, fence[1:] + fence[:1]))
    canon = {frozenset(e): e for e in edges}
    X = SimplicialComplex2.from_simplices(labels, fence, canon.values(), triangles)
    return Reduced2DInstance(
        X,
        {X.index(lab): p for lab, p in fail_prob.items()},
        r,
        rectangles,
    )


MAX_TRIANGLES = 10_000


def count_fundamental_classes(x: Reduced2DInstance) -> int:
    """Number of triangle chains whose boundary is exactly the ``Y`` cycle."""
    if len(x.X.triangles) > MAX_TRIANGLES:
        raise TooLarge(f"{len(x.X.triangles)} triangles exceeds {MAX_TRIANGLES}")
    _, cols, target = fence_system(x.X)
    return gf2.count_solutions(cols, target)


def _connected(vertices, edges, s, t) -> bool:
    ds = DisjointSet(vertices)
    for u, v in edges:
        ds.merge(u, v)
    return ds.connected(s, t)


def reliability_bruteforce_1d(inst: ReliabilityInstance, max_edges: int = 20) -> float:
    """P(s and t joined by a path of surviving edges), summed over all failure patterns."""
    m = len(inst.edges)
    if m > max_edges:
        raise TooLarge(f"{m} edges exceeds the limit {max_edges}")
    ps = [inst.p[e] for e in inst.edges]
    terms = []
    for alive in itertools.product((False, True), repeat=m):
        kept = [e for e, a in zip(inst.edges, alive) if a]
        if _connected(inst.vertices, kept, inst.s, inst.t):
            terms.append(math.prod(float(1 - p) if a else float(p) for p, a in zip(ps, alive)))
    return math.fsum(terms)


def reliability_bruteforce_2d(x: Reduced2DInstance, max_vertices: int = 20) -> float:
    """P(a fundamental class survives), exhausting vertex failure patterns.

    Vertices with probability 0 or 1 have a single outcome; the others are
    branched on. A branch whose surviving triangles already solve the system
    (or cannot solve it even if every undecided vertex survives) is summed in
    one step, which is exact because solvability only grows with survivors.
    """
    X = x.X
    tris, cols, target = fence_system(X)
    uncertain = sorted(v for v, p in x.fail_prob.items() if 0 < p < 1)
    if len(uncertain) > max_vertices:
        raise TooLarge(f"{len(uncertain)} uncertain vertices exceeds the limit {max_vertices}")
    dead_always = {v for v, p in x.fail_prob.items() if p == 1}
    undecided = set(uncertain)
    base = gf2.Basis()
    by_vertex: dict[int, list[int]] = {v: [] for v in uncertain}
    for tri, col in zip(tris, cols):
        if dead_always.intersection(tri):
            continue
        owners = undecided.intersection(tri)
        if owners:
            # rectangles have one barycenter, so at most one uncertain owner
            for v in owners:
                by_vertex[v].append(col)
            if len(owners) > 1:
                raise ValueError("triangle with two uncertain vertices")
        else:
            base.add(col)
    q = {v: float(x.fail_prob[v]) for v in uncertain}
    total: list[float] = []

    def walk(k: int, basis: gf2.Basis, weight: float) -> None:
        if weight == 0.0:
            return
        if basis.contains(target):
            total.append(weight)
            return
        optimistic = basis.copy()
        for v in uncertain[k:]:
            for col in by_vertex[v]:
                optimistic.add(col)
        if not optimistic.contains(target):
            return
        v = uncertain[k]
        walk(k + 1, basis, weight * q[v])
        alive = basis.copy()
        for col in by_vertex[v]:
            alive.add(col)
        walk(k + 1, alive, weight * (1.0 - q[v]))

    walk(0, base, 1.0)
    return math.fsum(total)


def count_st_paths(inst: ReliabilityInstance) -> int:
    """Simple s-t paths by exhaustive DFS."""
    nb: dict[str, list[str]] = {v: [] for v in inst.vertices}
    for u, v in inst.edges:
        nb[u].append(v)
        nb[v].append(u)

    def dfs(v: str, seen: set[str]) -> int:
        if v == inst.t:
            return 1
        return sum(dfs(w, seen | {w}) for w in nb[v] if w not in seen)

    return dfs(inst.s, {inst.s})


def cycle_rank(inst: ReliabilityInstance) -> int:
    ds = DisjointSet(inst.vertices)
    for u, v in inst.edges:
        ds.merge(u, v)
    return len(inst.edges) - len(inst.vertices) + ds.n_subsets


def diamond_chain(blocks: Sequence[int], p: Prob | Mapping | None = None,
                  rng: random.Random | None = None) -> ReliabilityInstance:
    """Series of blocks between ``s`` and ``t``, ranked layer by layer.

    Block value ``0`` is a single edge; ``k >= 1`` is a pair of internally
    disjoint paths with ``k`` inner vertices each. Every simple s-t path is
    monotone in rank and the path count is ``2 ** (#pair blocks)``.
    """
    vertices = ["s"]
    edges: list[tuple[str, str]] = []
    cur = "s"
    for bi, k in enumerate(blocks):
        end = "t" if bi == len(blocks) - 1 else f"j{bi}"
        if k == 0:
            edges.append((cur, end))
        else:
            left = [f"a{bi}_{i}" for i in range(k)]
            right = [f"b{bi}_{i}" for i in range(k)]
            for i in range(k):  # interleave so ranks rise layer by layer
                vertices += [left[i], right[i]]
            for path in (left, right):
                chain = [cur, *path, end]
                edges += list(zip(chain, chain[1:]))
        if end != "t":
            vertices.append(end)
        cur = end
    vertices.append("t")
    probs = _assign_probs(edges, p, rng)
    return ReliabilityInstance(vertices, edges, "s", "t", probs)


def random_graph_instance(rng: random.Random, n: int, m: int,
                          p: Prob | None = None) -> ReliabilityInstance:
    vertices = ["s", *[f"u{i}" for i in range(n - 2)], "t"]
    rng.shuffle(vertices)
    pairs = list(itertools.combinations(vertices, 2))
    edges = rng.sample(pairs, min(m, len(pairs)))
    return ReliabilityInstance(vertices, edges, "s", "t", _assign_probs(edges, p, rng))


def _assign_probs(edges, p, rng) -> dict[tuple[str, str], Prob]:
    if isinstance(p, Mapping):
        return {e: p[e] for e in edges}
    if p is not None:
        return {e: p for e in edges}
    rng = rng or random.Random(0)
    return {e: Fraction(rng.randint(0, 8), 8) for e in edges}
