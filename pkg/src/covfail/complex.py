"""Rips 2-skeletons with a fence subcomplex.

Vertices are stored as dense integer indices into ``labels``; every public
result that leaves the package (JSON, reports) is translated back to labels.
A complex keeps the full label universe after vertex removal so indices stay
comparable between a complex and its subcomplexes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from . import gf2
from .errors import FenceGapError, FenceInvalid, FenceRemovalError, UnknownVertex

if TYPE_CHECKING:
    from .probability import FailureSpec

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


@dataclass
class Node:
    id: str
    fence: bool = False
    pos: tuple[float, float] | None = None
    fail: "FailureSpec | None" = None


@dataclass
class CommunicationGraph:
    """Who-hears-whom data: nodes, symmetric links and the cyclic fence."""

    nodes: list[Node]
    edges: list[tuple[str, str]]
    fence_order: list[str]
    params: dict[str, float] = field(default_factory=dict)

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise UnknownVertex(node_id)

    @property
    def interior_ids(self) -> list[str]:
        return [n.id for n in self.nodes if not n.fence]

    def positions(self) -> dict[str, tuple[float, float]] | None:
        if any(n.pos is None for n in self.nodes):
            return None
        return {n.id: n.pos for n in self.nodes}


@dataclass(frozen=True)
class FenceDiagnostics:
    ok: bool
    problems: tuple[str, ...] = ()
    missing_edges: tuple[tuple[str, str], ...] = ()

    def raise_if_invalid(self) -> None:
        if not self.ok:
            raise FenceInvalid("; ".join(self.problems), list(self.problems))


def validate_fence(g: CommunicationGraph) -> FenceDiagnostics:
    """Check the fence is a simple cycle of >= 3 adjacent, consistently flagged nodes."""
    problems: list[str] = []
    missing: list[tuple[str, str]] = []
    fence = list(g.fence_order)
    declared = {n.id: n for n in g.nodes}
    if len(fence) < 3:
        problems.append(f"fence cycle too short: {len(fence)} node(s), need >= 3")
    if len(set(fence)) != len(fence):
        dup = sorted({f for f in fence if fence.count(f) > 1})
        problems.append(f"fence is not a simple cycle; repeated node(s) {dup}")
    for f in fence:
        if f not in declared:
            problems.append(f"fence node {f!r} is not declared")
        elif not declared[f].fence:
            problems.append(f"node {f!r} is in the fence order but not flagged as fence")
    fence_set = set(fence)
    for n in g.nodes:
        if n.fence and n.id not in fence_set:
            problems.append(f"node {n.id!r} is flagged as fence but missing from the fence order")
    adjacent = {frozenset(e) for e in g.edges}
    if len(fence) >= 2:
        pairs = list(zip(fence, fence[1:] + fence[:1])) if len(fence) >= 3 else [(fence[0], fence[1])]
        for u, v in pairs:
            if u != v and frozenset((u, v)) not in adjacent:
                missing.append((u, v))
                problems.append(f"consecutive fence nodes ({u}, {v}) are not adjacent")
    return FenceDiagnostics(not problems, tuple(problems), tuple(missing))


@dataclass(frozen=True)
class LinkGraph:
    """A 1-complex, typically the link of a vertex."""

    vertices: frozenset[int]
    edges: frozenset[Edge]

    def labeled(self, labels: Sequence[str]) -> tuple[frozenset[str], frozenset[frozenset[str]]]:
        return (
            frozenset(labels[v] for v in self.vertices),
            frozenset(frozenset((labels[u], labels[v])) for u, v in self.edges),
        )


@dataclass(frozen=True)
class SimplicialComplex2:
    labels: tuple[str, ...]
    vertices: frozenset[int]
    edges: frozenset[Edge]
    triangles: frozenset[Triangle]
    fence: tuple[int, ...]
    positions: Mapping[int, tuple[float, float]] | None = field(default=None, compare=False, repr=False)
    clique_complete: bool = field(default=False, compare=False)

    @classmethod
    def from_simplices(
        cls,
        labels: Sequence[str],
        fence: Sequence[str],
        edges: Iterable[tuple[str, str]],
        triangles: Iterable[tuple[str, str, str]] = (),
        *,
        vertices: Iterable[str] | None = None,
        positions: Mapping[str, tuple[float, float]] | None = None,
        clique_complete: bool = False,
    ) -> "SimplicialComplex2":
        """Build from labelled simplices; missing faces are rejected, not added."""
        labels = tuple(labels)
        idx = {lab: i for i, lab in enumerate(labels)}
        if len(idx) != len(labels):
            raise ValueError("vertex labels must be unique")

        def get(lab: str) -> int:
            try:
                return idx[lab]
            except KeyError:
                raise UnknownVertex(lab) from None

        verts = frozenset(get(v) for v in (labels if vertices is None else vertices))
        es = frozenset(_edge(get(u), get(v)) for u, v in edges)
        ts = frozenset(_tri(get(a), get(b), get(c)) for a, b, c in triangles)
        pos = None if positions is None else {idx[k]: tuple(p) for k, p in positions.items()}
        K = cls(labels, verts, es, ts, tuple(get(f) for f in fence), pos, clique_complete)
        K.check_closed()
        return K

    # -- lookups ---------------------------------------------------------
    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            i = self._index[label]
        except KeyError:
            raise UnknownVertex(label) from None
        if i not in self.vertices:
            raise UnknownVertex(label)
        return i

    def label(self, i: int) -> str:
        return self.labels[i]

    @cached_property
    def fence_set(self) -> frozenset[int]:
        return frozenset(self.fence)

    @cached_property
    def fence_edges(self) -> tuple[Edge, ...]:
        k = len(self.fence)
        return tuple(_edge(self.fence[i], self.fence[(i + 1) % k]) for i in range(k))

    @cached_property
    def interior(self) -> frozenset[int]:
        return self.vertices - self.fence_set

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        nb: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return {v: frozenset(s) for v, s in nb.items()}

    @cached_property
    def triangles_at(self) -> dict[int, frozenset[Triangle]]:
        at: dict[int, set[Triangle]] = {v: set() for v in self.vertices}
        for t in self.triangles:
            for v in t:
                at[v].add(t)
        return {v: frozenset(s) for v, s in at.items()}

    def sorted_interior(self) -> list[int]:
        return sorted(self.interior)

    def labeled(self) -> tuple[frozenset, frozenset, frozenset]:
        """Label-based view used for comparing complexes with different index universes."""
        lab = self.labels
        return (
            frozenset(lab[v] for v in self.vertices),
            frozenset(frozenset((lab[u], lab[v])) for u, v in self.edges),
            frozenset(frozenset(lab[x] for x in t) for t in self.triangles),
        )

    @property
    def n_simplices(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.triangles)

    def check_closed(self) -> None:
        for u, v in self.edges:
            if u == v or u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge ({self.labels[u]}, {self.labels[v]}) has a missing vertex")
        for t in self.triangles:
            if len(set(t)) != 3:
                raise ValueError(f"degenerate triangle {t}")
            for e in itertools.combinations(t, 2):
                if e not in self.edges:
                    names = tuple(self.labels[x] for x in t)
                    raise ValueError(f"triangle {names} is missing edge {tuple(self.labels[x] for x in e)}")
        for e in self.fence_edges:
            if e not in self.edges:
                raise FenceInvalid(f"fence edge ({self.labels[e[0]]}, {self.labels[e[1]]}) is missing")
        if len(self.fence) < 3 or len(self.fence_set) != len(self.fence):
            raise FenceInvalid("fence must be a simple cycle of at least 3 vertices")


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _tri(a: int, b: int, c: int) -> Triangle:
    return tuple(sorted((a, b, c)))  # type: ignore[return-value]


def build_rips_2skeleton(g: CommunicationGraph) -> SimplicialComplex2:
    """Clique 2-skeleton of the communication graph, fence copied over."""
    validate_fence(g).raise_if_invalid()
    labels = tuple(n.id for n in g.nodes)
    idx = {lab: i for i, lab in enumerate(labels)}
    if len(idx) != len(labels):
        raise ValueError("node ids must be unique")
    edges: set[Edge] = set()
    for u, v in g.edges:
        if u not in idx:
            raise UnknownVertex(u)
        if v not in idx:
            raise UnknownVertex(v)
        if u == v:
            raise ValueError(f"self-loop on {u!r}")
        edges.add(_edge(idx[u], idx[v]))
    nb: dict[int, set[int]] = {i: set() for i in range(len(labels))}
    for u, v in edges:
        nb[u].add(v)
        nb[v].add(u)
    triangles = set()
    for u, v in edges:
        for w in nb[u] & nb[v]:
            if w > v:
                triangles.add((u, v, w))
    pos = g.positions()
    positions = None if pos is None else {idx[k]: p for k, p in pos.items()}
    return SimplicialComplex2(
        labels,
        frozenset(range(len(labels))),
        frozenset(edges),
        frozenset(triangles),
        tuple(idx[f] for f in g.fence_order),
        positions,
        clique_complete=True,
    )


def rips_graph_from_points(
    points: Sequence[tuple[str, float, float]],
    r_b: float,
    fence_order: Sequence[str],
) -> CommunicationGraph:
    """Connect every pair of points at distance strictly below ``r_b``."""
    if not r_b > 0:
        raise ValueError("broadcast radius must be positive")
    ids = [p[0] for p in points]
    if len(set(ids)) != len(ids):
        raise ValueError("point ids must be unique")
    fence = list(fence_order)
    if len(fence) < 3:
        raise FenceInvalid(f"fence cycle too short: {len(fence)} node(s), need >= 3")
    fence_set = set(fence)
    unknown = fence_set - set(ids)
    if unknown:
        raise FenceInvalid(f"fence node(s) {sorted(unknown)} are not among the points")
    xy = np.array([[p[1], p[2]] for p in points], dtype=float).reshape(-1, 2)
    where = {pid: k for k, pid in enumerate(ids)}
    for u, v in zip(fence, fence[1:] + fence[:1]):
        d = math.dist(xy[where[u]], xy[where[v]])
        if not d < r_b:
            raise FenceGapError(f"fence neighbours ({u}, {v}) are {d:.6g} apart, not within r_b={r_b:.6g}")
    diff = xy[:, None, :] - xy[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    iu, ju = np.nonzero(np.triu(dist < r_b, k=1))
    edges = [(ids[i], ids[j]) for i, j in zip(iu.tolist(), ju.tolist())]
    nodes = [Node(pid, pid in fence_set, (float(x), float(y))) for pid, x, y in points]
    return CommunicationGraph(nodes, edges, fence)


def remove_vertices(K: SimplicialComplex2, A: Iterable[int]) -> SimplicialComplex2:
    """Largest subcomplex of ``K`` avoiding the (interior) vertex indices ``A``."""
    A = frozenset(A)
    if not A:
        return K
    if A & K.fence_set:
        bad = sorted(K.labels[v] for v in A & K.fence_set)
        raise FenceRemovalError(f"cannot remove fence vertices {bad}")
    missing = A - K.vertices
    if missing:
        raise UnknownVertex(K.labels[min(missing)])
    return SimplicialComplex2(
        K.labels,
        K.vertices - A,
        frozenset(e for e in K.edges if e[0] not in A and e[1] not in A),
        frozenset(t for t in K.triangles if not (A.intersection(t))),
        K.fence,
        K.positions,
        K.clique_complete,
    )


def link(K: SimplicialComplex2, w: int) -> LinkGraph:
    if w not in K.vertices:
        raise UnknownVertex(K.labels[w] if 0 <= w < len(K.labels) else str(w))
    edges = frozenset(_edge(*(x for x in t if x != w)) for t in K.triangles_at[w])
    return LinkGraph(K.neighbors[w], edges)


def restrict_link(lk: LinkGraph, K: SimplicialComplex2) -> LinkGraph:
    """``lk`` intersected with the subcomplex ``K``."""
    return LinkGraph(
        frozenset(v for v in lk.vertices if v in K.vertices),
        frozenset(e for e in lk.edges if e in K.edges),
    )


def graph_betti(g: LinkGraph) -> tuple[int, int]:
    ds = DisjointSet(g.vertices)
    for u, v in g.edges:
        ds.merge(u, v)
    beta0 = ds.n_subsets
    return beta0, len(g.edges) - len(g.vertices) + beta0


def betti_numbers(K: SimplicialComplex2) -> tuple[int, int, int]:
    """Z2 Betti numbers (b0, b1, b2) of the whole complex via boundary ranks."""
    edge_list = sorted(K.edges)
    eidx = {e: k for k, e in enumerate(edge_list)}
    d1 = [(1 << u) | (1 << v) for u, v in edge_list]
    d2 = [
        (1 << eidx[(a, b)]) | (1 << eidx[(a, c)]) | (1 << eidx[(b, c)])
        for a, b, c in K.triangles
    ]
    r1, r2 = gf2.rank(d1), gf2.rank(d2)
    return len(K.vertices) - r1, len(edge_list) - r1 - r2, len(d2) - r2
