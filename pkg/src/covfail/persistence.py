"""Z2 boundary-matrix reduction with fence-first ordering and vineyard swaps.

The decomposition ``D = R U`` is stored in *simplex-id space*: every simplex
keeps the id it received in the initial filtration, ``R`` columns are int
bitsets over row ids and ``U`` rows are int bitsets over column ids. A
transposition of positions ``i, i+1`` then only touches the permutation, the
two affected columns/rows and the cached lows; conjugating by the swap
permutation is free.

Only positions order rows, so ``low`` of a column is the row id of maximal
position among its bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import gf2
from .complex import SimplicialComplex2
from .errors import BlockError, IncidenceError, InvariantBreach

Simplex = tuple[int, ...]

FENCE, SKELETON, TRIANGLES = 0, 1, 2


@dataclass(frozen=True)
class FiltrationOrder:
    """Initial filtration: fence vertices, fence edges, other vertices, other edges, triangles."""

    simplices: tuple[Simplex, ...]
    fence_end: int  # positions [0, fence_end) hold the fence subcomplex
    tri_start: int  # positions [tri_start, m) hold the triangles

    def __len__(self) -> int:
        return len(self.simplices)

    def index(self) -> dict[Simplex, int]:
        return {s: k for k, s in enumerate(self.simplices)}

    def block_of(self, k: int) -> int:
        if k < self.fence_end:
            return FENCE
        return SKELETON if k < self.tri_start else TRIANGLES


@dataclass(frozen=True)
class SparseBoundaryMatrix:
    """Column ``j`` lists the ascending row indices of the faces of simplex ``j``."""

    columns: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.columns)

    def dense(self) -> np.ndarray:
        m = len(self.columns)
        out = np.zeros((m, m), dtype=np.uint8)
        for j, col in enumerate(self.columns):
            out[list(col), j] = 1
        return out


def build_boundary_matrix(K: SimplicialComplex2) -> tuple[FiltrationOrder, SparseBoundaryMatrix]:
    fence_v = [(v,) for v in K.fence]
    fence_e = list(K.fence_edges)
    fence_e_set = set(fence_e)
    other_v = [(v,) for v in sorted(K.interior)]
    other_e = sorted(e for e in K.edges if e not in fence_e_set)
    tris = sorted(K.triangles)
    simplices: list[Simplex] = [*fence_v, *fence_e, *other_v, *other_e, *tris]
    order = FiltrationOrder(
        tuple(simplices),
        len(fence_v) + len(fence_e),
        len(simplices) - len(tris),
    )
    where = order.index()
    cols = []
    for s in simplices:
        if len(s) == 1:
            cols.append(())
        elif len(s) == 2:
            cols.append(tuple(sorted((where[(s[0],)], where[(s[1],)]))))
        else:
            a, b, c = s
            cols.append(tuple(sorted((where[(a, b)], where[(a, c)], where[(b, c)]))))
    return order, SparseBoundaryMatrix(tuple(cols))


@dataclass(frozen=True)
class Verdict:
    """Outcome of a criterion check; ``column`` is the witnessing triangle id on a pass."""

    passed: bool
    column: int | None = None
    boundary: tuple[int, ...] = ()  # R column of the witness (fence edge ids)


class RUState:
    """Reduced decomposition ``D = R U`` under the current simplex permutation."""

    def __init__(self, order: FiltrationOrder, D: SparseBoundaryMatrix):
        m = len(D)
        self.order = order
        self.simplices = order.simplices
        self.dims = [len(s) - 1 for s in order.simplices]
        self.boundary = [sum(1 << r for r in col) for col in D.columns]
        self.fence_edge_ids = frozenset(
            k for k in range(order.fence_end) if self.dims[k] == 1
        )
        self.perm = list(range(m))
        self.pos = list(range(m))
        self.rcol = list(self.boundary)
        self.urow = [1 << j for j in range(m)]
        self.low: dict[int, int] = {}
        self.pivot: dict[int, int] = {}
        self.live_count = m
        # True while every non-triangle sits at the position equal to its id;
        # rows are never triangles, so ``low`` is then just the top set bit.
        self.rows_in_id_order = True

    def __len__(self) -> int:
        return len(self.perm)

    def clone(self) -> "RUState":
        new = RUState.__new__(RUState)
        new.order = self.order
        new.simplices = self.simplices
        new.dims = self.dims
        new.boundary = self.boundary
        new.fence_edge_ids = self.fence_edge_ids
        new.perm = self.perm[:]
        new.pos = self.pos[:]
        new.rcol = self.rcol[:]
        new.urow = self.urow[:]
        new.low = dict(self.low)
        new.pivot = dict(self.pivot)
        new.live_count = self.live_count
        new.rows_in_id_order = self.rows_in_id_order
        return new

    # -- queries ---------------------------------------------------------
    def is_positive(self, sid: int) -> bool:
        return self.rcol[sid] == 0

    def low_position(self, sid: int) -> int | None:
        r = self.low.get(sid)
        return None if r is None else self.pos[r]

    def pairs(self) -> set[tuple[int, int]]:
        """Persistence pairs as (row id, column id)."""
        return {(r, c) for c, r in self.low.items()}

    def triangle_ids(self) -> range:
        return range(self.order.tri_start, len(self.perm))

    def triangles_meeting(self, vertices: Iterable[int]) -> set[int]:
        vs = set(vertices)
        return {k for k in self.triangle_ids() if vs.intersection(self.simplices[k])}

    def dense_R(self) -> np.ndarray:
        return self._dense(self.rcol, by_column=True)

    def dense_U(self) -> np.ndarray:
        return self._dense(self.urow, by_column=False)

    def dense_D(self) -> np.ndarray:
        return self._dense(self.boundary, by_column=True)

    def _dense(self, vecs: list[int], by_column: bool) -> np.ndarray:
        m = len(self.perm)
        out = np.zeros((m, m), dtype=np.uint8)
        for p, sid in enumerate(self.perm):
            for other in gf2.bits(vecs[sid]):
                q = self.pos[other]
                if by_column:
                    out[q, p] = 1
                else:
                    out[p, q] = 1
        return out

    # -- internals -------------------------------------------------------
    def _low_of(self, c: int) -> int | None:
        col = self.rcol[c]
        if not col:
            return None
        if self.rows_in_id_order:
            return col.bit_length() - 1
        pos = self.pos
        return max(gf2.bits(col), key=pos.__getitem__)

    def _add_col(self, src: int, dst: int) -> None:
        # R <- R E, U <- E U with E adding column src to column dst (src before dst).
        self.rcol[dst] ^= self.rcol[src]
        self.urow[src] ^= self.urow[dst]

    def _refresh_lows(self, cols: Iterable[int]) -> None:
        cols = set(cols)
        for c in cols:
            r = self.low.pop(c, None)
            if r is not None and self.pivot.get(r) == c:
                del self.pivot[r]
        for c in cols:
            r = self._low_of(c)
            if r is None:
                continue
            if r in self.pivot:
                raise InvariantBreach(f"columns {self.pivot[r]} and {c} share low row {r}")
            self.low[c] = r
            self.pivot[r] = c

    # -- updates ---------------------------------------------------------
    def transpose(self, i: int) -> "RUState":
        """Swap the simplices at positions ``i`` and ``i + 1`` and restore ``D = R U``."""
        m = len(self.perm)
        if not 0 <= i < m - 1:
            raise IndexError(f"cannot swap positions {i} and {i + 1} of {m}")
        if self.order.block_of(i) != self.order.block_of(i + 1):
            raise BlockError(f"positions {i} and {i + 1} lie in different filtration blocks")
        a, b = self.perm[i], self.perm[i + 1]
        if self.dims[a] == 2 and self.dims[b] == 2:
            self._transpose_triangles(i, a, b)
            return self
        self.rows_in_id_order = False
        if (self.boundary[b] >> a) & 1:
            raise IncidenceError(f"simplex {self.simplices[a]} is a face of {self.simplices[b]}")
        Ra, Rb = self.rcol[a], self.rcol[b]
        k, l = self.pivot.get(a), self.pivot.get(b)
        dirty = {a, b}
        if k is not None:
            dirty.add(k)
        if l is not None:
            dirty.add(l)
        u_ab = (self.urow[a] >> b) & 1

        if not Ra and not Rb:
            # Column a is zero, so U[a, b] can be cleared without changing R U.
            if u_ab:
                self.urow[a] ^= 1 << b
            conflict = k is not None and l is not None and (self.rcol[l] >> a) & 1
            self._swap(i, a, b)
            if conflict:
                if self.dims[a] == 2 and self.dims[b] == 2:
                    raise InvariantBreach("paired positive triangles need 3-simplices")
                if self.pos[k] < self.pos[l]:
                    self._add_col(k, l)
                else:
                    self._add_col(l, k)
        elif Ra and Rb:
            if u_ab:
                flip = self.pos[self.low[a]] > self.pos[self.low[b]]
                self._add_col(a, b)
                self._swap(i, a, b)
                if flip:
                    self._add_col(b, a)
            else:
                self._swap(i, a, b)
        elif Ra:
            if u_ab:
                self._add_col(a, b)
                self._swap(i, a, b)
                self._add_col(b, a)
            else:
                self._swap(i, a, b)
        else:
            if u_ab:
                self.urow[a] ^= 1 << b
            self._swap(i, a, b)
        self._refresh_lows(dirty)
        return self

    def _transpose_triangles(self, i: int, a: int, b: int) -> None:
        # Triangles are never rows, so no row moves and no triangle owns a
        # pivot: lows either stay put or trade places between a and b.
        if not (self.urow[a] >> b) & 1:
            self._swap(i, a, b)
            return
        Ra, Rb = self.rcol[a], self.rcol[b]
        low, pivot = self.low, self.pivot
        if Ra and Rb:
            la, lb = low[a], low[b]
            flip = self.pos[la] > self.pos[lb]
            self._add_col(a, b)
            self._swap(i, a, b)
            if flip:
                self._add_col(b, a)
                low[a], low[b] = lb, la
                pivot[la], pivot[lb] = b, a
        elif Ra:
            self._add_col(a, b)
            self._swap(i, a, b)
            self._add_col(b, a)
            r = low.pop(a)
            low[b] = r
            pivot[r] = b
        else:
            self.urow[a] ^= 1 << b
            self._swap(i, a, b)

    def _swap(self, i: int, a: int, b: int) -> None:
        self.perm[i], self.perm[i + 1] = b, a
        self.pos[a], self.pos[b] = i + 1, i

    def move_to_end(self, doomed: Iterable[int], end: int | None = None) -> "RUState":
        """Bubble the ``doomed`` triangle ids to the positions just before ``end``."""
        end = len(self.perm) if end is None else end
        tri_start = self.order.tri_start
        targets = sorted((self.pos[d] for d in doomed), reverse=True)
        for p in targets:
            if p < tri_start or self.dims[self.perm[p]] != 2:
                raise BlockError(f"simplex at position {p} is not a triangle")
            if p >= end:
                raise ValueError(f"position {p} already lies beyond the live prefix")
        stop = end - 1
        for p in targets:
            self._bubble_triangle(p, stop)
            stop -= 1
        return self

    def _bubble_triangle(self, p: int, stop: int) -> None:
        # Equivalent to transpose(p), ..., transpose(stop - 1). Swaps with
        # triangles outside the U row of the moving one are pure
        # relabelings, so each such run is applied as a single rotation.
        perm, pos = self.perm, self.pos
        d = perm[p]
        while p < stop:
            coupled = self.urow[d]
            q = p + 1
            while q <= stop and not (coupled >> perm[q]) & 1:
                q += 1
            if q > p + 1:
                run = perm[p + 1:q]
                perm[p:q - 1] = run
                for k, t in enumerate(run, start=p):
                    pos[t] = k
                perm[q - 1] = d
                pos[d] = q - 1
                p = q - 1
            if p < stop:
                self._transpose_triangles(p, d, perm[p + 1])
                p += 1

    def check(self, live_count: int | None = None) -> Verdict:
        """Look for a live triangle column whose low row is a fence edge."""
        live = self.live_count if live_count is None else live_count
        fence = self.fence_edge_ids
        perm, low = self.perm, self.low
        for p in range(self.order.tri_start, live):
            c = perm[p]
            r = low.get(c)
            if r is not None and r in fence:
                return Verdict(True, c, tuple(sorted(gf2.bits(self.rcol[c]))))
        return Verdict(False)

    def witness_chain(self, c: int) -> list[int]:
        """Triangle ids whose boundary is the R column ``c`` (column of ``V = U^-1``)."""
        # Back-substitution for U x = e_c; U is unit upper triangular.
        chosen = 1 << c
        perm, urow = self.perm, self.urow
        for p in range(self.pos[c] - 1, self.order.tri_start - 1, -1):
            sid = perm[p]
            if gf2.popcount(urow[sid] & chosen) & 1:
                chosen |= 1 << sid
        return sorted(gf2.bits(chosen))


def reduce(order: FiltrationOrder, D: SparseBoundaryMatrix) -> RUState:
    """Left-to-right column reduction, recording ``U`` alongside ``R``."""
    s = RUState(order, D)
    rcol, urow, pivot, low = s.rcol, s.urow, s.pivot, s.low
    for j in range(len(D)):
        col = rcol[j]
        while col:
            top = col.bit_length() - 1
            k = pivot.get(top)
            if k is None:
                pivot[top] = j
                low[j] = top
                break
            col ^= rcol[k]
            urow[k] ^= 1 << j
        rcol[j] = col
    return s


def reduce_complex(K: SimplicialComplex2) -> RUState:
    return reduce(*build_boundary_matrix(K))


def transpose(s: RUState, i: int) -> RUState:
    return s.transpose(i)


def check_dsg(s: RUState) -> Verdict:
    return s.check(len(s))


def check_dsg_prefix(s: RUState, live_count: int) -> Verdict:
    return s.check(live_count)


def move_triangles_to_end(s: RUState, doomed: Iterable[int], end: int | None = None) -> RUState:
    return s.move_to_end(doomed, end)


@dataclass(frozen=True)
class OracleVerdict:
    passed: bool
    chain: frozenset[tuple[int, int, int]] = frozenset()


def fence_system(K: SimplicialComplex2) -> tuple[list[tuple[int, int, int]], list[int], int]:
    """Triangles, their boundary bitsets over edges, and the fence-cycle target."""
    edge_idx = {e: k for k, e in enumerate(sorted(K.edges))}
    tris = sorted(K.triangles)
    cols = [
        (1 << edge_idx[(a, b)]) | (1 << edge_idx[(a, c)]) | (1 << edge_idx[(b, c)])
        for a, b, c in tris
    ]
    target = 0
    for e in K.fence_edges:
        target ^= 1 << edge_idx[e]
    return tris, cols, target


def dsg_oracle(K: SimplicialComplex2) -> OracleVerdict:
    """Solve boundary(x) = fence cycle over triangle chains by plain elimination."""
    tris, cols, target = fence_system(K)
    x = gf2.solve(cols, target)
    if x is None:
        return OracleVerdict(False)
    return OracleVerdict(True, frozenset(tris[j] for j in gf2.bits(x)))
