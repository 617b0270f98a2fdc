"""Minimal death sets by breadth-first search over interior-vertex subsets.

Every subset is classified from one cached reduction: its triangles are
bubbled to the end of a cloned ``RUState`` and the criterion is read off the
remaining prefix.
"""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complex import SimplicialComplex2, remove_vertices
from .errors import BudgetExceeded, FenceRemovalError, TooLarge
from .persistence import RUState, dsg_oracle, reduce_complex


class Outcome(enum.Enum):
    CAKE = "cake"
    DEATH = "death"


@dataclass
class DeathSetReport:
    minimal_death_sets: list[frozenset[int]]
    explored_cake_count: int = 0
    explored_total: int = 0
    truncated_at_size: int | None = None
    baseline_failed: bool = False
    method: str = "cake_or_death"
    cake_frontier: list[frozenset[int]] = field(default_factory=list, repr=False)

    def families(self) -> set[frozenset[int]]:
        return set(self.minimal_death_sets)

    def as_labels(self, K: SimplicialComplex2) -> list[list[str]]:
        sets = [sorted(K.labels[v] for v in A) for A in self.minimal_death_sets]
        return sorted(sets, key=lambda s: (len(s), s))

    def to_json(self, K: SimplicialComplex2) -> dict:
        out = {
            "minimal_death_sets": self.as_labels(K),
            "sets": [
                {"size": len(s), "members": s} for s in self.as_labels(K)
            ],
            "explored_cake_count": self.explored_cake_count,
            "explored_total": self.explored_total,
            "truncated_at_size": self.truncated_at_size,
            "baseline_failed": self.baseline_failed,
            "method": self.method,
        }
        if self.truncated_at_size is not None:
            out["notice"] = (
                f"search truncated: no claim about death sets larger than {self.truncated_at_size}"
            )
        return out


def expected_density(n: int, r_c: float, area: float) -> float:
    """Mean number of cover disks over a point of the domain."""
    return n * math.pi * r_c**2 / area


def default_max_size(n: int, r_c: float, area: float) -> int:
    return max(1, math.ceil(expected_density(n, r_c, area)))


class _Classifier:
    def __init__(self, K: SimplicialComplex2, s0: RUState | None = None):
        self.K = K
        self.s0 = reduce_complex(K) if s0 is None else s0
        where = self.s0.order.index()
        self.tris_at = {
            v: frozenset(where[t] for t in K.triangles_at[v]) for v in K.interior
        }

    def __call__(self, A: Iterable[int]) -> Outcome:
        doomed: set[int] = set()
        for v in A:
            doomed |= self.tris_at[v]
        s = self.s0.clone()
        s.move_to_end(doomed)
        verdict = s.check(len(s) - len(doomed))
        return Outcome.CAKE if verdict.passed else Outcome.DEATH


def classify_subset(K: SimplicialComplex2, s0: RUState, A: Iterable[int]) -> Outcome:
    A = frozenset(A)
    if A & K.fence_set:
        raise FenceRemovalError("only interior vertices can fail")
    return _Classifier(K, s0)(A)


_worker: _Classifier | None = None


def _init_worker(K: SimplicialComplex2, s0: RUState) -> None:
    global _worker
    _worker = _Classifier(K, s0)


def _classify_in_worker(A: frozenset[int]) -> Outcome:
    assert _worker is not None
    return _worker(A)


def cake_or_death(
    K: SimplicialComplex2,
    max_size: int | None = None,
    parallel: bool = False,
    budget: int | None = None,
    workers: int | None = None,
) -> DeathSetReport:
    """Level-by-level search; a set is checked only if all its predecessors are cake."""
    classify = _Classifier(K)
    if not classify.s0.check().passed:
        return DeathSetReport([frozenset()], 0, 1, None, baseline_failed=True)
    report = DeathSetReport([], explored_cake_count=1, explored_total=1)
    interior = sorted(K.interior)
    cakes: set[frozenset[int]] = {frozenset()}
    pool = None
    if parallel:
        pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(K, classify.s0))
    try:
        size = 0
        while cakes:
            if size >= len(interior):
                break
            if max_size is not None and size >= max_size:
                report.truncated_at_size = max_size
                break
            size += 1
            candidates = []
            for c in cakes:
                top = max(c, default=-1)
                for v in interior:
                    if v <= top:
                        continue
                    cand = c | {v}
                    if all(cand - {u} in cakes for u in cand):
                        candidates.append(cand)
            candidates.sort(key=sorted)
            if budget is not None and report.explored_total + len(candidates) > budget:
                report.truncated_at_size = size - 1
                report.cake_frontier = sorted(cakes, key=sorted)
                raise BudgetExceeded(
                    f"subset budget {budget} exceeded at level {size}", partial=report
                )
            if pool is not None:
                outcomes = list(pool.map(_classify_in_worker, candidates, chunksize=16))
            else:
                outcomes = [classify(A) for A in candidates]
            report.explored_total += len(candidates)
            cakes = set()
            for A, out in zip(candidates, outcomes):
                if out is Outcome.CAKE:
                    cakes.add(A)
                else:
                    report.minimal_death_sets.append(A)
            report.explored_cake_count += len(cakes)
        report.cake_frontier = sorted(cakes, key=sorted)
    finally:
        if pool is not None:
            pool.shutdown()
    return report


def brute_force_death_sets(K: SimplicialComplex2, max_n: int = 14) -> DeathSetReport:
    """Classify every interior subset with the linear-system oracle, then keep minimal ones."""
    interior = sorted(K.interior)
    if len(interior) > max_n:
        raise TooLarge(f"{len(interior)} interior vertices exceeds the limit {max_n}")
    deaths: list[frozenset[int]] = []
    cakes = 0
    for r in range(len(interior) + 1):
        for A in itertools.combinations(interior, r):
            if dsg_oracle(remove_vertices(K, A)).passed:
                cakes += 1
            else:
                deaths.append(frozenset(A))
    minimal: list[frozenset[int]] = []
    for D in deaths:  # sizes ascend, so minimal sets are seen first
        if not any(M <= D for M in minimal):
            minimal.append(D)
    baseline = bool(minimal) and minimal[0] == frozenset()
    return DeathSetReport(
        minimal,
        explored_cake_count=cakes,
        explored_total=2 ** len(interior),
        baseline_failed=baseline,
        method="brute_force",
    )


def is_antichain(sets: Sequence[frozenset[int]]) -> bool:
    return not any(a < b or b < a for a, b in itertools.combinations(sets, 2))
