"""Probability that the coverage criterion has failed by time t.

Node failure times are independent. Failure by ``t`` happens iff every node of
some minimal death set has failed by ``t``; the exact evaluator expands that
union by inclusion-exclusion over unions of the sets.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .complex import CommunicationGraph, SimplicialComplex2, remove_vertices
from .errors import BudgetExceeded, TooLarge, UnknownVertex
from .persistence import dsg_oracle


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("exponential rate must be positive")

    def cdf(self, t: float) -> float:
        return -math.expm1(-self.rate * t)

    def spec(self) -> str:
        return f"exp:{self.rate!r}"


@dataclass(frozen=True)
class Weibull:
    shape: float
    scale: float

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0):
            raise ValueError("weibull shape and scale must be positive")

    def cdf(self, t: float) -> float:
        return -math.expm1(-((t / self.scale) ** self.shape))

    def spec(self) -> str:
        return f"weibull:{self.shape!r}:{self.scale!r}"


@dataclass(frozen=True)
class Fixed:
    """Time-independent failure probability, for single-horizon questions."""

    p: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("fixed failure probability must lie in [0, 1]")

    def cdf(self, t: float) -> float:
        return float(self.p)

    def spec(self) -> str:
        return f"fixed:{self.p!r}"


FailureSpec = Union[Exponential, Weibull, Fixed]


def parse_failure_spec(text: str) -> FailureSpec:
    """Parse ``exp:<rate>``, ``weibull:<shape>:<scale>`` or ``fixed:<p>``."""
    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "exp" and len(args) == 1:
            return Exponential(float(args[0]))
        if kind == "weibull" and len(args) == 2:
            return Weibull(float(args[0]), float(args[1]))
        if kind == "fixed" and len(args) == 1:
            return Fixed(float(args[0]))
    except ValueError as exc:
        raise ValueError(f"bad failure spec {text!r}: {exc}") from None
    raise ValueError(f"bad failure spec {text!r}")


@dataclass(frozen=True)
class FailureModel:
    """Failure-time distribution per interior vertex label."""

    specs: Mapping[str, FailureSpec]

    @classmethod
    def uniform(cls, vertices: Iterable[str], spec: FailureSpec) -> "FailureModel":
        return cls({v: spec for v in vertices})

    @classmethod
    def from_graph(cls, g: CommunicationGraph) -> "FailureModel":
        specs = {}
        for n in g.nodes:
            if n.fence:
                if n.fail is not None:
                    raise ValueError(f"fence node {n.id!r} cannot carry a failure distribution")
                continue
            if n.fail is None:
                raise ValueError(f"interior node {n.id!r} has no failure distribution")
            specs[n.id] = n.fail
        return cls(specs)


def cdf(model: FailureModel, v: str, t: float) -> float:
    if t < 0:
        raise ValueError("time must be nonnegative")
    try:
        spec = model.specs[v]
    except KeyError:
        raise UnknownVertex(v) from None
    return spec.cdf(t)


@dataclass(frozen=True)
class CurvePoint:
    t: float
    probability: float
    method: str
    stderr: float | None = None
    terms: int | None = None


@dataclass
class FailureCurve:
    points: list[CurvePoint] = field(default_factory=list)

    @property
    def probabilities(self) -> list[float]:
        return [p.probability for p in self.points]

    def to_json(self) -> list[dict]:
        return [
            {k: v for k, v in vars(p).items() if v is not None} for p in self.points
        ]

    def to_csv(self) -> str:
        rows = ["t,probability,method,stderr,terms"]
        for p in self.points:
            rows.append(
                f"{p.t!r},{p.probability!r},{p.method},"
                f"{'' if p.stderr is None else repr(p.stderr)},{'' if p.terms is None else p.terms}"
            )
        return "\n".join(rows) + "\n"


def _union_terms(min_sets: Sequence[frozenset[str]]) -> dict[frozenset[str], int]:
    """Signed inclusion-exclusion coefficients keyed by union of member sets."""
    coef: dict[frozenset[str], int] = {frozenset(): 1}
    for A in min_sets:
        nxt = dict(coef)
        for U, c in coef.items():
            key = U | A
            nxt[key] = nxt.get(key, 0) - c
        coef = {U: c for U, c in nxt.items() if c}
    coef.pop(frozenset(), None)
    return coef


def prob_failure_exact(
    min_sets: Sequence[Iterable[str]],
    model: FailureModel,
    times: Sequence[float],
    max_sets: int = 20,
    max_vertices: int = 16,
) -> FailureCurve:
    """Inclusion-exclusion over the minimal death sets.

    Terms sharing a union are merged, so the work is bounded by both
    ``2 ** len(min_sets)`` and ``2 ** |union of the sets|``; the budget only
    trips when both are large.
    """
    sets = [frozenset(A) for A in min_sets]
    universe = frozenset().union(*sets)
    if len(sets) > max_sets and len(universe) > max_vertices:
        raise BudgetExceeded(
            f"{len(sets)} minimal death sets over {len(universe)} vertices exceed the exact "
            f"budget ({max_sets} sets or {max_vertices} vertices); use Monte Carlo"
        )
    if frozenset() in sets:
        return FailureCurve([CurvePoint(float(t), 1.0, "ie", terms=1) for t in times])
    coef = _union_terms(sets)
    curve = FailureCurve()
    for t in times:
        q = {v: cdf(model, v, t) for A in sets for v in A}
        # sum_{S nonempty} (-1)^{|S|+1} P(all of union(S) failed)
        total = -math.fsum(c * math.prod(q[v] for v in U) for U, c in coef.items())
        curve.points.append(CurvePoint(float(t), min(1.0, max(0.0, total)), "ie", terms=len(coef)))
    return curve


MC_CHUNK = 1 << 15


def prob_failure_mc(
    min_sets: Sequence[Iterable[str]],
    model: FailureModel,
    times: Sequence[float],
    samples: int,
    seed: int,
    workers: int = 1,
) -> FailureCurve:
    """Monte Carlo estimate; common random numbers across ``times``.

    Samples are split into fixed-size chunks, each with its own spawned seed,
    so the estimate depends only on ``seed`` and ``samples``, never on
    ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    sets = [frozenset(A) for A in min_sets]
    verts = sorted({v for A in sets for v in A})
    col = {v: k for k, v in enumerate(verts)}
    masks = [np.array([col[v] for v in sorted(A)], dtype=np.intp) for A in sets]
    qs = np.array([[cdf(model, v, t) for v in verts] for t in times], dtype=float).reshape(
        len(times), len(verts)
    )
    sizes = [MC_CHUNK] * (samples // MC_CHUNK)
    if samples % MC_CHUNK:
        sizes.append(samples % MC_CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def run(chunk: int) -> np.ndarray:
        rng = np.random.default_rng(seeds[chunk])
        u = rng.random((sizes[chunk], len(verts)))
        hits = np.zeros(len(times), dtype=np.int64)
        for ti in range(len(times)):
            failed = u < qs[ti]
            broken = np.zeros(sizes[chunk], dtype=bool)
            for m in masks:
                broken |= failed[:, m].all(axis=1)
            hits[ti] = broken.sum()
        return hits

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            counts = sum(ex.map(run, range(len(sizes))))
    else:
        counts = sum(run(c) for c in range(len(sizes)))
    counts = np.asarray(counts).reshape(len(times))
    curve = FailureCurve()
    for t, k in zip(times, counts.tolist()):
        p = k / samples
        curve.points.append(
            CurvePoint(float(t), p, "mc", stderr=math.sqrt(p * (1 - p) / samples))
        )
    return curve


def failing_subsets(K: SimplicialComplex2, max_n: int = 14) -> list[frozenset[int]]:
    """All interior failure sets that break the criterion (oracle route)."""
    interior = sorted(K.interior)
    if len(interior) > max_n:
        raise TooLarge(f"{len(interior)} interior vertices exceeds the limit {max_n}")
    out = []
    for r in range(len(interior) + 1):
        for F in itertools.combinations(interior, r):
            if not dsg_oracle(remove_vertices(K, F)).passed:
                out.append(frozenset(F))
    return out


def prob_failure_bruteforce(
    K: SimplicialComplex2,
    model: FailureModel,
    t: float | Sequence[float],
    max_n: int = 14,
) -> float | list[float]:
    """Sum of P(exactly F failed) over every failing interior subset F."""
    times = [t] if np.isscalar(t) else list(t)
    bad = failing_subsets(K, max_n)
    interior = sorted(K.interior)
    out = []
    for tt in times:
        q = {v: cdf(model, K.labels[v], tt) for v in interior}
        terms = [
            math.prod(q[v] if v in F else 1.0 - q[v] for v in interior) for F in bad
        ]
        out.append(math.fsum(terms))
    return out[0] if np.isscalar(t) else out
