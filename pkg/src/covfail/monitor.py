"""Early-warning monitor: link flags maintained as sensors fail.

An interior vertex is flagged when its link carries a 1-cycle. Removing an
unflagged vertex can never destroy every fundamental chain (any such chain
restricts to a 1-cycle in the link), so only flagged deaths, or deaths while
the homological assumptions are in doubt, trigger a criterion recheck.
Triangles of unrechecked deaths are parked lazily and moved out of the live
matrix prefix at the next recheck.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .complex import LinkGraph, SimplicialComplex2, betti_numbers, graph_betti, link, remove_vertices
from .errors import AlreadyDead, BaselineFailure, OutOfOrderEvent, UnknownVertex
from .persistence import RUState, reduce_complex

RUNNING = "Running"
FAILED = "CriterionFailed"


@dataclass(frozen=True)
class FailureEvent:
    time: float
    vertex: str


@dataclass
class MonitorEntry:
    time: float
    vertex: str
    was_flagged: bool
    dsg_checked: bool
    dsg_result: str | None
    status: str
    conservative: bool = False
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "event": "fail",
            "time": self.time,
            "vertex": self.vertex,
            "was_flagged": self.was_flagged,
            "dsg_checked": self.dsg_checked,
            "dsg_result": self.dsg_result,
            "conservative": self.conservative,
            "warnings": self.warnings,
            "status": self.status,
        }


@dataclass
class MonitorVerdict:
    entries: list[MonitorEntry]
    status: str
    failed_at: float | None = None
    unprocessed: list[FailureEvent] = field(default_factory=list)


class MonitorState:
    def __init__(self, K: SimplicialComplex2, s: RUState):
        self.K = K
        self.s = s
        where = s.order.index()
        self._tri_id = where
        self.links: dict[int, LinkGraph] = {}
        self.betti: dict[int, tuple[int, int]] = {}
        self.flags: dict[int, bool] = {}
        self.warnings: list[str] = []
        self.h2_rank = 0
        self.h1_rank = 0
        self.dead: list[tuple[float, str]] = []
        self.pending: set[int] = set()  # triangle ids of dead vertices still in the live prefix
        self.status = RUNNING
        self.failed_at: float | None = None
        self.last_time: float | None = None

    @property
    def conservative(self) -> bool:
        return self.h2_rank > 0 or self.h1_rank > 0

    def flagged(self) -> list[str]:
        return sorted(self.K.labels[w] for w, f in self.flags.items() if f)

    def init_json(self) -> dict:
        return {
            "event": "init",
            "status": self.status,
            "flagged": self.flagged(),
            "h1_rank": self.h1_rank,
            "h2_rank": self.h2_rank,
            "warnings": self.warnings,
        }

    def _set_link(self, w: int, lk: LinkGraph) -> None:
        self.links[w] = lk
        b = graph_betti(lk)
        self.betti[w] = b
        self.flags[w] = b[1] > 0

    def _recheck(self, doomed: Iterable[int]) -> bool:
        self.pending.update(doomed)
        s = self.s
        if self.pending:
            s.move_to_end(self.pending, end=s.live_count)
            s.live_count -= len(self.pending)
            self.pending.clear()
        return s.check().passed


def init_monitor(K: SimplicialComplex2, strict: bool = False) -> MonitorState:
    st = MonitorState(K, reduce_complex(K))
    _, b1, b2 = betti_numbers(K)
    st.h1_rank, st.h2_rank = b1, b2
    if b2:
        st.warnings.append(f"H2(R) != 0 (rank {b2}): flags may be false positives")
    if b1:
        st.warnings.append(f"H1(R) != 0 (rank {b1}): flags may be false positives")
    for w in sorted(K.interior):
        st._set_link(w, link(K, w))
    if not st.s.check().passed:
        if strict:
            raise BaselineFailure("the initial complex already fails the criterion")
        st.status = FAILED
        st.failed_at = 0.0
        st.warnings.append("initial complex fails the criterion")
    return st


def process_failure(st: MonitorState, ev: FailureEvent) -> MonitorEntry:
    """Apply one failure; mutates ``st`` and returns the verdict entry."""
    if st.status != RUNNING:
        raise RuntimeError("monitor already reports criterion failure")
    K = st.K
    try:
        v = K._index[ev.vertex]
    except KeyError:
        raise UnknownVertex(ev.vertex) from None
    if v not in K.vertices:
        raise AlreadyDead(f"vertex {ev.vertex!r} has already failed")
    st.last_time = ev.time
    st.dead.append((ev.time, ev.vertex))

    if v in K.fence_set:
        st.status = FAILED
        st.failed_at = ev.time
        return MonitorEntry(ev.time, ev.vertex, False, False, "fail", FAILED,
                            warnings=["fence node lost"])

    was_flagged = st.flags.pop(v)
    b0, _ = st.betti.pop(v)
    st.links.pop(v)
    notes: list[str] = []
    doomed = {st._tri_id[t] for t in K.triangles_at[v]}
    recheck = was_flagged
    conservative = False
    if not was_flagged:
        if st.conservative:
            recheck = conservative = True
            notes.append("conservative recheck: homology assumptions not confirmed")
        elif b0 > 1:
            recheck = conservative = True
            notes.append("conservative recheck: link was disconnected")

    result = None
    if recheck:
        result = "pass" if st._recheck(doomed) else "fail"
    else:
        st.pending.update(doomed)

    st.K = remove_vertices(K, {v})
    for u in K.neighbors[v]:
        if u in st.links:
            old = st.links[u]
            st._set_link(
                u,
                LinkGraph(old.vertices - {v}, frozenset(e for e in old.edges if v not in e)),
            )
    for u in K.neighbors[v]:
        if u in st.betti and st.betti[u][0] > 1:
            notes.append(f"link of {K.labels[u]} is disconnected")

    if result == "fail":
        st.status = FAILED
        st.failed_at = ev.time
    return MonitorEntry(ev.time, ev.vertex, was_flagged, recheck, result, st.status,
                        conservative, notes)


def replay(st: MonitorState, events: Iterable[FailureEvent]) -> MonitorVerdict:
    it: Iterator[FailureEvent] = iter(events)
    entries: list[MonitorEntry] = []
    last = st.last_time
    for ev in it:
        if st.status != RUNNING:
            return MonitorVerdict(entries, st.status, st.failed_at, [ev, *it])
        if last is not None and ev.time < last:
            raise OutOfOrderEvent(f"event 'fail {ev.time} {ev.vertex}' is earlier than {last}")
        last = ev.time
        entries.append(process_failure(st, ev))
    return MonitorVerdict(entries, st.status, st.failed_at, [])
