"""Line-oriented text format for networks and failure-event streams.

Graph files::

    format=1
    param rc 0.23            # optional numeric metadata
    fence v1 v2 v3 v4        # exactly one line, cyclic order
    node v1 0.0 0.0          # optional position for a fence node
    node a 0.5 0.5 fail=exp:0.1
    edge v1 a

Event files hold ``fail <time> <vertex-id>`` lines with nondecreasing times.
"""

from __future__ import annotations

from pathlib import Path

from .complex import CommunicationGraph, Node
from .errors import ParseError
from .monitor import FailureEvent
from .probability import parse_failure_spec

FORMAT_VERSION = 1


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def parse_graph(text: str) -> CommunicationGraph:
    fence: list[str] | None = None
    nodes: dict[str, Node] = {}
    node_lines: dict[str, int] = {}
    edges: list[tuple[str, str, int]] = []
    params: dict[str, float] = {}
    seen_directive = False
    for no, tok in _lines(text):
        head = tok[0]
        if head.startswith("format="):
            if seen_directive:
                raise ParseError("format line must come first", no)
            if head != f"format={FORMAT_VERSION}" or len(tok) != 1:
                raise ParseError(f"unsupported format {head!r}", no)
            seen_directive = True
            continue
        seen_directive = True
        if head == "fence":
            if fence is not None:
                raise ParseError("second fence line", no)
            fence = tok[1:]
            if len(set(fence)) != len(fence):
                raise ParseError("fence lists a node twice", no)
        elif head == "node":
            if len(tok) < 2:
                raise ParseError("node line needs an id", no)
            nid, rest = tok[1], tok[2:]
            if nid in nodes:
                raise ParseError(f"node {nid!r} declared twice", no)
            fail = None
            if rest and rest[-1].startswith("fail="):
                try:
                    fail = parse_failure_spec(rest[-1][5:])
                except ValueError as exc:
                    raise ParseError(f"node {nid!r}: {exc}", no) from None
                rest = rest[:-1]
            pos = None
            if rest:
                if len(rest) != 2:
                    raise ParseError(f"node {nid!r}: expected 'x y' coordinates", no)
                try:
                    pos = (float(rest[0]), float(rest[1]))
                except ValueError:
                    raise ParseError(f"node {nid!r}: coordinates must be numbers", no) from None
            nodes[nid] = Node(nid, False, pos, fail)
            node_lines[nid] = no
        elif head == "edge":
            if len(tok) != 3:
                raise ParseError("edge line needs exactly two ids", no)
            edges.append((tok[1], tok[2], no))
        elif head == "param":
            if len(tok) != 3:
                raise ParseError("param line needs a name and a value", no)
            try:
                params[tok[1]] = float(tok[2])
            except ValueError:
                raise ParseError(f"param {tok[1]!r} must be numeric", no) from None
        else:
            raise ParseError(f"unknown directive {head!r}", no)
    if fence is None:
        raise ParseError("missing fence line")
    ordered: list[Node] = []
    for f in fence:
        n = nodes.pop(f, None) or Node(f)
        if n.fail is not None:
            raise ParseError(f"fence node {f!r} cannot carry a failure distribution", node_lines.get(f))
        n.fence = True
        ordered.append(n)
    ordered += list(nodes.values())
    known = {n.id for n in ordered}
    out_edges = []
    for u, v, no in edges:
        for x in (u, v):
            if x not in known:
                raise ParseError(f"edge refers to undeclared node {x!r}", no)
        if u == v:
            raise ParseError(f"self-loop on {u!r}", no)
        out_edges.append((u, v))
    return CommunicationGraph(ordered, out_edges, list(fence), params)


def emit_graph(g: CommunicationGraph) -> str:
    out = [f"format={FORMAT_VERSION}"]
    for k, v in g.params.items():
        out.append(f"param {k} {v!r}")
    out.append("fence " + " ".join(g.fence_order))
    by_id = {n.id: n for n in g.nodes}
    order = list(g.fence_order) + [n.id for n in g.nodes if not n.fence]
    for nid in order:
        n = by_id[nid]
        parts = ["node", nid]
        if n.pos is not None:
            parts += [repr(float(n.pos[0])), repr(float(n.pos[1]))]
        if n.fail is not None:
            parts.append("fail=" + n.fail.spec())
        if len(parts) > 2 or not n.fence:
            out.append(" ".join(parts))
    out += [f"edge {u} {v}" for u, v in g.edges]
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> CommunicationGraph:
    return parse_graph(Path(path).read_text())


def parse_events(text: str) -> list[FailureEvent]:
    events = []
    for no, tok in _lines(text):
        if tok[0] != "fail" or len(tok) != 3:
            raise ParseError("expected 'fail <time> <vertex-id>'", no)
        try:
            t = float(tok[1])
        except ValueError:
            raise ParseError(f"bad time {tok[1]!r}", no) from None
        if t < 0:
            raise ParseError("event times must be nonnegative", no)
        events.append(FailureEvent(t, tok[2]))
    return events
