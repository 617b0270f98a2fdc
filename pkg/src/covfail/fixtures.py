"""Small hand-built networks used in tests, docs and the CLI examples."""

from __future__ import annotations

from .complex import CommunicationGraph, Node


def _fence_ids(k: int) -> list[str]:
    return [f"v{i}" for i in range(1, k + 1)]


def _cycle(ids: list[str]) -> list[tuple[str, str]]:
    return list(zip(ids, ids[1:] + ids[:1]))


def fence_graph(k: int) -> CommunicationGraph:
    """FX-FENCE(k): the bare fence cycle."""
    ids = _fence_ids(k)
    return CommunicationGraph([Node(v, True) for v in ids], _cycle(ids), ids)


def wheel_graph(k: int, hub: str = "h") -> CommunicationGraph:
    """FX-WHEEL(k): fence cycle plus a hub adjacent to every fence node."""
    g = fence_graph(k)
    g.nodes.append(Node(hub))
    g.edges += [(v, hub) for v in g.fence_order]
    return g


def twin_graph() -> CommunicationGraph:
    """FX-TWIN: two interior nodes each covering half of a hexagon."""
    g = fence_graph(6)
    g.nodes += [Node("a"), Node("b")]
    g.edges += [("v1", "a"), ("v2", "a"), ("v3", "a"), ("v4", "a"), ("a", "b")]
    g.edges += [("v4", "b"), ("v5", "b"), ("v6", "b"), ("v1", "b")]
    return g


def pair_graph() -> CommunicationGraph:
    """FX-PAIR: two adjacent hubs over one hexagon (carries a 2-sphere)."""
    g = fence_graph(6)
    g.nodes += [Node("a"), Node("b")]
    g.edges += [(v, h) for h in ("a", "b") for v in g.fence_order]
    g.edges.append(("a", "b"))
    return g
