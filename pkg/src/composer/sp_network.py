#!/usr/bin/env python3
"""
Two-terminal directed multigraphs and series-parallel expressions.

An SPNetwork is an expression tree (edge | series | parallel) that flattens
to a Network whose edges are oriented from the source O to the sink D.
Recognition of arbitrary networks works by reduction on a networkx
MultiDiGraph: collapse parallel edges and contract internal vertices with
one incoming and one outgoing edge until nothing changes; the network is
series-parallel iff a single O->D edge remains.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from core.costs import CostFunction, cost_from_dict
from core.errors import StructuralError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NetworkEdge:
    id: str
    tail: str
    head: str
    cost: CostFunction

    def to_dict(self):
        return {"id": self.id, "tail": self.tail, "head": self.head, "cost": self.cost.to_dict()}


class Network:
    """Directed multigraph with explicit vertex order and edge ids."""

    def __init__(self, vertices: Sequence[str], edges: Sequence[NetworkEdge]):
        self.vertices: Tuple[str, ...] = tuple(vertices)
        self.edges: Tuple[NetworkEdge, ...] = tuple(edges)
        self.edge_index: Dict[str, int] = {}
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise StructuralError("duplicate vertex ids")
        for i, e in enumerate(self.edges):
            if e.id in self.edge_index:
                raise StructuralError(f"duplicate edge id {e.id}")
            if e.tail not in known or e.head not in known:
                raise StructuralError(f"edge {e.id} uses an unknown vertex")
            self.edge_index[e.id] = i

    def edge(self, eid: str) -> NetworkEdge:
        try:
            return self.edges[self.edge_index[eid]]
        except KeyError:
            raise StructuralError(f"unknown edge id {eid}")

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(e.tail, e.head, key=e.id)
        return graph

    def sources(self) -> List[str]:
        graph = self.to_networkx()
        return [v for v in self.vertices if graph.in_degree(v) == 0]

    def sinks(self) -> List[str]:
        graph = self.to_networkx()
        return [v for v in self.vertices if graph.out_degree(v) == 0]

    def with_edges(self, extra_vertices: Iterable[str], extra_edges: Iterable[NetworkEdge]) -> "Network":
        return Network(self.vertices + tuple(extra_vertices), self.edges + tuple(extra_edges))


def is_series_parallel(network: Network, source: str, sink: str) -> bool:
    """Two-terminal series-parallel recognition by series/parallel reduction."""
    if source == sink or source not in network.vertices or sink not in network.vertices:
        return False
    graph = nx.DiGraph()
    graph.add_nodes_from(network.vertices)
    # parallel duplicates collapse on insertion into a simple DiGraph
    for e in network.edges:
        if e.tail == e.head:
            return False
        graph.add_edge(e.tail, e.head)

    changed = True
    while changed:
        changed = False
        for v in list(graph.nodes):
            if v in (source, sink):
                continue
            if graph.in_degree(v) == 1 and graph.out_degree(v) == 1:
                (u, _), = graph.in_edges(v)
                (_, w), = graph.out_edges(v)
                if u == w:
                    return False
                graph.remove_node(v)
                graph.add_edge(u, w)
                changed = True
    return (set(graph.nodes) == {source, sink} and graph.number_of_edges() == 1
            and graph.has_edge(source, sink))


class SPNetwork:
    """Series-parallel expression: leaf edge, or series / parallel of parts."""

    def __init__(self, kind: str, parts: Sequence["SPNetwork"] = (), edge_id: Optional[str] = None,
                 cost: Optional[CostFunction] = None):
        if kind not in ("edge", "series", "parallel"):
            raise StructuralError(f"unknown SP node kind {kind!r}")
        if kind == "edge" and (edge_id is None or cost is None):
            raise StructuralError("an SP edge needs an id and a cost")
        if kind != "edge" and not parts:
            raise StructuralError(f"{kind} composition needs at least one part")
        self.kind = kind
        self.parts = tuple(parts)
        self.edge_id = edge_id
        self.cost = cost
        ids = self.edge_ids()
        if len(ids) != len(set(ids)):
            raise StructuralError("SP expression repeats an edge id")

    @classmethod
    def edge(cls, edge_id: str, cost: CostFunction) -> "SPNetwork":
        return cls("edge", edge_id=edge_id, cost=cost)

    @classmethod
    def series(cls, *parts: "SPNetwork") -> "SPNetwork":
        return cls("series", parts)

    @classmethod
    def parallel(cls, *parts: "SPNetwork") -> "SPNetwork":
        return cls("parallel", parts)

    def edge_ids(self) -> List[str]:
        if self.kind == "edge":
            return [self.edge_id]
        return [eid for part in self.parts for eid in part.edge_ids()]

    def flatten(self, source: str = "O", sink: str = "D") -> Network:
        """Multigraph with terminals `source`, `sink` and internal vertices v1, v2, ..."""
        vertices = [source]
        edges: List[NetworkEdge] = []
        counter = [0]

        def place(node: "SPNetwork", tail: str, head: str):
            if node.kind == "edge":
                edges.append(NetworkEdge(node.edge_id, tail, head, node.cost))
            elif node.kind == "parallel":
                for part in node.parts:
                    place(part, tail, head)
            else:
                current = tail
                for i, part in enumerate(node.parts):
                    if i == len(node.parts) - 1:
                        nxt = head
                    else:
                        counter[0] += 1
                        nxt = f"v{counter[0]}"
                        vertices.append(nxt)
                    place(part, current, nxt)
                    current = nxt

        place(self, source, sink)
        vertices.append(sink)
        return Network(vertices, edges)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "edge":
            return {"edge": {"id": self.edge_id, "cost": self.cost.to_dict()}}
        return {self.kind: [part.to_dict() for part in self.parts]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SPNetwork":
        if len(data) != 1:
            raise StructuralError("SP node must have exactly one of edge/series/parallel")
        (kind, body), = data.items()
        if kind == "edge":
            return cls.edge(str(body["id"]), cost_from_dict(body["cost"]))
        if kind in ("series", "parallel"):
            return cls(kind, [cls.from_dict(part) for part in body])
        raise StructuralError(f"unknown SP node kind {kind!r}")

    def __repr__(self):
        if self.kind == "edge":
            return self.edge_id
        joiner = " -> " if self.kind == "series" else " | "
        return "(" + joiner.join(repr(p) for p in self.parts) + ")"
