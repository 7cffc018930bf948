# ceg/core/types.py

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, NewType, Optional, Tuple

import networkx as nx

VertexId = NewType("VertexId", int)

# Colour of a vertex that no staging has touched (plain event trees, the sink).
UNCOLOURED = "uncoloured"
# Prefix of the colour derived for a singleton stage from its root path.
TRIVIAL_PREFIX = "trivial:"
SINK_KEY = "w_inf"


@dataclass(frozen=True)
class Edge:
    source: VertexId
    target: VertexId
    label: str
    theta: Optional[float] = None
    count: Optional[int] = None
    original_label: Optional[str] = None


class EdgeSpec(NamedTuple):
    """An edge given by user-supplied vertex keys, as accepted by construct_tree."""

    parent: str
    child: str
    label: str
    count: Optional[int] = None
    theta: Optional[float] = None


@dataclass(frozen=True, order=True)
class PathSignature:
    steps: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a path signature has at least one (colour, label) step")

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[Tuple[str, str]]:
        return iter(self.steps)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(label for _, label in self.steps)


class Floret(NamedTuple):
    situation: VertexId
    vertices: FrozenSet[VertexId]
    edges: Tuple[Edge, ...]


def _edge(source, target, key, data) -> Edge:
    return Edge(
        source=source,
        target=target,
        label=key,
        theta=data.get("theta"),
        count=data.get("count"),
        original_label=data.get("original_label"),
    )


class ColouredGraph:
    """
    A rooted, edge-labelled multigraph. Event trees, staged trees, the
    intermediate graphs of compaction and CEGs all share this shape: edges are
    keyed by their label, vertices may carry a ``colour`` and a ``key``.

    The wrapped graph is frozen; a new value is built for every change.
    """

    def __init__(self, graph: nx.MultiDiGraph, root: VertexId):
        if root not in graph:
            raise ValueError(f"root {root} is not a vertex of the graph")
        self._graph = nx.freeze(graph)
        self._root = root

    @property
    def graph(self) -> nx.MultiDiGraph:
        return self._graph

    @property
    def root(self) -> VertexId:
        return self._root

    @property
    def vertices(self) -> FrozenSet[VertexId]:
        return frozenset(self._graph.nodes)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(
            sorted(
                (_edge(u, v, k, d) for u, v, k, d in self._graph.edges(keys=True, data=True)),
                key=lambda e: (e.source, e.label),
            )
        )

    def number_of_vertices(self) -> int:
        return self._graph.number_of_nodes()

    def number_of_edges(self) -> int:
        return self._graph.number_of_edges()

    def out_edges(self, v: VertexId) -> Tuple[Edge, ...]:
        return tuple(
            sorted(
                (_edge(u, t, k, d) for u, t, k, d in self._graph.out_edges(v, keys=True, data=True)),
                key=lambda e: e.label,
            )
        )

    def children(self, v: VertexId) -> Tuple[VertexId, ...]:
        return tuple(e.target for e in self.out_edges(v))

    def is_terminal(self, v: VertexId) -> bool:
        return self._graph.out_degree(v) == 0

    @property
    def terminals(self) -> FrozenSet[VertexId]:
        return frozenset(v for v in self._graph.nodes if self.is_terminal(v))

    @property
    def situations(self) -> FrozenSet[VertexId]:
        return frozenset(v for v in self._graph.nodes if not self.is_terminal(v))

    def colour(self, v: VertexId) -> str:
        return self._graph.nodes[v].get("colour") or UNCOLOURED

    @property
    def colouring(self) -> Dict[VertexId, str]:
        return {v: self.colour(v) for v in self.situations}

    def key(self, v: VertexId) -> str:
        return self._graph.nodes[v].get("key", str(v))


def label_paths(graph: nx.MultiDiGraph, root: VertexId) -> Dict[VertexId, Tuple[str, ...]]:
    paths: Dict[VertexId, Tuple[str, ...]] = {root: ()}
    for u, v, label in nx.edge_bfs(graph, root):
        paths[v] = paths[u] + (label,)
    return paths


class EventTree(ColouredGraph):
    def __init__(self, graph: nx.MultiDiGraph, root: VertexId):
        super().__init__(graph, root)
        self._paths = label_paths(self._graph, root)
        self._by_key = {self.key(v): v for v in self._graph.nodes}

    @property
    def leaves(self) -> FrozenSet[VertexId]:
        return self.terminals

    def vertex_for_key(self, key: str) -> VertexId:
        return self._by_key[key]

    def root_path(self, v: VertexId) -> Tuple[str, ...]:
        return self._paths[v]

    def vertex_for_path(self, labels: Tuple[str, ...]) -> Optional[VertexId]:
        v = self._root
        for label in labels:
            targets = {k: t for _, t, k in self._graph.out_edges(v, keys=True)}
            if label not in targets:
                return None
            v = targets[label]
        return v

    def edge_specs(self) -> List[EdgeSpec]:
        return [
            EdgeSpec(self.key(e.source), self.key(e.target), e.label, e.count, e.theta)
            for e in self.edges
        ]


class Ceg(ColouredGraph):
    """A chain event graph, or one of the intermediate graphs leading to it."""

    def __init__(self, graph: nx.MultiDiGraph, root: VertexId, sink: VertexId):
        if sink not in graph:
            raise ValueError(f"sink {sink} is not a vertex of the graph")
        super().__init__(graph, root)
        self._sink = sink

    @property
    def sink(self) -> VertexId:
        return self._sink

    def key(self, v: VertexId) -> str:
        if v == self._sink:
            return SINK_KEY
        return super().key(v)
