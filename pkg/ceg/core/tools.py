# ceg/core/tools.py

import logging
import math
from collections import defaultdict
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Union

import networkx as nx

from ceg.core.types import (UNCOLOURED, ColouredGraph, EdgeSpec, EventTree,
                            Floret, PathSignature, VertexId)
from ceg.errors import (CycleDetected, Disconnected, DuplicateSiblingLabel,
                        EmptyTree, InvalidParameter, IsLeaf, MultipleParents,
                        MultipleRoots)
from config import CEG_TOLERANCE

logger = logging.getLogger(__name__)


def construct_tree(
    edges: Iterable[Sequence],
    vertices: Optional[Iterable[str]] = None,
    tolerance: Optional[float] = None,
) -> EventTree:
    """
    Build an EventTree from (parent-key, child-key, label[, count[, theta]]) tuples.

    Keys are the caller's names for vertices; each gets a fresh VertexId in order
    of first appearance (declared ``vertices`` first). The root is the unique
    vertex without a parent.

    Raises:
        EmptyTree, DuplicateSiblingLabel, InvalidParameter, Disconnected,
        CycleDetected, MultipleRoots, MultipleParents.
    """
    tolerance = CEG_TOLERANCE if tolerance is None else tolerance
    specs = [e if isinstance(e, EdgeSpec) else EdgeSpec(*e) for e in edges]
    declared = list(vertices or [])
    if not specs:
        raise EmptyTree("an event tree needs at least one edge")

    sibling_labels: Dict[str, set] = defaultdict(set)
    for spec in specs:
        if spec.label in sibling_labels[spec.parent]:
            raise DuplicateSiblingLabel(
                f"vertex {spec.parent!r} has two edges labelled {spec.label!r}"
            )
        sibling_labels[spec.parent].add(spec.label)
        if spec.count is not None and spec.count < 0:
            raise InvalidParameter(f"negative count on edge {spec}")
        if spec.theta is not None and not 0.0 <= spec.theta <= 1.0:
            raise InvalidParameter(f"theta outside [0, 1] on edge {spec}")

    keys = list(dict.fromkeys(declared + [k for s in specs for k in (s.parent, s.child)]))
    skeleton = nx.DiGraph()
    skeleton.add_nodes_from(keys)
    skeleton.add_edges_from((s.parent, s.child) for s in specs)

    if not nx.is_weakly_connected(skeleton):
        raise Disconnected("the edge list does not describe a connected graph")
    if not nx.is_directed_acyclic_graph(skeleton):
        cycle = nx.find_cycle(skeleton)
        raise CycleDetected(f"cycle through {[u for u, _ in cycle]}")
    roots = [k for k in keys if skeleton.in_degree(k) == 0]
    if len(roots) != 1:
        raise MultipleRoots(f"expected one root, found {roots}")
    parents = defaultdict(list)
    for spec in specs:
        parents[spec.child].append(spec.parent)
    for child, ps in parents.items():
        if len(ps) > 1:
            raise MultipleParents(f"vertex {child!r} has parents {ps}")

    by_parent = defaultdict(list)
    for spec in specs:
        by_parent[spec.parent].append(spec)
    for parent, floret in by_parent.items():
        thetas = [s.theta for s in floret]
        if all(t is not None for t in thetas) and not math.isclose(
            sum(thetas), 1.0, abs_tol=tolerance
        ):
            raise InvalidParameter(
                f"thetas of {parent!r} sum to {sum(thetas)}, expected 1"
            )

    ids = {key: VertexId(i) for i, key in enumerate(keys)}
    graph = nx.MultiDiGraph()
    for key in keys:
        graph.add_node(ids[key], key=key)
    for s in specs:
        graph.add_edge(
            ids[s.parent], ids[s.child], key=s.label, label=s.label, count=s.count, theta=s.theta
        )
    return EventTree(graph, ids[roots[0]])


def depth(graph: ColouredGraph) -> int:
    """Number of edges on the longest root-to-leaf (root-to-sink) path."""
    return nx.dag_longest_path_length(graph.graph)


def distance_partition(graph: ColouredGraph) -> Dict[int, FrozenSet[VertexId]]:
    """
    Group every non-terminal vertex by the length k of its shortest directed
    path to a leaf (tree) or to the sink (CEG and intermediate graphs).
    """
    reverse = graph.graph.reverse(copy=False)
    lengths = nx.multi_source_dijkstra_path_length(reverse, set(graph.terminals))
    levels: Dict[int, set] = defaultdict(set)
    for v, k in lengths.items():
        if k > 0:
            levels[int(k)].add(v)
    return {k: frozenset(levels[k]) for k in sorted(levels)}


def height_partition(graph: ColouredGraph) -> Dict[int, FrozenSet[VertexId]]:
    """
    Group every non-terminal vertex by the length of its longest directed path
    to a leaf or the sink. Every child of a vertex at height k has height
    below k; on stratified graphs this equals distance_partition.
    """
    heights: Dict[VertexId, int] = {}
    for v in reversed(list(nx.topological_sort(graph.graph))):
        heights[v] = 1 + max(
            (heights[c] for c in graph.graph.successors(v)), default=-1
        )
    levels: Dict[int, set] = defaultdict(set)
    for v, k in heights.items():
        if k > 0:
            levels[k].add(v)
    return {k: frozenset(levels[k]) for k in sorted(levels)}


def paths(
    graph: ColouredGraph,
    colouring: Optional[Union[str, Mapping[VertexId, str]]] = None,
) -> FrozenSet[PathSignature]:
    """
    All root-to-leaf (root-to-sink) paths as (vertex colour, edge label) sequences.

    ``colouring`` overrides the graph's own colours: a single string colours
    every vertex alike, a mapping colours vertex by vertex.
    """
    if colouring is None:
        colour_of = graph.colour
    elif isinstance(colouring, str):
        colour_of = lambda v: colouring  # noqa: E731
    else:
        colour_of = lambda v: colouring.get(v, UNCOLOURED)  # noqa: E731

    result = set()
    stack = [(graph.root, ())]
    while stack:
        v, prefix = stack.pop()
        colour = colour_of(v)
        for edge in graph.out_edges(v):
            steps = prefix + ((colour, edge.label),)
            if graph.is_terminal(edge.target):
                result.add(PathSignature(steps))
            else:
                stack.append((edge.target, steps))
    return frozenset(result)


def floret(graph: ColouredGraph, v: VertexId) -> Floret:
    if v not in graph.graph:
        raise KeyError(v)
    if graph.is_terminal(v):
        raise IsLeaf(f"vertex {graph.key(v)!r} has no outgoing edges")
    edges = graph.out_edges(v)
    return Floret(v, frozenset({v, *(e.target for e in edges)}), edges)
