from typing import Dict, Tuple

import networkx as nx

from ceg.core.types import ColouredGraph, VertexId

LEAF_CODE: Tuple = ("leaf",)


def canonical_code(graph: ColouredGraph) -> Tuple:
    """
    Canonical form of a coloured, labelled rooted tree: every situation is
    encoded as (colour, ((label, child code), ...)) with children sorted by
    label, so two trees are isomorphic iff their codes are equal.
    """
    codes: Dict[VertexId, Tuple] = {}
    for v in nx.dfs_postorder_nodes(graph.graph, graph.root):
        if graph.is_terminal(v):
            codes[v] = LEAF_CODE
            continue
        codes[v] = (
            graph.colour(v),
            tuple((e.label, codes[e.target]) for e in graph.out_edges(v)),
        )
    return codes[graph.root]
