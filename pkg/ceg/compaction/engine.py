# ceg/compaction/engine.py

import logging
import time
from typing import FrozenSet, List, Sequence, Tuple

import networkx as nx

from ceg.compaction.trace import (CompactionMode, IterationRecord, MergeTrace,
                                  StopReason)
from ceg.core.tools import depth, height_partition
from ceg.core.types import SINK_KEY, Ceg, VertexId
from ceg.staging.tools import stages_at_level
from ceg.staging.types import StagedTree

logger = logging.getLogger(__name__)


def _path(graph: nx.MultiDiGraph, v: VertexId) -> Tuple[str, ...]:
    return graph.nodes[v]["path"]


def _signature(graph: nx.MultiDiGraph, v: VertexId) -> FrozenSet[Tuple[str, VertexId]]:
    return frozenset((label, target) for _, target, label in graph.out_edges(v, keys=True))


def merge_leaves(st: StagedTree) -> Ceg:
    """
    Meld every leaf of ``st`` into a single sink w_inf.

    Situations keep their ids, colours and keys; each edge into a leaf is
    redirected to the sink with its label, theta and count.
    """
    graph = nx.MultiDiGraph()
    sink = VertexId(max(st.vertices) + 1)
    for v in sorted(st.situations):
        graph.add_node(v, colour=st.colour(v), key=st.key(v), path=st.root_path(v))
    graph.add_node(sink, key=SINK_KEY)
    for e in st.edges:
        target = sink if st.is_terminal(e.target) else e.target
        graph.add_edge(
            e.source,
            target,
            key=e.label,
            label=e.label,
            theta=e.theta,
            count=e.count,
            original_label=e.original_label,
        )
    return Ceg(graph, st.root, sink)


def _refine_cell(
    graph: nx.MultiDiGraph, cell: FrozenSet[VertexId]
) -> Tuple[List[FrozenSet[VertexId]], int]:
    blocks: List[Tuple[FrozenSet, List[VertexId]]] = []
    comparisons = 0
    for v in sorted(cell, key=lambda u: _path(graph, u)):
        signature = _signature(graph, v)
        for block_signature, members in blocks:
            comparisons += 1
            if block_signature == signature:
                members.append(v)
                break
        else:
            blocks.append((signature, [v]))
    return [frozenset(members) for _, members in blocks], comparisons


def _refine(
    graph: nx.MultiDiGraph, cells: Sequence[FrozenSet[VertexId]]
) -> Tuple[List[FrozenSet[VertexId]], int]:
    refined: List[FrozenSet[VertexId]] = []
    comparisons = 0
    for cell in cells:
        blocks, n = _refine_cell(graph, cell)
        refined.extend(blocks)
        comparisons += n
    return refined, comparisons


def refine_to_positions(
    graph: Ceg, cells: Sequence[FrozenSet[VertexId]]
) -> List[FrozenSet[VertexId]]:
    """
    Split each stage cell so that two situations stay together iff every edge
    of one has an equally labelled edge of the other into the same vertex.
    Every child of a cell member must already be a position.
    """
    refined, _ = _refine(graph.graph, cells)
    return refined


def _merge_in_place(
    graph: nx.MultiDiGraph, cells: Sequence[FrozenSet[VertexId]]
) -> Tuple[FrozenSet[VertexId], FrozenSet[VertexId]]:
    removed = set()
    kept = set()
    for cell in cells:
        representative = min(cell, key=lambda u: _path(graph, u))
        kept.add(representative)
        for v in sorted(cell - {representative}):
            for u, _, label, data in list(graph.in_edges(v, keys=True, data=True)):
                graph.add_edge(u, representative, key=label, **data)
            pooled = {
                key: d for _, _, key, d in graph.out_edges(representative, keys=True, data=True)
            }
            for _, _, label, data in graph.out_edges(v, keys=True, data=True):
                into = pooled.get(label)
                if into is not None and into.get("count") is not None and data.get("count") is not None:
                    into["count"] += data["count"]
            graph.remove_node(v)
            removed.add(v)
    return frozenset(removed), frozenset(kept)


def merge_level(graph: Ceg, cells: Sequence[FrozenSet[VertexId]]) -> Ceg:
    """
    Keep one representative (smallest root path) per position cell; delete
    the other members' outgoing edges and rewire their incoming edges to the
    representative. Counts of deleted edges are pooled onto the
    representative's edge with the same label.
    """
    working = nx.MultiDiGraph(graph.graph)
    _merge_in_place(working, cells)
    return Ceg(working, graph.root, graph.sink)


def compact(
    st: StagedTree,
    mode: CompactionMode = CompactionMode.OPTIMAL,
    keep_graphs: bool = False,
) -> Tuple[Ceg, MergeTrace]:
    """
    Transform a staged tree into its chain event graph.

    After melding the leaves, situations are taken level by level, ordered by
    their longest distance to the sink, so every child of a level is already a
    position when the level is refined and merged. Optimal mode stops after
    the first level that merges nothing, since no higher level can merge
    either; Baseline mode always processes all m-1 levels. Both return the
    same graph.

    Args:
        st: A valid staged tree.
        mode: CompactionMode.OPTIMAL or CompactionMode.BASELINE.
        keep_graphs: Keep the graph after every pass on the trace.

    Returns:
        (ceg, trace)
    """
    started = time.perf_counter()
    m = depth(st)
    trace = MergeTrace(
        mode=CompactionMode(mode),
        depth=m,
        situations=len(st.situations),
        tree_vertices=st.number_of_vertices(),
        tree_edges=st.number_of_edges(),
    )

    g1 = merge_leaves(st)
    trace.leaf_vertices = g1.number_of_vertices()
    trace.leaf_edges = g1.number_of_edges()
    trace.leaf_elapsed = time.perf_counter() - started
    if keep_graphs:
        trace.leaf_graph = g1
    levels = height_partition(g1)
    working = nx.MultiDiGraph(g1.graph)

    trace.stop_reason = StopReason.FULL_DEPTH
    for k in range(1, m):
        pass_started = time.perf_counter()
        stage_cells = stages_at_level(st, levels.get(k, frozenset()))
        position_cells, comparisons = _refine(working, stage_cells)
        removed, kept = _merge_in_place(working, position_cells)
        record = IterationRecord(
            level=k,
            stage_cells=tuple(stage_cells),
            position_cells=tuple(position_cells),
            removed=removed,
            representatives=kept,
            vertices=working.number_of_nodes(),
            edges=working.number_of_edges(),
            comparisons=comparisons,
            elapsed=time.perf_counter() - pass_started,
            graph=Ceg(working.copy(), st.root, g1.sink) if keep_graphs else None,
        )
        trace.records.append(record)
        logger.debug(
            "level %d: %d stage cells, %d positions, %d merged, |V|=%d |E|=%d",
            k,
            len(stage_cells),
            len(position_cells),
            record.merges,
            record.vertices,
            record.edges,
        )
        if trace.mode is CompactionMode.OPTIMAL and not record.merges:
            trace.stop_reason = StopReason.OPTIMAL_FIXPOINT
            break

    trace.elapsed = time.perf_counter() - started
    return Ceg(working, st.root, g1.sink), trace
