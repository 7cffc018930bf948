# ceg/compaction/trace.py

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple

from ceg.core.types import Ceg, VertexId


class CompactionMode(str, Enum):
    OPTIMAL = "optimal"
    BASELINE = "baseline"


class StopReason(str, Enum):
    OPTIMAL_FIXPOINT = "OptimalFixpoint"
    FULL_DEPTH = "FullDepth"


Cells = Tuple[FrozenSet[VertexId], ...]


@dataclass
class IterationRecord:
    """One refine-and-merge pass over the situations at height ``level``."""

    level: int
    stage_cells: Cells
    position_cells: Cells
    removed: FrozenSet[VertexId]
    representatives: FrozenSet[VertexId]
    vertices: int
    edges: int
    comparisons: int
    elapsed: float
    graph: Optional[Ceg] = None

    @property
    def graph_index(self) -> int:
        return self.level + 1

    @property
    def merges(self) -> int:
        return len(self.removed)


@dataclass
class MergeTrace:
    mode: CompactionMode
    depth: int
    situations: int
    tree_vertices: int
    tree_edges: int
    leaf_vertices: int = 0
    leaf_edges: int = 0
    leaf_elapsed: float = 0.0
    records: List[IterationRecord] = field(default_factory=list)
    stop_reason: Optional[StopReason] = None
    elapsed: float = 0.0
    leaf_graph: Optional[Ceg] = None

    def vertex_counts(self) -> List[int]:
        """Vertex counts of the tree, the leaf-melded graph and every pass, in order."""
        return [self.tree_vertices, self.leaf_vertices] + [r.vertices for r in self.records]

    def edge_counts(self) -> List[int]:
        return [self.tree_edges, self.leaf_edges] + [r.edges for r in self.records]

    def position_partition(self, situations: Iterable[VertexId]) -> List[FrozenSet[VertexId]]:
        """
        Merge cells accumulated over every pass; situations on levels that were
        never processed stand alone.
        """
        cells = [cell for r in self.records for cell in r.position_cells]
        covered = {v for cell in cells for v in cell}
        cells.extend(frozenset({v}) for v in situations if v not in covered)
        return cells

    def to_dict(self, key: Callable[[VertexId], str] = str) -> Dict[str, Any]:
        def cells(cs: Cells) -> List[List[str]]:
            return [sorted(key(v) for v in c) for c in cs]

        return {
            "mode": self.mode.value,
            "depth": self.depth,
            "situations": self.situations,
            "stop_reason": self.stop_reason.value if self.stop_reason else None,
            "elapsed": self.elapsed,
            "leaf_step": {
                "vertices_before": self.tree_vertices,
                "edges_before": self.tree_edges,
                "vertices": self.leaf_vertices,
                "edges": self.leaf_edges,
                "elapsed": self.leaf_elapsed,
            },
            "iterations": [
                {
                    "graph_index": r.graph_index,
                    "level": r.level,
                    "stage_cells": cells(r.stage_cells),
                    "position_cells": cells(r.position_cells),
                    "removed": sorted(key(v) for v in r.removed),
                    "representatives": sorted(key(v) for v in r.representatives),
                    "vertices": r.vertices,
                    "edges": r.edges,
                    "comparisons": r.comparisons,
                    "elapsed": r.elapsed,
                }
                for r in self.records
            ],
        }


@dataclass(frozen=True)
class MergeWork:
    iterations: int
    graphs_built: int
    merging_iterations: int
    comparisons: int
    elapsed: float
    vertex_counts: Tuple[int, ...]
    edge_counts: Tuple[int, ...]


def count_merge_work(trace: MergeTrace) -> MergeWork:
    """Totals of a compaction run, in the shape of a baseline-vs-optimal comparison row."""
    return MergeWork(
        iterations=len(trace.records),
        graphs_built=len(trace.records) + 1,
        merging_iterations=sum(1 for r in trace.records if r.merges),
        comparisons=sum(r.comparisons for r in trace.records),
        elapsed=trace.elapsed,
        vertex_counts=tuple(trace.vertex_counts()),
        edge_counts=tuple(trace.edge_counts()),
    )
