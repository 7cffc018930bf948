# ceg/staging/types.py

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

import networkx as nx

from ceg.core.types import (ColouredGraph, EventTree, VertexId,
                            label_paths)


@dataclass(frozen=True)
class Stage:
    members: FrozenSet[VertexId]
    colour: Optional[str] = None


@dataclass(frozen=True, eq=False)
class StagePartition:
    stages: Tuple[Stage, ...]
    label_equivalence: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_groups(
        cls,
        groups: Iterable[Iterable[VertexId]],
        colours: Optional[Sequence[Optional[str]]] = None,
        label_equivalence: Optional[Mapping[str, str]] = None,
    ) -> "StagePartition":
        groups = [frozenset(g) for g in groups]
        colours = list(colours) if colours is not None else [None] * len(groups)
        return cls(
            tuple(Stage(g, c) for g, c in zip(groups, colours)),
            dict(label_equivalence or {}),
        )

    def canonical_label(self, label: str) -> str:
        seen = {label}
        while label in self.label_equivalence:
            label = self.label_equivalence[label]
            if label in seen:
                break
            seen.add(label)
        return label

    def stage_index(self) -> Dict[VertexId, int]:
        return {v: i for i, stage in enumerate(self.stages) for v in stage.members}


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    stage: Optional[int] = None

    def __str__(self) -> str:
        where = f" (stage {self.stage})" if self.stage is not None else ""
        return f"{self.kind}{where}: {self.message}"


class StagedTree(ColouredGraph):
    """
    An event tree whose situations are coloured by stage membership.

    Edge labels are canonicalised through the partition's label equivalence;
    the label found in the event tree is kept as ``original_label`` when it
    differs. Build instances with ``apply_staging``.
    """

    def __init__(
        self,
        tree: EventTree,
        partition: StagePartition,
        colouring: Mapping[VertexId, str],
    ):
        graph = nx.MultiDiGraph()
        for v, data in tree.graph.nodes(data=True):
            graph.add_node(v, **data)
            if v in colouring:
                graph.nodes[v]["colour"] = colouring[v]
        for e in tree.edges:
            label = partition.canonical_label(e.label)
            graph.add_edge(
                e.source,
                e.target,
                key=label,
                label=label,
                theta=e.theta,
                count=e.count,
                original_label=e.label if label != e.label else None,
            )
        super().__init__(graph, tree.root)
        self.tree = tree
        self.partition = partition
        self._paths = label_paths(self._graph, tree.root)
        self._stage_of = partition.stage_index()

    @property
    def leaves(self) -> FrozenSet[VertexId]:
        return self.terminals

    def root_path(self, v: VertexId) -> Tuple[str, ...]:
        return self._paths[v]

    def stage_of(self, v: VertexId) -> int:
        return self._stage_of[v]
