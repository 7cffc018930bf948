# ceg/oracle/positions.py

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

from networkx.utils import UnionFind

from ceg.core.types import VertexId
from ceg.errors import TooLarge
from ceg.staging.types import StagedTree
from config import CEG_ORACLE_MAX_PAIRS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PositionPartition:
    cells: Tuple[FrozenSet[VertexId], ...]

    def as_set(self) -> FrozenSet[FrozenSet[VertexId]]:
        return frozenset(self.cells)

    def __len__(self) -> int:
        return len(self.cells)


class _SubtreeEncoder:
    """Numbers coloured subtrees so that isomorphic subtrees share a number."""

    def __init__(self, st: StagedTree):
        self._st = st
        self._table: Dict[Tuple, int] = {}
        self._memo: Dict[VertexId, int] = {}

    def encode(self, v: VertexId) -> int:
        if v in self._memo:
            return self._memo[v]
        stack = [v]
        while stack:
            u = stack[-1]
            pending = [c for c in self._st.children(u) if c not in self._memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            if self._st.is_terminal(u):
                signature: Tuple = (None, ())
            else:
                signature = (
                    self._st.colour(u),
                    tuple(sorted((e.label, self._memo[e.target]) for e in self._st.out_edges(u))),
                )
            self._memo[u] = self._table.setdefault(signature, len(self._table))
        return self._memo[v]


def subtree_isomorphic(st: StagedTree, v1: VertexId, v2: VertexId) -> bool:
    """True iff the subtrees rooted at v1 and v2 match in structure, labels and colours."""
    encoder = _SubtreeEncoder(st)
    return encoder.encode(v1) == encoder.encode(v2)


def positions_brute_force(
    st: StagedTree, max_pairs: Optional[int] = None
) -> PositionPartition:
    """
    Positions of ``st`` by comparing every pair of situations.

    Raises:
        TooLarge: more than ``max_pairs`` pairs would be compared.
    """
    max_pairs = CEG_ORACLE_MAX_PAIRS if max_pairs is None else max_pairs
    situations = sorted(st.situations, key=st.root_path)
    n_pairs = len(situations) * (len(situations) - 1) // 2
    if n_pairs > max_pairs:
        raise TooLarge(f"{n_pairs} pairs exceed the limit of {max_pairs}")

    encoder = _SubtreeEncoder(st)
    groups = UnionFind(situations)
    for v1, v2 in itertools.combinations(situations, 2):
        if encoder.encode(v1) == encoder.encode(v2):
            groups.union(v1, v2)

    cells = sorted(
        (frozenset(c) for c in groups.to_sets()),
        key=lambda c: min(st.root_path(v) for v in c),
    )
    logger.debug("oracle: %d situations in %d positions", len(situations), len(cells))
    return PositionPartition(tuple(cells))
