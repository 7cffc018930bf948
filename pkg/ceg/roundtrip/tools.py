# ceg/roundtrip/tools.py

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from ceg.core.tools import construct_tree, paths
from ceg.core.types import Ceg, EdgeSpec, PathSignature, VertexId
from ceg.errors import ColourConflict, PrefixMissing
from ceg.roundtrip.utils import canonical_code
from ceg.staging.tools import apply_staging
from ceg.staging.types import StagedTree, StagePartition

logger = logging.getLogger(__name__)


def _path_order(path: PathSignature) -> Tuple[int, Tuple[Tuple[str, str], ...]]:
    return len(path), path.steps


@dataclass(frozen=True)
class SortedPathList:
    paths: Tuple[PathSignature, ...]

    @classmethod
    def from_paths(cls, signatures: Iterable[PathSignature]) -> "SortedPathList":
        return cls(tuple(sorted(set(signatures), key=_path_order)))

    def __len__(self) -> int:
        return len(self.paths)

    def __iter__(self):
        return iter(self.paths)

    def lengths(self) -> List[int]:
        return [len(p) for p in self.paths]


def extract_paths(ceg: Ceg) -> SortedPathList:
    """Every root-to-sink signature, shortest first, ties broken by (colour, label) tuples."""
    return SortedPathList.from_paths(paths(ceg))


def reconstruct_from_paths(
    ordered: SortedPathList,
    thetas: Optional[Dict[Tuple[str, str], float]] = None,
) -> StagedTree:
    """
    Rebuild the staged tree whose root-to-leaf paths are ``ordered``.

    Paths are inserted shortest first. Walking a path from the root, each
    vertex takes the colour of the tuple leaving it, and a missing vertex is
    appended under the one ending the path's prefix. A path may not continue
    through a vertex where a shorter path already ended.

    Raises:
        PrefixMissing: a path runs through the end of another path.
        ColourConflict: two paths give one vertex different colours.
    """
    thetas = thetas or {}
    vertex_of: Dict[Tuple[Tuple[str, str], ...], str] = {(): "v0"}
    ended = set()
    colour: Dict[str, str] = {}
    specs: List[EdgeSpec] = []

    for path in ordered:
        steps = path.steps
        for k, (c, label) in enumerate(steps):
            prefix = steps[:k]
            parent = vertex_of.get(prefix)
            if parent is None or parent in ended:
                raise PrefixMissing(
                    f"no situation ends the prefix {list(prefix)} of path {list(steps)}"
                )
            known = colour.setdefault(parent, c)
            if known != c:
                raise ColourConflict(
                    f"vertex at {list(prefix)} coloured both {known!r} and {c!r}"
                )
            child_prefix = steps[: k + 1]
            if child_prefix not in vertex_of:
                child = f"v{len(vertex_of)}"
                vertex_of[child_prefix] = child
                specs.append(EdgeSpec(parent, child, label, None, thetas.get((c, label))))
        ended.add(vertex_of[steps])

    tree = construct_tree(specs)
    groups: Dict[str, List[VertexId]] = defaultdict(list)
    for key, c in colour.items():
        groups[c].append(tree.vertex_for_key(key))
    names = sorted(groups)
    partition = StagePartition.from_groups([groups[c] for c in names], colours=names)
    return apply_staging(tree, partition)


def reconstruct(ceg: Ceg) -> StagedTree:
    """
    Recover the unique staged tree represented by ``ceg`` from its path set.

    Thetas are read back from the CEG's edges by (colour, label), which is
    well defined because every vertex of one colour belongs to one stage.
    """
    thetas = {
        (ceg.colour(e.source), e.label): e.theta
        for e in ceg.edges
        if e.theta is not None
    }
    return reconstruct_from_paths(extract_paths(ceg), thetas)


def isomorphic(a: StagedTree, b: StagedTree) -> bool:
    return canonical_code(a) == canonical_code(b)


def ceg_isomorphic(a: Ceg, b: Ceg) -> bool:
    """
    Colour and label preserving isomorphism of two CEGs.

    Out-labels are distinct at every vertex, so a simultaneous walk from the
    roots fixes the only candidate bijection.
    """
    if (a.number_of_vertices(), a.number_of_edges()) != (
        b.number_of_vertices(),
        b.number_of_edges(),
    ):
        return False
    forward: Dict[VertexId, VertexId] = {a.root: b.root}
    backward: Dict[VertexId, VertexId] = {b.root: a.root}
    queue = deque([a.root])
    while queue:
        u = queue.popleft()
        w = forward[u]
        if a.colour(u) != b.colour(w):
            return False
        out_a = {e.label: e.target for e in a.out_edges(u)}
        out_b = {e.label: e.target for e in b.out_edges(w)}
        if out_a.keys() != out_b.keys():
            return False
        for label, x in out_a.items():
            y = out_b[label]
            if x in forward:
                if forward[x] != y:
                    return False
            elif y in backward:
                return False
            else:
                forward[x] = y
                backward[y] = x
                queue.append(x)
    return len(forward) == a.number_of_vertices()
