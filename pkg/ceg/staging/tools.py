# ceg/staging/tools.py

import logging
from collections import Counter, defaultdict
from typing import Dict, FrozenSet, Iterable, List, Optional

from ceg.core.types import (TRIVIAL_PREFIX, UNCOLOURED, EventTree,
                            VertexId)
from ceg.errors import InvalidPartition, LeafInStage, UnknownVertex
from ceg.staging.types import StagedTree, StagePartition, Violation
from ceg.staging.utils import (canonical_labels, equivalence_cycles,
                               label_vector, trivial_colour, vectors_close)
from config import CEG_TOLERANCE

logger = logging.getLogger(__name__)


def _path_colour(tree: EventTree, partition: StagePartition, v: VertexId) -> str:
    return trivial_colour(tuple(partition.canonical_label(l) for l in tree.root_path(v)))


def _is_own_trivial_colour(
    tree: EventTree, partition: StagePartition, members: FrozenSet[VertexId], colour: str
) -> bool:
    # a trivial colour may only name the single situation at its own path
    if len(members) != 1:
        return False
    (v,) = members
    return _path_colour(tree, partition, v) == colour


def validate_stage_partition(
    tree: EventTree, partition: StagePartition, tolerance: Optional[float] = None
) -> List[Violation]:
    """
    Check that a partition is a valid staging of ``tree``.

    Every situation must lie in exactly one stage; all members of a stage must
    share their multiset of (canonical) outgoing labels and, where every member
    carries thetas, their thetas matched by label.

    Args:
        tree: The event tree being staged.
        partition: Candidate stages, colours and label equivalence.
        tolerance: Absolute tolerance for theta comparison (default CEG_TOLERANCE).

    Returns:
        List of Violation; empty when the partition is valid.

    Raises:
        UnknownVertex: a stage names a vertex not in ``tree``.
        LeafInStage: a stage names a leaf.
    """
    tolerance = CEG_TOLERANCE if tolerance is None else tolerance
    violations: List[Violation] = []

    for i, stage in enumerate(partition.stages):
        for v in stage.members:
            if v not in tree.graph:
                raise UnknownVertex(f"stage {i} names unknown vertex {v!r}")
            if tree.is_terminal(v):
                raise LeafInStage(f"stage {i} names leaf {tree.key(v)!r}")

    for label in equivalence_cycles(partition.label_equivalence):
        violations.append(
            Violation("equivalence", f"label {label!r} is on an equivalence cycle")
        )

    seen: Dict[VertexId, int] = {}
    for i, stage in enumerate(partition.stages):
        if not stage.members:
            violations.append(Violation("empty", "stage has no members", i))
        for v in stage.members:
            if v in seen:
                violations.append(
                    Violation(
                        "overlap",
                        f"{tree.key(v)!r} is also in stage {seen[v]}",
                        i,
                    )
                )
            seen.setdefault(v, i)
    for v in sorted(tree.situations - set(seen), key=tree.root_path):
        violations.append(Violation("missing", f"{tree.key(v)!r} is in no stage"))

    for v in sorted(tree.situations, key=tree.root_path):
        labels = canonical_labels(tree, partition, v)
        clashing = sorted(label for label, n in labels.items() if n > 1)
        if clashing:
            violations.append(
                Violation(
                    "label-collision",
                    f"{tree.key(v)!r} has several edges canonicalised to {clashing}",
                )
            )

    colours = Counter(s.colour for s in partition.stages if s.colour is not None)
    for i, stage in enumerate(partition.stages):
        if stage.colour is None:
            continue
        if colours[stage.colour] > 1:
            violations.append(
                Violation("colour", f"colour {stage.colour!r} is used twice", i)
            )
        if stage.colour == UNCOLOURED or (
            stage.colour.startswith(TRIVIAL_PREFIX)
            and not _is_own_trivial_colour(tree, partition, stage.members, stage.colour)
        ):
            violations.append(
                Violation("colour", f"colour {stage.colour!r} is reserved", i)
            )

    for i, stage in enumerate(partition.stages):
        members = sorted(stage.members, key=tree.root_path)
        if len(members) < 2:
            continue
        first = members[0]
        expected = canonical_labels(tree, partition, first)
        for v in members[1:]:
            if canonical_labels(tree, partition, v) != expected:
                violations.append(
                    Violation(
                        "labels",
                        f"{tree.key(v)!r} and {tree.key(first)!r} have different edge labels",
                        i,
                    )
                )
        thetas = [
            (v, label_vector(tree, partition, v, "theta")) for v in members
        ]
        thetas = [(v, t) for v, t in thetas if t is not None]
        if len(thetas) < 2:
            continue
        ref_v, ref = thetas[0]
        for v, theta in thetas[1:]:
            if not vectors_close(theta, ref, tolerance):
                violations.append(
                    Violation(
                        "theta",
                        f"{tree.key(v)!r} and {tree.key(ref_v)!r} have different thetas",
                        i,
                    )
                )

    return violations


def apply_staging(
    tree: EventTree, partition: StagePartition, tolerance: Optional[float] = None
) -> StagedTree:
    """
    Colour ``tree`` by ``partition``.

    Stages are ordered by the smallest root path among their members. A stage
    keeps its declared colour; an undeclared non-trivial stage gets the next
    free ``u<n>``; an undeclared singleton gets a colour derived from its root
    path so no two trivial stages ever look alike.

    Raises:
        InvalidPartition: carrying the violations from validate_stage_partition.
    """
    violations = validate_stage_partition(tree, partition, tolerance)
    if violations:
        raise InvalidPartition(violations)

    declared = {s.colour for s in partition.stages if s.colour is not None}
    ordered = sorted(
        partition.stages, key=lambda s: min(tree.root_path(v) for v in s.members)
    )
    colouring: Dict[VertexId, str] = {}
    n = 0
    for stage in ordered:
        colour = stage.colour
        if colour is None and len(stage.members) == 1:
            (v,) = stage.members
            colour = _path_colour(tree, partition, v)
        elif colour is None:
            while f"u{n}" in declared:
                n += 1
            colour = f"u{n}"
            n += 1
        for v in stage.members:
            colouring[v] = colour
    return StagedTree(tree, partition, colouring)


def stages_at_level(st: StagedTree, level: Iterable[VertexId]) -> List[FrozenSet[VertexId]]:
    """
    Split a set of same-level situations into cells: vertices share a cell iff
    they share a stage. Cells come in order of their smallest root path.
    """
    cells: Dict[int, set] = defaultdict(set)
    for v in level:
        cells[st.stage_of(v)].add(v)
    return sorted(
        (frozenset(c) for c in cells.values()),
        key=lambda c: min(st.root_path(v) for v in c),
    )
