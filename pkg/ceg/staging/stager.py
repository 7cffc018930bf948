# ceg/staging/stager.py

import logging
from typing import List, Mapping, Optional, Tuple

from ceg.core.tools import construct_tree
from ceg.core.types import EdgeSpec, EventTree, VertexId
from ceg.errors import ZeroCountSituation
from ceg.staging.types import StagePartition
from ceg.staging.utils import canonical_labels, label_vector, vectors_close
from config import CEG_TOLERANCE

logger = logging.getLogger(__name__)


def _frequencies(
    tree: EventTree, partition: StagePartition, v: VertexId
) -> Mapping[str, float]:
    counts = label_vector(tree, partition, v, "count")
    if counts is None:
        raise ZeroCountSituation(f"{tree.key(v)!r} has edges without counts")
    total = sum(counts.values())
    if total <= 0:
        raise ZeroCountSituation(f"{tree.key(v)!r} has no observations")
    return {label: n / total for label, n in counts.items()}


def naive_exact_stager(
    tree: EventTree,
    tolerance: Optional[float] = None,
    label_equivalence: Optional[Mapping[str, str]] = None,
) -> StagePartition:
    """
    Stage situations that have identical canonical label multisets and
    relative-frequency vectors equal within ``tolerance``.

    This is plumbing for trees built from data; it does no model selection.
    Situations are visited in root-path order and join the first stage whose
    founding member matches.
    """
    tolerance = CEG_TOLERANCE if tolerance is None else tolerance
    lookup = StagePartition((), dict(label_equivalence or {}))
    founders: List[Tuple[VertexId, object, Mapping[str, float]]] = []
    groups: List[List[VertexId]] = []

    for v in sorted(tree.situations, key=tree.root_path):
        labels = canonical_labels(tree, lookup, v)
        freqs = _frequencies(tree, lookup, v)
        for i, (_, founder_labels, founder_freqs) in enumerate(founders):
            if founder_labels == labels and vectors_close(freqs, founder_freqs, tolerance):
                groups[i].append(v)
                break
        else:
            founders.append((v, labels, freqs))
            groups.append([v])

    logger.debug(
        "naive stager: %d situations in %d stages", len(tree.situations), len(groups)
    )
    return StagePartition.from_groups(groups, label_equivalence=label_equivalence)


def estimate_thetas(tree: EventTree) -> EventTree:
    """Return a copy of ``tree`` whose edge thetas are the relative frequencies of its counts."""
    specs = []
    for v in sorted(tree.situations, key=tree.root_path):
        edges = tree.out_edges(v)
        if any(e.count is None for e in edges):
            raise ZeroCountSituation(f"{tree.key(v)!r} has edges without counts")
        total = sum(e.count for e in edges)
        if total <= 0:
            raise ZeroCountSituation(f"{tree.key(v)!r} has no observations")
        for e in edges:
            specs.append(
                EdgeSpec(tree.key(v), tree.key(e.target), e.label, e.count, e.count / total)
            )
    return construct_tree(specs)
