import json
import math
from collections import Counter
from typing import Dict, List, Mapping, Optional, Tuple

from ceg.core.types import TRIVIAL_PREFIX, EventTree, VertexId
from ceg.staging.types import StagePartition


def trivial_colour(path: Tuple[str, ...]) -> str:
    return TRIVIAL_PREFIX + json.dumps(list(path), separators=(",", ":"))


def canonical_labels(
    tree: EventTree, partition: StagePartition, v: VertexId
) -> Counter:
    return Counter(partition.canonical_label(e.label) for e in tree.out_edges(v))


def label_vector(
    tree: EventTree, partition: StagePartition, v: VertexId, attr: str
) -> Optional[Dict[str, float]]:
    """Per canonical label, the edge's ``theta`` or ``count``; None if any is missing."""
    vector = {}
    for e in tree.out_edges(v):
        value = getattr(e, attr)
        if value is None:
            return None
        vector[partition.canonical_label(e.label)] = value
    return vector


def vectors_close(
    a: Mapping[str, float], b: Mapping[str, float], tolerance: float
) -> bool:
    if a.keys() != b.keys():
        return False
    return all(math.isclose(a[k], b[k], rel_tol=0.0, abs_tol=tolerance) for k in a)


def equivalence_cycles(label_equivalence: Mapping[str, str]) -> List[str]:
    cyclic = []
    for start in label_equivalence:
        seen = {start}
        label = start
        while label in label_equivalence:
            label = label_equivalence[label]
            if label in seen:
                cyclic.append(start)
                break
            seen.add(label)
    return cyclic

