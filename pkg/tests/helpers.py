"""Small staged trees shared by the test modules."""

from typing import Iterable, List, Mapping, Optional, Sequence

from ceg.core.tools import construct_tree
from ceg.core.types import EdgeSpec, EventTree
from ceg.staging.tools import apply_staging
from ceg.staging.types import StagedTree, StagePartition

SETTINGS = {"H": "hospital", "C": "care home", "M": "community"}


def t1_tree(with_counts: bool = False) -> EventTree:
    """r -a-> v1, r -b-> v2; v1 and v2 each end in leaves x, y."""
    counts = {"v1": (3, 7), "v2": (30, 70)} if with_counts else {}
    edges = [EdgeSpec("r", "v1", "a", 10 if with_counts else None),
             EdgeSpec("r", "v2", "b", 100 if with_counts else None)]
    for v in ("v1", "v2"):
        cx, cy = counts.get(v, (None, None))
        edges.append(EdgeSpec(v, f"{v}/x", "x", cx))
        edges.append(EdgeSpec(v, f"{v}/y", "y", cy))
    return construct_tree(edges)


def t1_staged(with_counts: bool = False) -> StagedTree:
    tree = t1_tree(with_counts)
    return stage_by_keys(tree, [["r"], ["v1", "v2"]])


def t2_tree() -> EventTree:
    return construct_tree(
        [("r", "v1", "a"), ("r", "l0", "b"), ("v1", "l1", "x"), ("v1", "l2", "y")]
    )


def single_edge_tree() -> EventTree:
    return construct_tree([("r", "l", "e")])


def chain_tree(m: int) -> EventTree:
    """v0 -> v1 -> ... -> vm, every edge labelled x."""
    return construct_tree([(f"v{i}", f"v{i + 1}", "x") for i in range(m)])


def stage_by_keys(
    tree: EventTree,
    groups: Iterable[Sequence[str]],
    label_equivalence: Optional[Mapping[str, str]] = None,
) -> StagedTree:
    """Stage the listed keys together; every situation not listed stands alone."""
    listed: List[List] = [[tree.vertex_for_key(k) for k in g] for g in groups]
    named = {v for g in listed for v in g}
    listed.extend([v] for v in sorted(tree.situations - named))
    return apply_staging(
        tree, StagePartition.from_groups(listed, label_equivalence=label_equivalence)
    )


def trivially_staged(tree: EventTree) -> StagedTree:
    return stage_by_keys(tree, [])


def disease_tree() -> EventTree:
    """
    Setting -> test / no test. A test is positive or negative; a positive test
    and no test both end in death or recovery, where recovery without a test
    is recorded as "recovery*". 13 situations, depth 4.
    """
    edges = []
    for s, setting in SETTINGS.items():
        edges += [
            ("r", s, setting),
            (s, f"T_{s}", "test"),
            (s, f"N_{s}", "no test"),
            (f"T_{s}", f"P_{s}", "positive"),
            (f"T_{s}", f"T_{s}/negative", "negative"),
            (f"P_{s}", f"P_{s}/death", "death"),
            (f"P_{s}", f"P_{s}/recovery", "recovery"),
            (f"N_{s}", f"N_{s}/death", "death"),
            (f"N_{s}", f"N_{s}/recovery", "recovery*"),
        ]
    return construct_tree(edges)


def disease_staged(colouring: str = "A") -> StagedTree:
    """
    A: non-tested patients in hospital and care home share a stage, positive
       tests share one everywhere, tests in hospital and care home share one.
    B: recovery* is read as recovery, so non-tested community patients join
       the positive-test stage.
    """
    tree = disease_tree()
    if colouring == "A":
        return stage_by_keys(
            tree, [["N_H", "N_C"], ["P_H", "P_C", "P_M"], ["T_H", "T_C"]]
        )
    return stage_by_keys(
        tree,
        [["P_H", "P_C", "P_M", "N_M"], ["N_H", "N_C"], ["T_H", "T_C"]],
        label_equivalence={"recovery*": "recovery"},
    )
