# ceg/bench/generator.py

import logging
import random
from collections import deque
from typing import Dict, List, Optional

from ceg.core.tools import construct_tree
from ceg.core.types import EdgeSpec
from ceg.errors import InvalidParameter
from ceg.staging.tools import apply_staging
from ceg.staging.types import StagedTree, StagePartition

logger = logging.getLogger(__name__)


def _dirichlet(rng: random.Random, k: int) -> List[float]:
    draws = [rng.gammavariate(1.0, 1.0) for _ in range(k)]
    total = sum(draws)
    return [d / total for d in draws]


def random_staged_tree(
    seed: int,
    depth: int,
    branching: int,
    stage_density: float,
    leaf_probability: float = 0.3,
    with_counts: bool = False,
) -> StagedTree:
    """
    Grow a random staged tree.

    Every situation gets between 1 and ``branching`` children labelled x0, x1, ...
    The first child of each vertex on the leftmost spine always continues, so
    the tree has exactly ``depth`` levels; other children below ``depth``
    become leaves with probability ``leaf_probability`` (0 gives a stratified
    tree). Situations are visited breadth first and, with probability
    ``stage_density``, join a random earlier stage with the same labels.
    Each stage draws one theta vector which all its members copy, so the
    staging is valid by construction.

    Args:
        seed: Seed for a private random.Random; equal arguments give equal trees.
        depth: Length of the longest root-to-leaf path, at least 1.
        branching: Largest number of children per situation, at least 1.
        stage_density: Probability in [0, 1] of joining an existing stage.
        leaf_probability: Probability in [0, 1) that a non-spine child stops early.
        with_counts: Also draw small edge counts.

    Raises:
        InvalidParameter: a parameter outside its range.
    """
    if depth < 1:
        raise InvalidParameter(f"depth must be at least 1, got {depth}")
    if branching < 1:
        raise InvalidParameter(f"branching must be at least 1, got {branching}")
    if not 0.0 <= stage_density <= 1.0:
        raise InvalidParameter(f"stage density must lie in [0, 1], got {stage_density}")
    if not 0.0 <= leaf_probability < 1.0:
        raise InvalidParameter(f"leaf probability must lie in [0, 1), got {leaf_probability}")

    rng = random.Random(seed)
    children: Dict[str, List[str]] = {}
    queue = deque([("v0", 0, True)])
    n = 1
    while queue:
        key, level, spine = queue.popleft()
        kids = []
        for i in range(rng.randint(1, branching)):
            child = f"v{n}"
            n += 1
            kids.append(child)
            if level + 1 == depth:
                continue
            if (spine and i == 0) or rng.random() >= leaf_probability:
                queue.append((child, level + 1, spine and i == 0))
        children[key] = kids

    stages: List[List[str]] = []
    by_arity: Dict[int, List[int]] = {}
    for key, kids in children.items():
        candidates = by_arity.setdefault(len(kids), [])
        if candidates and rng.random() < stage_density:
            stages[rng.choice(candidates)].append(key)
        else:
            candidates.append(len(stages))
            stages.append([key])

    specs: List[EdgeSpec] = []
    for members in stages:
        thetas = _dirichlet(rng, len(children[members[0]]))
        for key in members:
            for i, (child, theta) in enumerate(zip(children[key], thetas)):
                count: Optional[int] = rng.randint(0, 20) if with_counts else None
                specs.append(EdgeSpec(key, child, f"x{i}", count, theta))

    tree = construct_tree(specs)
    partition = StagePartition.from_groups(
        [tree.vertex_for_key(k) for k in members] for members in stages
    )
    logger.debug(
        "random tree seed=%d: %d situations, %d stages", seed, len(children), len(stages)
    )
    return apply_staging(tree, partition)
