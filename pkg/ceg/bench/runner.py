# ceg/bench/runner.py

import logging
import random
import time
from pathlib import Path
from typing import Any, Dict, Iterable, List, Tuple, Union

import pandas as pd

from ceg.bench.generator import random_staged_tree
from ceg.compaction.engine import compact
from ceg.compaction.trace import CompactionMode, count_merge_work
from ceg.core.tools import depth
from ceg.errors import CegError
from ceg.io.json_codec import load_staging, load_tree
from ceg.roundtrip.tools import ceg_isomorphic
from ceg.staging.tools import apply_staging
from ceg.staging.types import StagedTree
from config import CEG_BENCH_REPEATS

logger = logging.getLogger(__name__)

COLUMNS = [
    "instance",
    "situations",
    "depth",
    "t_baseline_ms",
    "v_baseline",
    "t_optimal_ms",
    "v_optimal",
    "equal",
    "iterations_baseline",
    "iterations_optimal",
]

Instance = Tuple[str, StagedTree]


def _timed(st: StagedTree, mode: CompactionMode, repeats: int):
    best = float("inf")
    for _ in range(max(1, repeats)):
        started = time.perf_counter()
        ceg, trace = compact(st, mode)
        best = min(best, (time.perf_counter() - started) * 1000.0)
    return ceg, trace, best


def compare_modes(name: str, st: StagedTree, repeats: int = CEG_BENCH_REPEATS) -> Dict[str, Any]:
    """
    One comparison row: both modes on ``st``. Each time is the fastest of
    ``repeats`` runs.
    """
    baseline, baseline_trace, t_baseline = _timed(st, CompactionMode.BASELINE, repeats)
    optimal, optimal_trace, t_optimal = _timed(st, CompactionMode.OPTIMAL, repeats)
    return {
        "instance": name,
        "situations": len(st.situations),
        "depth": depth(st),
        "t_baseline_ms": t_baseline,
        "v_baseline": baseline.number_of_vertices(),
        "t_optimal_ms": t_optimal,
        "v_optimal": optimal.number_of_vertices(),
        "equal": ceg_isomorphic(baseline, optimal),
        "iterations_baseline": count_merge_work(baseline_trace).iterations,
        "iterations_optimal": count_merge_work(optimal_trace).iterations,
    }


def run_bench(
    instances: Iterable[Instance], repeats: int = CEG_BENCH_REPEATS
) -> Tuple[pd.DataFrame, List[Dict[str, str]]]:
    """
    Compare Baseline and Optimal compaction on every instance.

    Returns:
        (table, errors): one row per instance that ran; failed instances are
        listed in ``errors`` and do not stop the run.
    """
    rows: List[Dict[str, Any]] = []
    errors: List[Dict[str, str]] = []
    for name, st in instances:
        try:
            row = compare_modes(name, st, repeats)
        except CegError as e:
            logger.warning("instance %s failed: %s", name, e)
            errors.append({"instance": name, "error": f"{type(e).__name__}: {e}"})
            continue
        if not row["equal"]:
            logger.warning("instance %s: baseline and optimal CEGs differ", name)
        rows.append(row)
    return pd.DataFrame(rows, columns=COLUMNS), errors


def random_instances(
    n: int,
    depth: int,
    branching: int,
    stage_density: float,
    seed: int,
    leaf_probability: float = 0.3,
) -> List[Instance]:
    rng = random.Random(seed)
    instances = []
    for i in range(n):
        instance_seed = rng.randrange(2**32)
        st = random_staged_tree(
            instance_seed, depth, branching, stage_density, leaf_probability
        )
        instances.append((f"random-{i:03d}", st))
    return instances


def load_corpus(directory: Union[str, Path]) -> Tuple[List[Instance], List[Dict[str, str]]]:
    """
    Read every ``<name>.tree.json`` with its ``<name>.staging.json`` from
    ``directory``. Unreadable or invalid bundles go to the error list.
    """
    instances: List[Instance] = []
    errors: List[Dict[str, str]] = []
    for tree_path in sorted(Path(directory).glob("*.tree.json")):
        name = tree_path.name[: -len(".tree.json")]
        staging_path = tree_path.with_name(f"{name}.staging.json")
        if not staging_path.exists():
            logger.warning("skipping %s: no %s", name, staging_path.name)
            errors.append({"instance": name, "error": f"missing {staging_path.name}"})
            continue
        try:
            tree = load_tree(tree_path)
            st = apply_staging(tree, load_staging(staging_path, tree))
        except (CegError, OSError) as e:
            logger.warning("skipping %s: %s", name, e)
            errors.append({"instance": name, "error": f"{type(e).__name__}: {e}"})
            continue
        instances.append((name, st))
    return instances, errors


def save_table(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False)
    return path
