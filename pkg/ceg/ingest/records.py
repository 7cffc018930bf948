# ceg/ingest/records.py

import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from ceg.core.tools import construct_tree
from ceg.core.types import EdgeSpec, EventTree
from ceg.errors import (DuplicateSiblingLabel, EmptyTable,
                        InconsistentTermination, IngestError, IsLeaf,
                        PrefixNotFound, UnknownColumn)
from config import CEG_MISSING_VALUES, CEG_SENTINEL

logger = logging.getLogger(__name__)

Row = Tuple[Optional[str], ...]


@dataclass(frozen=True)
class RecordTable:
    """Categorical records; a value of None marks a missing cell."""

    columns: Tuple[str, ...]
    rows: Tuple[Row, ...]

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise IngestError(
                    f"row {i} has {len(row)} values for {len(self.columns)} columns"
                )

    @classmethod
    def from_rows(cls, columns: Sequence[str], rows: Iterable[Sequence]) -> "RecordTable":
        return cls(tuple(columns), tuple(tuple(r) for r in rows))

    @classmethod
    def from_csv(
        cls, path: Union[str, Path], missing_values: Optional[Sequence[str]] = None
    ) -> "RecordTable":
        missing = set(CEG_MISSING_VALUES if missing_values is None else missing_values)
        try:
            frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
        except pd.errors.EmptyDataError as e:
            raise EmptyTable(f"{path}: {e}") from e
        except UnicodeDecodeError as e:
            raise IngestError(f"{path}: not UTF-8 text ({e.reason} at byte {e.start})") from e
        frame.columns = [str(c).strip() for c in frame.columns]
        rows = [
            tuple(None if value.strip() in missing else value for value in record)
            for record in frame.itertuples(index=False, name=None)
        ]
        return cls(tuple(frame.columns), tuple(rows))


def _count_prefixes(
    rows: Sequence[Row], indices: Sequence[int], sentinel: str
) -> Tuple[Counter, Counter, int]:
    prefixes: Counter = Counter()
    endings: Counter = Counter()
    dropped = 0
    for row in rows:
        values = [row[i].strip() if row[i] is not None else None for i in indices]
        if sentinel in values:
            values = values[: values.index(sentinel)]
        if not values or any(v is None for v in values):
            dropped += 1
            continue
        path = tuple(values)
        for j in range(1, len(path) + 1):
            prefixes[path[:j]] += 1
        endings[path] += 1
    return prefixes, endings, dropped


def ingest_records(
    table: RecordTable,
    column_order: Sequence[str],
    sentinel: Optional[str] = None,
    chunk_size: Optional[int] = None,
) -> EventTree:
    """
    Build an event tree with edge counts from categorical records.

    Each retained row is a root-to-leaf path over ``column_order``; an edge's
    count is the number of rows traversing it. Value combinations that never
    occur get no branch. Rows with a missing value are dropped; a ``sentinel``
    value ends a row's path early, which is how non-stratified processes are
    written down.

    Args:
        table: The records.
        column_order: Variables in event-tree order.
        sentinel: Early-termination value (default CEG_SENTINEL).
        chunk_size: Count rows in chunks of this size; the result does not depend on it.

    Returns:
        EventTree with counts; vertex keys are "v0" (root), "v1", ... in
        breadth-first, label-sorted order.
    """
    sentinel = CEG_SENTINEL if sentinel is None else sentinel
    if not table.rows:
        raise EmptyTable("the table has no rows")
    if not column_order:
        raise IngestError("no columns selected")
    unknown = [c for c in column_order if c not in table.columns]
    if unknown:
        raise UnknownColumn(f"unknown column(s): {unknown}")
    if len(set(column_order)) != len(column_order):
        raise UnknownColumn(f"column order repeats a column: {list(column_order)}")
    indices = [table.columns.index(c) for c in column_order]

    size = chunk_size or len(table.rows)
    prefixes: Counter = Counter()
    endings: Counter = Counter()
    dropped = 0
    for start in range(0, len(table.rows), size):
        p, e, d = _count_prefixes(table.rows[start : start + size], indices, sentinel)
        prefixes.update(p)
        endings.update(e)
        dropped += d
    if dropped:
        logger.warning("dropped %d row(s) with missing values or no path", dropped)
    if not prefixes:
        raise EmptyTable("no row survived missing-value removal")

    continued = {path[:-1] for path in prefixes}
    for path in endings:
        if path in continued:
            raise InconsistentTermination(
                f"rows end at {list(path)} while other rows continue past it"
            )

    ordered = sorted(prefixes, key=lambda p: (len(p), p))
    keys = {(): "v0"}
    keys.update({path: f"v{i}" for i, path in enumerate(ordered, start=1)})
    specs = [
        EdgeSpec(keys[path[:-1]], keys[path], path[-1], prefixes[path]) for path in ordered
    ]
    return construct_tree(specs)


def add_sampling_zero(
    tree: EventTree, prefix: Sequence[str], new_label: str
) -> EventTree:
    """
    Add an unobserved but possible outcome: a zero-count edge to a fresh leaf
    under the situation reached by following ``prefix`` from the root.
    When the situation's edges carry thetas the new edge gets theta 0.

    Raises:
        PrefixNotFound, IsLeaf, DuplicateSiblingLabel
    """
    v = tree.vertex_for_path(tuple(prefix))
    if v is None:
        raise PrefixNotFound(f"no vertex at {list(prefix)}")
    if tree.is_terminal(v):
        raise IsLeaf(f"{list(prefix)} addresses a leaf")
    siblings = tree.out_edges(v)
    if any(e.label == new_label for e in siblings):
        raise DuplicateSiblingLabel(f"{list(prefix)} already has an edge {new_label!r}")

    taken = {tree.key(u) for u in tree.vertices}
    leaf = f"{tree.key(v)}/{new_label}"
    n = 1
    while leaf in taken:
        leaf = f"{tree.key(v)}/{new_label}#{n}"
        n += 1
    theta = 0.0 if siblings and all(e.theta is not None for e in siblings) else None
    specs: List[EdgeSpec] = tree.edge_specs()
    specs.append(EdgeSpec(tree.key(v), leaf, new_label, 0, theta))
    return construct_tree(specs)
