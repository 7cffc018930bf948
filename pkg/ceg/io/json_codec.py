# ceg/io/json_codec.py

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import networkx as nx

from ceg.compaction.trace import MergeTrace
from ceg.core.tools import construct_tree
from ceg.core.types import SINK_KEY, Ceg, EdgeSpec, EventTree, VertexId
from ceg.errors import FormatError
from ceg.staging.types import StagedTree, StagePartition

PathLike = Union[str, Path]


def _read(path: PathLike) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: not valid JSON ({e})") from e
    except UnicodeDecodeError as e:
        raise FormatError(f"{path}: not UTF-8 text ({e.reason} at byte {e.start})") from e
    if not isinstance(data, dict):
        raise FormatError(f"{path}: expected a JSON object at the top level")
    return data


def _write(data: Dict[str, Any], path: PathLike) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data))


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _edge_dict(e, key) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"src": key(e.source), "dst": key(e.target), "label": e.label}
    if e.count is not None:
        entry["count"] = e.count
    if e.theta is not None:
        entry["theta"] = e.theta
    if e.original_label is not None:
        entry["original_label"] = e.original_label
    return entry


def _require(data: Dict[str, Any], *fields: str) -> None:
    missing = [f for f in fields if f not in data]
    if missing:
        raise FormatError(f"missing field(s) {missing}")


def _edge_numbers(e: Dict[str, Any]) -> Tuple[Optional[int], Optional[float]]:
    count, theta = e.get("count"), e.get("theta")
    if count is not None and (isinstance(count, bool) or not isinstance(count, int)):
        raise FormatError(f"edge {e.get('src')!r}->{e.get('dst')!r}: count must be an integer, got {count!r}")
    if theta is not None and (isinstance(theta, bool) or not isinstance(theta, (int, float))):
        raise FormatError(f"edge {e.get('src')!r}->{e.get('dst')!r}: theta must be a number, got {theta!r}")
    return count, theta


# Event trees


def tree_to_dict(tree: EventTree) -> Dict[str, Any]:
    return {
        "root": tree.key(tree.root),
        "vertices": [{"key": tree.key(v)} for v in sorted(tree.vertices)],
        "edges": [_edge_dict(e, tree.key) for e in tree.edges],
    }


def tree_from_dict(data: Dict[str, Any]) -> EventTree:
    _require(data, "edges")
    try:
        specs = [
            EdgeSpec(e["src"], e["dst"], e["label"], *_edge_numbers(e))
            for e in data["edges"]
        ]
        vertices = [v["key"] for v in data.get("vertices", [])]
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed tree edge or vertex: {e}") from e
    tree = construct_tree(specs, vertices=vertices)
    root = data.get("root")
    if root is not None and tree.key(tree.root) != root:
        raise FormatError(f"declared root {root!r} is not the tree's root {tree.key(tree.root)!r}")
    return tree


def load_tree(path: PathLike) -> EventTree:
    return tree_from_dict(_read(path))


def save_tree(tree: EventTree, path: PathLike) -> None:
    _write(tree_to_dict(tree), path)


# Stage partitions


def staging_to_dict(partition: StagePartition, tree: EventTree) -> Dict[str, Any]:
    stages: List[Dict[str, Any]] = []
    for stage in partition.stages:
        entry: Dict[str, Any] = {"members": sorted(tree.key(v) for v in stage.members)}
        if stage.colour is not None:
            entry["colour"] = stage.colour
        stages.append(entry)
    data: Dict[str, Any] = {"stages": stages}
    if partition.label_equivalence:
        data["label_equivalence"] = dict(partition.label_equivalence)
    return data


def staging_from_dict(data: Dict[str, Any], tree: EventTree) -> StagePartition:
    """Stage members are vertex keys of ``tree``; unknown keys are a FormatError."""
    _require(data, "stages")
    groups: List[List[VertexId]] = []
    colours = []
    for i, stage in enumerate(data["stages"]):
        try:
            members = stage["members"]
        except (KeyError, TypeError) as e:
            raise FormatError(f"stage {i} has no member list") from e
        try:
            groups.append([tree.vertex_for_key(k) for k in members])
        except KeyError as e:
            raise FormatError(f"stage {i} names unknown vertex key {e}") from e
        colours.append(stage.get("colour"))
    return StagePartition.from_groups(
        groups, colours=colours, label_equivalence=data.get("label_equivalence")
    )


def load_staging(path: PathLike, tree: EventTree) -> StagePartition:
    return staging_from_dict(_read(path), tree)


def save_staging(partition: StagePartition, tree: EventTree, path: PathLike) -> None:
    _write(staging_to_dict(partition, tree), path)


# Chain event graphs


def ceg_to_dict(ceg: Ceg) -> Dict[str, Any]:
    vertices = []
    for v in sorted(ceg.vertices):
        entry: Dict[str, Any] = {"key": ceg.key(v)}
        if v != ceg.sink:
            entry["colour"] = ceg.colour(v)
        vertices.append(entry)
    return {
        "root": ceg.key(ceg.root),
        "sink": ceg.key(ceg.sink),
        "vertices": vertices,
        "edges": [_edge_dict(e, ceg.key) for e in ceg.edges],
    }


def ceg_from_dict(data: Dict[str, Any]) -> Ceg:
    """
    Rebuild a CEG, checking that it is acyclic, that its sink is the only
    vertex without out-edges and that every vertex lies on a root-to-sink path.
    """
    _require(data, "vertices", "edges", "root")
    sink_key = data.get("sink", SINK_KEY)
    graph = nx.MultiDiGraph()
    ids: Dict[str, VertexId] = {}
    try:
        for i, v in enumerate(data["vertices"]):
            key = v["key"]
            if key in ids:
                raise FormatError(f"vertex key {key!r} appears twice")
            ids[key] = VertexId(i)
            attrs = {"key": key}
            if v.get("colour") is not None:
                attrs["colour"] = v["colour"]
            graph.add_node(ids[key], **attrs)
        for e in data["edges"]:
            u, w, label = ids[e["src"]], ids[e["dst"]], e["label"]
            count, theta = _edge_numbers(e)
            if label in {k for _, _, k in graph.out_edges(u, keys=True)}:
                raise FormatError(f"vertex {e['src']!r} has two edges labelled {label!r}")
            graph.add_edge(
                u,
                w,
                key=label,
                label=label,
                count=count,
                theta=theta,
                original_label=e.get("original_label"),
            )
    except KeyError as e:
        raise FormatError(f"edge or vertex refers to unknown key {e}") from e
    except TypeError as e:
        raise FormatError(f"malformed CEG entry: {e}") from e

    for name, key in (("root", data["root"]), ("sink", sink_key)):
        if key not in ids:
            raise FormatError(f"{name} {key!r} is not a vertex")
    root, sink = ids[data["root"]], ids[sink_key]
    if not nx.is_directed_acyclic_graph(graph):
        raise FormatError("the graph has a cycle")
    terminals = [k for k, v in ids.items() if graph.out_degree(v) == 0]
    if terminals != [sink_key]:
        raise FormatError(f"expected the sink as the only terminal vertex, found {terminals}")
    unreachable = set(graph.nodes) - nx.descendants(graph, root) - {root}
    if unreachable:
        raise FormatError(f"{len(unreachable)} vertex(es) not reachable from the root")
    try:
        return Ceg(graph, root, sink)
    except ValueError as e:
        raise FormatError(str(e)) from e


def load_ceg(path: PathLike) -> Ceg:
    return ceg_from_dict(_read(path))


def save_ceg(ceg: Ceg, path: PathLike) -> None:
    _write(ceg_to_dict(ceg), path)


def save_trace(trace: MergeTrace, st: StagedTree, path: PathLike) -> None:
    _write(trace.to_dict(key=st.key), path)
