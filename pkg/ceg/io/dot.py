# ceg/io/dot.py

from pathlib import Path
from typing import Dict, Optional, Union

import graphviz

from ceg.core.types import (SINK_KEY, TRIVIAL_PREFIX, UNCOLOURED, Ceg,
                            ColouredGraph)

PALETTE = (
    "lightblue",
    "lightpink",
    "palegreen",
    "khaki",
    "plum",
    "lightsalmon",
    "aquamarine",
    "lightgoldenrod",
    "thistle",
    "peachpuff",
)


def _fill_colours(graph: ColouredGraph) -> Dict[str, str]:
    names = sorted(
        {
            c
            for c in graph.colouring.values()
            if c != UNCOLOURED and not c.startswith(TRIVIAL_PREFIX)
        }
    )
    return {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(names)}


def to_dot(graph: ColouredGraph, name: Optional[str] = None) -> graphviz.Digraph:
    """
    Draw a staged tree, an intermediate graph or a CEG. Vertices of one stage
    share a fill colour; trivially coloured vertices and leaves are white.
    """
    dot = graphviz.Digraph(name=name or "ceg")
    dot.attr(rankdir="LR")
    fills = _fill_colours(graph)
    sink = graph.sink if isinstance(graph, Ceg) else None

    for v in sorted(graph.vertices):
        if v == sink:
            dot.node(str(v), SINK_KEY, shape="doublecircle")
            continue
        if graph.is_terminal(v):
            dot.node(str(v), graph.key(v), shape="circle")
            continue
        colour = graph.colour(v)
        fill = fills.get(colour, "white")
        dot.node(
            str(v),
            graph.key(v),
            shape="circle",
            style="filled",
            fillcolor=fill,
            tooltip=colour,
        )
    for e in graph.edges:
        label = e.label
        if e.count is not None:
            label = f"{label} ({e.count})"
        elif e.theta is not None:
            label = f"{label} [{e.theta:.3g}]"
        dot.edge(str(e.source), str(e.target), label=label)
    return dot


def save_dot(graph: ColouredGraph, path: Union[str, Path]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(to_dot(graph).source, encoding="utf-8")
