# cli/app.py

import logging
from pathlib import Path
from typing import List, Optional

import pandas as pd
import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from ceg.bench.runner import (load_corpus, random_instances, run_bench,
                              save_table)
from ceg.compaction.engine import compact
from ceg.compaction.trace import CompactionMode, count_merge_work
from ceg.core.tools import depth
from ceg.errors import CegError
from ceg.ingest.records import RecordTable, ingest_records
from ceg.io.dot import save_dot, to_dot
from ceg.io.json_codec import (load_ceg, load_staging, load_tree, save_ceg,
                               save_staging, save_trace, save_tree)
from ceg.roundtrip.tools import ceg_isomorphic, reconstruct
from ceg.staging.stager import naive_exact_stager
from ceg.staging.tools import apply_staging
from config import CEG_BENCH_REPEATS, CEG_LOG_LEVEL, CEG_REPORTS_DIR

console = Console()

app = typer.Typer(
    name="ceg",
    help="Build chain event graphs from staged trees and check the round trip.",
    no_args_is_help=True,
    add_completion=False,
)


def render_error(title: str, error: Exception):
    console.print(
        Panel(
            Text(f"{type(error).__name__}: {error}", justify="left"),
            title=f"[bold red]{title}[/bold red]",
            border_style="red",
        )
    )


def render_summary(title: str, rows: List[tuple], style: str = "green"):
    table = Table.grid(padding=(0, 2))
    table.add_column(justify="left", style="cyan")
    table.add_column(justify="right")
    for name, value in rows:
        table.add_row(name, str(value))
    console.print(Panel(table, title=f"[bold {style}]{title}[/bold {style}]", border_style=style))


@app.callback()
def main():
    logging.basicConfig(
        level=CEG_LOG_LEVEL,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


@app.command()
def build(
    csv: Path = typer.Option(..., "--csv", help="Categorical records, one row per unit."),
    order: str = typer.Option(..., "--order", help="Comma-separated columns in tree order."),
    out: Path = typer.Option(..., "--out", help="Where to write the tree JSON."),
    sentinel: Optional[str] = typer.Option(None, "--sentinel", help="Early-termination value."),
    chunk_size: Optional[int] = typer.Option(None, "--chunk-size", min=1),
):
    """Build an event tree with edge counts from a CSV file."""
    columns = [c.strip() for c in order.split(",") if c.strip()]
    try:
        table = RecordTable.from_csv(csv)
        tree = ingest_records(table, columns, sentinel=sentinel, chunk_size=chunk_size)
        save_tree(tree, out)
    except (CegError, OSError, pd.errors.ParserError) as e:
        render_error("Build failed", e)
        raise typer.Exit(code=2)

    render_summary(
        "Event tree",
        [
            ("situations |S|", len(tree.situations)),
            ("depth m", depth(tree)),
            ("leaves", len(tree.leaves)),
            ("written to", out),
        ],
    )


@app.command()
def stage(
    tree: Path = typer.Option(..., "--tree", help="Tree JSON with edge counts."),
    out: Path = typer.Option(..., "--out", help="Where to write the staging JSON."),
):
    """Stage situations whose observed frequencies agree exactly."""
    try:
        event_tree = load_tree(tree)
        partition = naive_exact_stager(event_tree)
        save_staging(partition, event_tree, out)
    except (CegError, OSError) as e:
        render_error("Staging failed", e)
        raise typer.Exit(code=3)

    sizes = sorted((len(s.members) for s in partition.stages), reverse=True)
    render_summary(
        "Stages",
        [
            ("situations", len(event_tree.situations)),
            ("stages", len(partition.stages)),
            ("non-trivial stages", sum(1 for n in sizes if n > 1)),
            ("written to", out),
        ],
    )


@app.command("compact")
def compact_cmd(
    tree: Path = typer.Option(..., "--tree", help="Tree JSON."),
    staging: Path = typer.Option(..., "--staging", help="Staging JSON for the tree."),
    out: Path = typer.Option(..., "--out", help="Where to write the CEG JSON."),
    mode: CompactionMode = typer.Option(CompactionMode.OPTIMAL, "--mode", case_sensitive=False),
    dot: Optional[Path] = typer.Option(None, "--dot", help="Also write the CEG as DOT."),
    trace: Optional[Path] = typer.Option(None, "--trace", help="Also write the merge trace JSON."),
):
    """Transform a staged tree into its chain event graph."""
    try:
        event_tree = load_tree(tree)
        st = apply_staging(event_tree, load_staging(staging, event_tree))
        ceg, merge_trace = compact(st, mode)
        save_ceg(ceg, out)
        if dot is not None:
            save_dot(ceg, dot)
        if trace is not None:
            save_trace(merge_trace, st, trace)
    except (CegError, OSError) as e:
        render_error("Compaction failed", e)
        raise typer.Exit(code=3)

    work = count_merge_work(merge_trace)
    render_summary(
        "Chain event graph",
        [
            ("mode", merge_trace.mode.value),
            ("stop reason", merge_trace.stop_reason.value),
            ("iterations", work.iterations),
            ("|V(C)|", ceg.number_of_vertices()),
            ("|E(C)|", ceg.number_of_edges()),
            ("vertices per graph", " ".join(str(n) for n in work.vertex_counts)),
            ("written to", out),
        ],
    )


@app.command()
def roundtrip(ceg: Path = typer.Option(..., "--ceg", help="CEG JSON.")):
    """Reconstruct the staged tree of a CEG and check that it compacts back to the CEG."""
    try:
        graph = load_ceg(ceg)
        st = reconstruct(graph)
        again, _ = compact(st, CompactionMode.OPTIMAL)
    except (CegError, OSError) as e:
        render_error("Round trip failed", e)
        raise typer.Exit(code=4)

    same = ceg_isomorphic(graph, again)
    render_summary(
        "Round trip",
        [
            ("reconstructed situations", len(st.situations)),
            ("reconstructed leaves", len(st.leaves)),
            ("recompacted |V(C)|", again.number_of_vertices()),
            ("identical", "yes" if same else "no"),
        ],
        style="green" if same else "red",
    )
    if not same:
        raise typer.Exit(code=1)


@app.command()
def bench(
    corpus: Optional[Path] = typer.Option(None, "--corpus", help="Directory of tree/staging JSON pairs."),
    random: Optional[int] = typer.Option(None, "--random", min=0, help="Number of random instances."),
    depth_: int = typer.Option(6, "--depth", min=1),
    branching: int = typer.Option(3, "--branching", min=1),
    stage_density: float = typer.Option(0.5, "--stage-density", min=0.0, max=1.0),
    seed: int = typer.Option(0, "--seed"),
    repeats: int = typer.Option(CEG_BENCH_REPEATS, "--repeats", min=1, help="Timed runs per mode; the fastest counts."),
    out: Optional[Path] = typer.Option(None, "--out", help="CSV path for the comparison table."),
):
    """Compare Baseline and Optimal compaction on a corpus or on random staged trees."""
    if (corpus is None) == (random is None):
        raise typer.BadParameter("give exactly one of --corpus and --random")

    errors = []
    if corpus is not None:
        instances, errors = load_corpus(corpus)
    else:
        instances = random_instances(random, depth_, branching, stage_density, seed)
    table, run_errors = run_bench(instances, repeats)
    errors.extend(run_errors)
    path = save_table(table, out or Path(CEG_REPORTS_DIR) / "bench.csv")

    grid = Table(title="Baseline vs Optimal", show_lines=False)
    for column in ("instance", "situations", "depth", "t_baseline_ms", "t_optimal_ms", "v_optimal", "equal"):
        grid.add_column(column)
    for row in table.itertuples(index=False):
        grid.add_row(
            row.instance,
            str(row.situations),
            str(row.depth),
            f"{row.t_baseline_ms:.2f}",
            f"{row.t_optimal_ms:.2f}",
            str(row.v_optimal),
            "yes" if row.equal else "[red]no[/red]",
        )
    console.print(grid)
    render_summary(
        "Benchmark",
        [
            ("instances", len(table)),
            ("all equal", "yes" if bool(table["equal"].all()) else "no"),
            ("failed", len(errors)),
            ("written to", path),
        ],
        style="green" if not errors else "yellow",
    )
    for error in errors:
        console.print(f"[yellow]•[/yellow] {error['instance']}: {error['error']}")


@app.command("dot")
def dot_cmd(
    ceg: Path = typer.Option(..., "--ceg", help="CEG JSON."),
    out: Optional[Path] = typer.Option(None, "--out", help="DOT file; printed when omitted."),
):
    """Export a CEG in DOT format."""
    try:
        graph = load_ceg(ceg)
    except (CegError, OSError) as e:
        render_error("Export failed", e)
        raise typer.Exit(code=4)
    if out is None:
        typer.echo(to_dot(graph).source)
    else:
        save_dot(graph, out)


def run():
    app()
