"""CLI entrypoint."""

import logging
from typing import Any, Optional, Tuple

import click
from pydantic import ValidationError

from .config import get_settings
from .errors import ReportWriteError
from .runner import EXIT_ERROR, EXIT_INVALID, emit_report, run
from .state.schema import RunConfig


def _report_options(f):
    f = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)(f)
    f = click.option("--output", "output_path", type=click.Path(dir_okay=False), default=None, help="Write the report here instead of stdout.")(f)
    f = click.option("--threads", type=int, default=None, help="Worker processes (default: ECGRAPH_THREADS, else all cores).")(f)
    f = click.option("--seed", type=int, default=None, help="Sampling seed (default: ECGRAPH_SEED, 0).")(f)
    return f


def _graph_options(f):
    f = click.option("--e", "e", type=int, default=1, show_default=True, help="Odd exponent e.")(f)
    f = click.option("--q", "q", type=int, required=True, help="Pythagorean prime q.")(f)
    return f


def _search_options(f):
    f = click.option("--residue-distinct", is_flag=True, help="Only splits whose points are distinct mod q.")(f)
    f = click.option("--force", is_flag=True, help="Run even if the cost bound exceeds the budget.")(f)
    f = click.option("--budget", type=int, default=None, help="Word-operation budget (default: ECGRAPH_EC_BUDGET).")(f)
    return f


def _execute(command: str, *, fmt: str, output_path: Optional[str], seed: Optional[int], **fields: Any) -> None:
    settings = get_settings()
    ctx = click.get_current_context()
    fields = {k: v for k, v in fields.items() if v is not None}
    fields.setdefault("budget", settings.ec_budget)
    fields.setdefault("samples", settings.samples)
    try:
        config = RunConfig(
            command=command,
            seed=settings.seed if seed is None else seed,
            format=fmt,
            output_path=output_path,
            **fields,
        )
    except ValidationError as e:
        click.echo(f"invalid arguments: {e}", err=True)
        ctx.exit(EXIT_INVALID)
    report = run(config)
    try:
        emit_report(report, config.format, config.output_path)
    except ReportWriteError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_ERROR)
    ctx.exit(report.exit_code)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool):
    """ecgraph - t-e.c. quadratic unitary Cayley graphs G_{q^e}.

    Examples:
        ecgraph check-ec --q 13 --e 1 --t 2
        ecgraph find-q1 --t 2 --e 3
        ecgraph spectrum --q 5 --e 3
    """
    level = "INFO" if verbose else get_settings().log_level
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


@main.command("construct")
@_graph_options
@click.option("--edges", "edges_path", type=click.Path(dir_okay=False), default=None, help="Export the edge list to this path.")
@_report_options
def construct(**kwargs):
    """Build G_{q^e} and check regularity, symmetry and edge count."""
    _execute("construct", **kwargs)


@main.command("spectrum")
@_graph_options
@_report_options
def spectrum(**kwargs):
    """Closed-form spectrum with exact moment checks."""
    _execute("spectrum", **kwargs)


@main.command("check-ec")
@_graph_options
@click.option("--t", "t", type=int, required=True)
@_search_options
@_report_options
def check_ec(**kwargs):
    """Exhaustive t-e.c. check; exit 1 when a counterexample exists."""
    _execute("check-ec", **kwargs)


@main.command("mixing")
@_graph_options
@click.option("--samples", type=int, default=None, help="Subset pairs to draw (default: ECGRAPH_SAMPLES).")
@_report_options
def mixing(**kwargs):
    """Sample (U, W) pairs against the expander mixing bound."""
    _execute("mixing", **kwargs)


@main.command("trend")
@click.option("--e", "e", type=int, default=3, show_default=True)
@click.option("--q", "qs", type=int, multiple=True, help="Primes in the family (repeatable).")
@_report_options
def trend(qs: Tuple[int, ...], **kwargs):
    """lambda/sqrt(d) and edge probability across a family."""
    _execute("trend", qs=list(qs), **kwargs)


@main.command("find-q1")
@click.option("--t", "t", type=int, required=True)
@click.option("--e", "e", type=int, default=3, show_default=True)
@_report_options
def find_q1(**kwargs):
    """Least Pythagorean prime satisfying the sufficient inequality."""
    _execute("find-q1", **kwargs)


@main.command("report")
@_graph_options
@click.option("--t", "t", type=int, default=2, show_default=True)
@click.option("--samples", type=int, default=None)
@_search_options
@_report_options
def report(**kwargs):
    """Everything at once: spectrum, t-e.c., mixing, quasi-random and Cheeger."""
    _execute("report", **kwargs)


if __name__ == "__main__":
    main()
