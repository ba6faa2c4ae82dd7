from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from pzf_lab import __version__
from pzf_lab.core.errors import CommandUsageError
from pzf_lab.modules.graph_core.schemas import FAMILY_PARAMS
from pzf_lab.modules.graph_core.service import GraphService
from pzf_lab.schemas import Command
from pzf_lab.services.command_runner import CommandRunner
from pzf_lab.services.config_store import ConfigStore
from pzf_lab.settings import AppSettings

app = typer.Typer(help="Probabilistic zero forcing lab: simulate, solve and verify bounds.")
console = Console()
err_console = Console(stderr=True)

GRAPH_HELP = "Graph family spec, e.g. path:5, star_chain:r=2,s=10, gnp:n=50,p=0.1."
FILE_HELP = "Edge-list file: header 'n m' then m lines 'u v'."
START_HELP = "Start vertex, comma list '0,3', or 'best'."


def _option(text: str) -> Any:
    return typer.Option(None, help=text)


def _store(config_file: Optional[Path] = None) -> ConfigStore:
    settings = AppSettings()
    return ConfigStore(config_path=config_file or settings.config_file)


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _flag_for(error: dict) -> str:
    loc = [str(part) for part in error.get("loc", ()) if isinstance(part, str)]
    if not loc:
        return error["msg"].removeprefix("Value error, ")
    return f"--{loc[0].replace('_', '-')}: {error['msg'].removeprefix('Value error, ')}"


def _dispatch(ctx: typer.Context, subcommand: str, **fields: Any) -> Optional[Command]:
    obj = ctx.ensure_object(dict)
    values = {key: value for key, value in fields.items() if value is not None}
    if obj.get("workers") is not None:
        values.setdefault("workers", obj["workers"])
    try:
        cmd = Command(subcommand=subcommand, **values)
    except ValidationError as exc:
        message = "; ".join(_flag_for(error) for error in exc.errors())
        if obj.get("parse_only"):
            raise CommandUsageError(message) from exc
        err_console.print(f"[red]error: {message}[/red]")
        raise typer.Exit(code=2) from exc
    if obj.get("parse_only"):
        return cmd

    config = _store(obj.get("config_file")).load()
    if "seed" not in values:
        cmd = cmd.model_copy(update={"seed": config.cli.default_seed})
    result = CommandRunner(config, workers=cmd.workers).run(cmd)
    if result.exit_code != 0:
        err_console.print(f"[red]{result.text}[/red]")
        raise typer.Exit(result.exit_code)
    if cmd.out is not None:
        err_console.print(f"[green]Wrote:[/green] {config.resolve_out(cmd.out)}")
    else:
        typer.echo(result.text.rstrip("\n"))
    return None


@app.callback()
def main_callback(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="Config YAML path."),
    log_level: Optional[str] = typer.Option(None, help="Logging level for stderr."),
    workers: Optional[int] = typer.Option(None, min=1, help="Worker processes."),
) -> None:
    settings = AppSettings()
    obj = ctx.ensure_object(dict)
    obj["config_file"] = config
    obj["workers"] = workers or settings.workers
    _configure_logging(log_level or settings.log_level)


@app.command("version")
def version() -> None:
    typer.echo(__version__)


@app.command("init-config")
def init_config(ctx: typer.Context) -> None:
    store = _store(ctx.ensure_object(dict).get("config_file"))
    config = store.load()
    store.save(config)
    console.print(f"[green]Config initialized:[/green] {store.config_path.resolve()}")


@app.command("families")
def families(ctx: typer.Context) -> None:
    graphs = GraphService(_store(ctx.ensure_object(dict).get("config_file")).load())
    table = Table(title="Graph Families")
    table.add_column("Family")
    table.add_column("Parameters")
    for family in graphs.family_ids():
        table.add_row(family, ", ".join(FAMILY_PARAMS[family]))
    console.print(table)


@app.command("generate")
def generate(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    out: Optional[Path] = _option("Write the edge list here instead of stdout."),
) -> Optional[Command]:
    return _dispatch(ctx, "generate", graph=graph, file=file, out=out)


@app.command("exact")
def exact(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    start: Optional[str] = _option(START_HELP),
    cap_override: Optional[int] = _option("Raise the exact-solver vertex cap."),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx,
        "exact",
        graph=graph,
        file=file,
        start=start,
        cap_override=cap_override,
        format=format,
        out=out,
    )


@app.command("estimate")
def estimate(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    start: Optional[str] = _option(START_HELP),
    seed: Optional[int] = _option("Master seed."),
    trials: Optional[int] = _option("Number of Monte Carlo trials."),
    steps: Optional[int] = _option("Per-trial step limit."),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx,
        "estimate",
        graph=graph,
        file=file,
        start=start,
        seed=seed,
        trials=trials,
        steps=steps,
        format=format,
        out=out,
    )


@app.command("tail")
def tail(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    start: Optional[str] = _option(START_HELP),
    steps: Optional[int] = _option("Time t at which P(all blue) is estimated."),
    seed: Optional[int] = _option("Master seed."),
    trials: Optional[int] = _option("Number of Monte Carlo trials."),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx,
        "tail",
        graph=graph,
        file=file,
        start=start,
        steps=steps,
        seed=seed,
        trials=trials,
        format=format,
        out=out,
    )


@app.command("throttle")
def throttle(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    cap_override: Optional[int] = _option("Raise the exact-solver vertex cap."),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx,
        "throttle",
        graph=graph,
        file=file,
        cap_override=cap_override,
        format=format,
        out=out,
    )


@app.command("cornerstones")
def cornerstones(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(ctx, "cornerstones", graph=graph, file=file, format=format, out=out)


@app.command("modified")
def modified(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    seed: Optional[int] = _option("Master seed."),
    trials: Optional[int] = _option("Run a corpus of this many seeds instead of one run."),
    steps: Optional[int] = _option("Per-phase step limit."),
    strict: bool = typer.Option(False, help="Fail when a phase stalls."),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx,
        "modified",
        graph=graph,
        file=file,
        seed=seed,
        trials=trials,
        steps=steps,
        strict=strict,
        format=format,
        out=out,
    )


@app.command("bounds")
def bounds(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    start: Optional[str] = _option(START_HELP),
    mode: Optional[str] = _option("Observed value source: exact|mc."),
    seed: Optional[int] = _option("Master seed."),
    trials: Optional[int] = _option("Monte Carlo trials in mc mode."),
    steps: Optional[int] = _option("Per-trial step limit in mc mode."),
    cap_override: Optional[int] = _option("Raise the exact-solver vertex cap."),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx,
        "bounds",
        graph=graph,
        file=file,
        start=start,
        mode=mode,
        seed=seed,
        trials=trials,
        steps=steps,
        cap_override=cap_override,
        format=format,
        out=out,
    )


@app.command("couple-check")
def couple_check(
    ctx: typer.Context,
    graph: Optional[str] = _option(GRAPH_HELP),
    file: Optional[Path] = _option(FILE_HELP),
    start: Optional[str] = _option("Lower start set S."),
    superset: Optional[str] = _option("Upper start set T containing S."),
    seed: Optional[int] = _option("Master seed."),
    trials: Optional[int] = _option("Number of coupled runs."),
    steps: Optional[int] = _option("Steps per coupled run."),
    format: Optional[str] = _option("Output format: json|csv."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx,
        "couple-check",
        graph=graph,
        file=file,
        start=start,
        superset=superset,
        seed=seed,
        trials=trials,
        steps=steps,
        format=format,
        out=out,
    )


@app.command("sweep")
def sweep(
    ctx: typer.Context,
    grid: Optional[str] = _option("Grid such as star_chain:r=2|4|8,s=8|16."),
    seed: Optional[int] = _option("Master seed."),
    trials: Optional[int] = _option("Trials per cell."),
    format: Optional[str] = _option("Output format: csv|json."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(
        ctx, "sweep", grid=grid, seed=seed, trials=trials, format=format, out=out
    )


@app.command("star-tails")
def star_tails(
    ctx: typer.Context,
    n_max: Optional[int] = _option("Largest star order n checked."),
    format: Optional[str] = _option("Output format: csv|json."),
    out: Optional[Path] = _option("Output path."),
) -> Optional[Command]:
    return _dispatch(ctx, "star-tails", n_max=n_max, format=format, out=out)


def parse_args(argv: List[str]) -> Command:
    """Validate ``argv`` into a Command without running it.

    Anything the CLI would reject with exit code 2 raises CommandUsageError.
    """
    command = typer.main.get_command(app)
    try:
        return command.main(
            args=list(argv),
            prog_name="pzf-lab",
            standalone_mode=False,
            obj={"parse_only": True},
        )
    except CommandUsageError:
        raise
    except Exception as exc:
        # Parser errors from typer's command layer carry exit_code 2.
        if getattr(exc, "exit_code", None) != 2:
            raise
        format_message = getattr(exc, "format_message", None)
        message = format_message() if callable(format_message) else str(exc)
        raise CommandUsageError(message) from exc


def main() -> None:
    app(prog_name="pzf-lab")


if __name__ == "__main__":
    main()
