from pathlib import Path
from typing import List, Optional

import typer
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.panel import Panel

# Load environment variables from .env file
load_dotenv()

from bellprocess.errors import BellProcessError
from bellprocess.logging_utils import configure_logging
from bellprocess.models import QuantumSystem, describe_system
from bellprocess.process import write_trajectories_csv
from bellprocess.verify import run_suite
from cli.models import ModelType
from cli.utils import (
    ConfigError,
    build_system,
    card_table,
    convergence_frame,
    default_params,
    load_experiment,
    make_context,
    parse_overrides,
    report_table,
)

console = Console()

app = typer.Typer(
    name="bellprocess",
    help="Bell process lab: sample minimal-rate jump processes and verify their identities and bounds",
    add_completion=True,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_CONFIG = 2


def _fail_config(message: str) -> None:
    console.print(Panel(message, title="Invalid configuration", border_style="red"))
    raise typer.Exit(EXIT_INVALID_CONFIG)


@app.command()
def run(
    config_path: Path = typer.Argument(..., help="Experiment JSON file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override sampler.seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Override output.directory"),
    jobs: Optional[int] = typer.Option(None, "--jobs", min=1, help="Worker threads for ensembles"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
    progress: bool = typer.Option(False, "--progress", help="Show a progress bar while sampling"),
):
    """Run the checks of an experiment and write trajectories, report and convergence table."""
    logger = configure_logging(log_level)
    try:
        config = load_experiment(config_path)
        if seed is not None:
            config = config.model_copy(update={"sampler": config.sampler.model_copy(update={"seed": seed})})
        system, packet = build_system(config.model, config.model_params, t0=config.ensemble.t0)
    except ConfigError as err:
        _fail_config(str(err))
    except (ValidationError, ValueError, BellProcessError) as err:
        _fail_config(f"{config_path}: {err}")

    out_dir = out or Path(config.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    ctx = make_context(config, system, packet, jobs=jobs, progress=progress)
    names = [check.value for check in config.checks]
    logger.info("running %d checks on %s with seed %d", len(names), config.model.value, ctx.seed)
    report = run_suite(ctx, names, config.model.value, str(config_path))

    if isinstance(system, QuantumSystem):
        trajectories_path = write_trajectories_csv(
            out_dir / config.output.trajectories, ctx.ensemble(config.ensemble.M), system
        )
        logger.info("trajectories written to %s", trajectories_path)
    frame = convergence_frame(report)
    if frame is not None:
        frame.to_csv(out_dir / config.output.convergence, index=False, float_format="%.17g", lineterminator="\n")
    (out_dir / config.output.report).write_text(report.model_dump_json(indent=2), encoding="utf-8")

    console.print(report_table(report))
    if report.passed:
        console.print(f"[green]All {len(report.checks)} checks passed[/green] ({report.duration_s:.1f}s)")
        raise typer.Exit(EXIT_OK)
    failed = ", ".join(check.name for check in report.failed())
    console.print(f"[red]Failed checks:[/red] {failed}")
    raise typer.Exit(EXIT_CHECK_FAILED)


@app.command()
def describe(
    model: str = typer.Argument(..., help="TWO_LEVEL, LATTICE_1D, FOCK or DIRAC"),
    param: List[str] = typer.Option([], "--param", help="Model parameter as key=value; repeatable"),
):
    """Print the model card of a system built from default parameters plus overrides."""
    configure_logging()
    try:
        model_type = ModelType(model.upper())
    except ValueError:
        valid = ", ".join(m.value for m in ModelType)
        _fail_config(f"unknown model {model!r}; choose one of {valid}")
    try:
        params = default_params(model_type, parse_overrides(param))
        system, _ = build_system(model_type, params)
    except ConfigError as err:
        _fail_config(str(err))
    except (ValidationError, ValueError, BellProcessError) as err:
        _fail_config(str(err))
    console.print(card_table(describe_system(system)))


if __name__ == "__main__":
    app()
