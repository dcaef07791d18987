from pathlib import Path
from typing import Any

import numpy as np
import typer
from rich.align import Align
from rich.console import Console
from rich.live import Live
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
)
from rich.table import Table
from rich.text import Text

from satkf import __version__
from satkf.core.config import ExperimentConfig, get_settings, parse_config
from satkf.core.errors import NoConvergence, SatkfError
from satkf.emitters import (
    AmseeTableEmitter,
    AreReportEmitter,
    ErrorEmitter,
    ManifestEmitter,
    MseeTableEmitter,
    TrajectoryEmitter,
)
from satkf.emitters.markdown import STATES, render_amsee_table, render_are_report, render_msee_table
from satkf.estimation.filters import FilterModel, SteadyState, solve_are, steady_state
from satkf.estimation.harness import (
    build_model,
    linearization_gap,
    monte_carlo,
    run_once,
    run_steady,
)
from satkf.estimation.metrics import prediction_msee
from satkf.estimation.orbit import MeasurementType
from satkf.utils import emit, make_folder

# ------------------------------------------------------------------
# App setup
# ------------------------------------------------------------------

console = Console()
app = typer.Typer(
    invoke_without_command=True,
    no_args_is_help=True,
)

APP_VERSION = __version__

BANNER = r"""
           _   _     __
  ___ __ _| |_| | __/ _|
 / __/ _` | __| |/ / |_
 \__ \ (_| | |_|   <|  _|
 |___/\__,_|\__|_|\_\_|
"""

# ------------------------------------------------------------------
# UI helpers
# ------------------------------------------------------------------


def render_header() -> Panel:
    text = Text()
    text.append(BANNER, style="bold cyan")
    text.append(f"\nVersion {APP_VERSION}\n", style="bold cyan")

    return Panel(
        Align.center(text),
        border_style="cyan",
        padding=(1, 2),
    )


def msee_summary(title: str, columns: dict[str, np.ndarray]) -> Table:
    table = Table(title=title, border_style="cyan")
    table.add_column("State", style="bold")
    for name in columns:
        table.add_column(name, justify="right")
    for i, state in enumerate(STATES):
        table.add_row(state, *(f"{values[i]:.6g}" for values in columns.values()))
    return table


# ------------------------------------------------------------------
# Progress runner (INSIDE BOX)
# ------------------------------------------------------------------


"""Steps"""

STEPS = {
    "TrajectoryEmitter": "Writing trajectory CSV",
    "ErrorEmitter": "Writing error CSV",
    "MseeTableEmitter": "Writing per-run MSEE tables",
    "AmseeTableEmitter": "Writing AMSEE comparison",
    "AreReportEmitter": "Writing steady-state report",
    "ManifestEmitter": "Recording run configuration",
}


def run_emitters_with_progress(
    location: Path,
    emitters: list,
    **bundle,
):
    make_folder(location)

    progress = Progress(
        SpinnerColumn(),
        TextColumn("[bold cyan]{task.description}"),
        BarColumn(),
    )

    task = progress.add_task("Writing outputs...", total=len(emitters))

    panel = Panel(
        progress,
        title=f"Writing to {location}",
        border_style="cyan",
        padding=(1, 2),
    )

    console.print(render_header())

    with Live(panel, console=console, refresh_per_second=10):
        for emitter in emitters:
            progress.update(task, description=f"{STEPS[emitter.__name__]}")
            emit(location, emitter, **bundle)
            progress.advance(task)


def show_error(e: Exception):
    error_panel = Panel(
        Text(f"❌ {getattr(e, 'error_code', 'UNHANDLED')}\n\n{e}", style="red"),
        border_style="red",
        padding=(1, 2),
    )
    console.print(error_panel)


def load_config(config: Path | None, **flags: Any) -> ExperimentConfig:
    return parse_config(config, overrides=flags)


def resolve_out(out: Path | None) -> Path:
    return (out or get_settings().OUT_DIR).resolve()


def solve_for_report(model: FilterModel, cfg: ExperimentConfig) -> SteadyState:
    """
    Riccati fixed point, or the last iterate when unobservable states keep
    the recursion from settling
    """
    try:
        return solve_are(model, cfg.are_tol, cfg.are_max_iter, P0=cfg.P0)
    except NoConvergence as e:
        if not e.data["unobservable"]:
            raise
        return steady_state(
            e.data["P"],
            model,
            e.data["iterations"],
            e.data["residual"],
            converged=False,
            unobservable=e.data["unobservable"],
        )


# ------------------------------------------------------------------
# Shared options
# ------------------------------------------------------------------

ConfigOption = typer.Option(None, "--config", "-c", help="Flat JSON (or TOML) config file")
SeedOption = typer.Option(None, "--seed", "-s", help="Master seed (unsigned 64-bit)")
MtypeOption = typer.Option(None, "--mtype", "-m", help="Measurement channel")
StepsOption = typer.Option(None, "--n", help="Steps per run")
RunsOption = typer.Option(None, "--phi", help="Monte Carlo runs")
OutOption = typer.Option(None, "--out", "-o", help="Output directory")
DeltaOption = typer.Option(None, "--delta", help="Process covariance δ (δ·I)")

# ------------------------------------------------------------------
# Typer callbacks & commands
# ------------------------------------------------------------------


@app.callback()
def main(
    ctx: typer.Context,
    version: bool = typer.Option(
        False,
        "--version",
        "-v",
        help="Show version and exit",
        is_eager=True,
    ),
):
    if version:
        console.print(f"[bold green]satkf version {APP_VERSION}[/bold green]")
        raise typer.Exit()

    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit()


@app.command()
def simulate(
    config: Path | None = ConfigOption,
    seed: int | None = SeedOption,
    mtype: MeasurementType | None = MtypeOption,
    n: int | None = StepsOption,
    out: Path | None = OutOption,
    delta: float | None = DeltaOption,
    truth: str | None = typer.Option(None, "--truth", help="linear or nonlinear truth"),
    noise_free: bool | None = typer.Option(
        None, "--noise-free/--noisy", help="Skip noise draws in the truth"
    ),
):
    """
    Run one seeded trajectory and write trajectory.csv and errors.csv.
    """
    try:
        cfg = load_config(
            config,
            seed=seed,
            mtype=mtype,
            n=n,
            delta_q=delta,
            truth_model=truth,
            noise_free=noise_free,
        )
        result = run_once(cfg, 0)
        location = resolve_out(out)

        run_emitters_with_progress(
            location,
            [TrajectoryEmitter, ErrorEmitter, ManifestEmitter],
            result=result,
            h=cfg.h,
            cfg=cfg,
            command="simulate",
        )

        console.print(
            msee_summary(
                f"MSEE, {cfg.mtype.value}, seed {cfg.seed}",
                {"κ (CKF)": result.msee.kappa, "Γ (μKF)": result.msee.Gamma},
            )
        )

        if cfg.truth_model == "nonlinear":
            gap = linearization_gap(cfg)
            console.print(
                msee_summary(
                    "Extra MSEE from nonlinear truth",
                    {"Δκ": gap.extra_kappa, "ΔΓ": gap.extra_Gamma},
                )
            )

    except SatkfError as e:
        show_error(e)
        raise typer.Exit(code=e.exit_code)


@app.command()
def tables(
    config: Path | None = ConfigOption,
    seed: int | None = SeedOption,
    n: int | None = StepsOption,
    phi: int | None = RunsOption,
    out: Path | None = OutOption,
    delta: float | None = DeltaOption,
):
    """
    Monte Carlo over both measurement types; print per-run MSEE and AMSEE tables.
    """
    try:
        cfg = load_config(config, seed=seed, n=n, phi=phi, delta_q=delta)

        averages = {}
        records = {}
        for mtype in MeasurementType:
            averages[mtype], records[mtype] = monte_carlo(cfg.model_copy(update={"mtype": mtype}))

        run_emitters_with_progress(
            resolve_out(out),
            [MseeTableEmitter, AmseeTableEmitter, ManifestEmitter],
            records=records,
            averages=averages,
            cfg=cfg,
            command="tables",
        )

        for mtype, runs in records.items():
            typer.echo(render_msee_table(runs, mtype))
        typer.echo(render_amsee_table(averages))

    except SatkfError as e:
        show_error(e)
        raise typer.Exit(code=e.exit_code)


@app.command()
def are(
    config: Path | None = ConfigOption,
    seed: int | None = SeedOption,
    mtype: MeasurementType | None = MtypeOption,
    n: int | None = StepsOption,
    out: Path | None = OutOption,
    delta: float | None = DeltaOption,
    tol: float | None = typer.Option(None, "--tol", help="Riccati tolerance"),
):
    """
    Solve the Riccati equation and compare the constant-gain predictor with
    the time-varying filter on one run.
    """
    try:
        cfg = load_config(config, seed=seed, mtype=mtype, n=n, delta_q=delta, are_tol=tol)
        model = build_model(cfg)
        steady = solve_for_report(model, cfg)

        run_emitters_with_progress(
            resolve_out(out),
            [AreReportEmitter, ManifestEmitter],
            steady=steady,
            mtype=cfg.mtype,
            tol=cfg.are_tol,
            cfg=cfg,
            command="are",
        )

        typer.echo(render_are_report(steady, cfg.mtype, cfg.are_tol))

        result = run_once(cfg, 0, model=model)
        constant = run_steady(cfg, steady, result.truth, result.measurements, model)
        varying = prediction_msee(
            result.truth, np.vstack([e.x_pred for e in result.ckf_estimates])
        )
        console.print(
            msee_summary(
                "One-step prediction MSEE",
                {"time-varying": varying, "steady-state": constant.msee},
            )
        )

    except SatkfError as e:
        show_error(e)
        raise typer.Exit(code=e.exit_code)
