"""Estimate problem constants of a dataset."""

import click
from pathlib import Path
from typing import Optional
from rich.console import Console
from rich.table import Table

from sa_forge.cli.errors import reporting_errors
from sa_forge.config.settings import Settings
from sa_forge.constants.estimators import KappaMode, estimate_constants
from sa_forge.data.libsvm import parse_libsvm
from sa_forge.losses.models import LossModel

console = Console()


@click.command(name="estimate-constants")
@click.pass_context
@click.option(
    "--data",
    type=click.Path(path_type=Path),
    required=True,
    help="libsvm dataset (optionally gzip-compressed)",
)
@click.option(
    "--loss",
    type=click.Choice(["square", "logistic"]),
    default="logistic",
    show_default=True,
    help="Loss the constants refer to",
)
@click.option(
    "--kappa-mode",
    type=click.Choice([m.value for m in KappaMode]),
    help="Kurtosis estimator (default: axes for sparse or large data)",
)
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for estimator restarts")
def estimate(ctx: click.Context, data: Path, loss: str, kappa_mode: Optional[str], seed: int):
    """
    Estimate R^2, kappa, rho and the batch optimum of a dataset.
    """
    settings = ctx.obj.get("settings") if ctx.obj else None
    settings = settings or Settings()
    c = settings.constants

    with reporting_errors(ctx):
        dataset = parse_libsvm(data)
        constants = estimate_constants(
            dataset,
            LossModel.from_name(loss),
            kappa_mode=kappa_mode,
            restarts=c.kappa_restarts,
            iterations=c.kappa_iterations,
            tol=c.kappa_tol,
            dense_limit=c.rho_dense_limit,
            reference_tol=c.reference_tol_scale * dataset.n,
            max_iter=c.reference_max_iter,
            seed=seed,
        )

        table = Table(title=f"Constants of {dataset.name} ({loss})", show_header=True, header_style="bold magenta")
        table.add_column("Constant")
        table.add_column("Value", justify="right", style="cyan")
        table.add_row("n", str(dataset.n))
        table.add_row("d", str(dataset.dimension))
        table.add_row("R^2", f"{constants.R2:.6g}")
        table.add_row(f"kappa ({constants.kappa_mode.value})", f"{constants.kappa:.6g}")
        if constants.kappa_weighted is not None:
            table.add_row("kappa (weighted at optimum)", f"{constants.kappa_weighted:.6g}")
        rho = f"{constants.rho:.6g}" + (" (loose)" if constants.rho_loose else "")
        table.add_row("rho", rho)
        table.add_row("f*", f"{constants.f_star:.10g}")
        table.add_row("|theta*|", f"{float((constants.theta_star ** 2).sum() ** 0.5):.6g}")
        if constants.near_separable:
            table.add_row("near-separable", "yes")
        console.print(table)
