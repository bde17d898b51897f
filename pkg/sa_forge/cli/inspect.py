"""Inspect a libsvm dataset."""

import click
from pathlib import Path
from rich.console import Console
from rich.table import Table

from sa_forge.cli.errors import reporting_errors
from sa_forge.config.settings import Settings
from sa_forge.constants.estimators import estimate_radius
from sa_forge.data.libsvm import parse_libsvm
from sa_forge.data.protocol import remove_outliers
from sa_forge.utils.verbose import create_verbose_logger

console = Console()


@click.command(name="inspect")
@click.pass_context
@click.option(
    "--data",
    type=click.Path(path_type=Path),
    required=True,
    help="libsvm dataset (optionally gzip-compressed)",
)
def inspect_data(ctx: click.Context, data: Path):
    """
    Show the size, sparsity, label balance and radius of a dataset.

    Also reports how many points the outlier rule of the experimental
    protocol would remove.
    """
    settings = ctx.obj.get("settings") if ctx.obj else None
    settings = settings or Settings()
    verbose_logger = create_verbose_logger(enabled=settings.app.verbose)

    with reporting_errors(ctx):
        dataset = parse_libsvm(data)
        _, removed = remove_outliers(dataset, settings.protocol.outlier_factor)
        positives = int((dataset.y > 0).sum())
        verbose_logger.operation("inspect", {"path": data, "nnz": dataset.nnz})

        table = Table(title=f"Dataset {dataset.name}", show_header=True, header_style="bold magenta")
        table.add_column("Property")
        table.add_column("Value", justify="right", style="cyan")
        table.add_row("observations", str(dataset.n))
        table.add_row("dimension", str(dataset.dimension))
        table.add_row("sparsity", f"{dataset.sparsity:.4g}")
        table.add_row("labels +1 / -1", f"{positives} / {dataset.n - positives}")
        table.add_row("R^2", f"{estimate_radius(dataset):.6g}")
        table.add_row(f"outliers (> {settings.protocol.outlier_factor:g} x mean norm)", str(removed))
        console.print(table)
