"""Run experiments from a config file or a preset."""

import click
from pathlib import Path
from typing import Any, Dict, List, Optional
from rich.console import Console
from rich.table import Table

from sa_forge.cli.errors import reporting_errors
from sa_forge.config.settings import OUTPUT_FORMATS, Settings
from sa_forge.core.exceptions import ContractViolationError
from sa_forge.harness.analysis import fit_loglog_slope, lms_bound_report
from sa_forge.harness.export import export_results
from sa_forge.harness.presets import DEFAULT_PRESET_N, PRESETS, get_preset
from sa_forge.harness.runner import ExperimentRunner
from sa_forge.models.experiment import ExperimentConfig, RiskCurve
from sa_forge.utils.verbose import VerboseLogger, create_verbose_logger

console = Console()


def _slope(curve: RiskCurve) -> str:
    try:
        return f"{fit_loglog_slope(curve, decades=1.0):.3f}"
    except ContractViolationError:
        return "-"


def _summary_table(curves: List[RiskCurve]) -> Table:
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Optimizer")
    table.add_column("Gamma", justify="right")
    table.add_column("Reps", justify="right")
    table.add_column("n", justify="right")
    table.add_column("Train excess", justify="right", style="cyan")
    table.add_column("Test excess", justify="right", style="cyan")
    table.add_column("Slope", justify="right")
    for curve in curves:
        table.add_row(
            curve.optimizer,
            f"{curve.gamma:.4g}",
            str(curve.replications),
            str(int(curve.checkpoints[-1])),
            f"{curve.mean('train')[-1]:.4e}",
            f"{curve.mean('test')[-1]:.4e}",
            _slope(curve),
        )
    return table


def _report_bound(runner: ExperimentRunner, curve: RiskCurve, verbose_logger: VerboseLogger) -> None:
    report = lms_bound_report(runner.setup, curve)
    if report is None:
        verbose_logger.warning(f"{curve.optimizer}: no closed-form bound for this setting")
        console.print(f"[yellow]{curve.optimizer}: bound not applicable[/yellow]")
        return
    verbose_logger.bound_table(report.rows())
    if report.ok:
        console.print(f"[green]✓ {curve.optimizer}: bound holds at all {len(report.checkpoints)} checkpoints[/green]")
    else:
        console.print(
            f"[red]✗ {curve.optimizer}: bound violated at {len(report.violations)} checkpoint(s), "
            f"first at n={report.violations[0]}[/red]"
        )


HARNESS_FIELDS = ("seed", "replications", "checkpoints_per_decade")


def resolve_config(config: ExperimentConfig, settings: Settings, overrides: Dict[str, Any]) -> ExperimentConfig:
    """Fill harness fields the experiment leaves unset from settings, then apply CLI overrides."""
    defaults = {
        name: getattr(settings.harness, name) for name in HARNESS_FIELDS if name not in config.model_fields_set
    }
    return ExperimentConfig(**{**config.model_dump(), **defaults, **overrides})


@click.command(name="run")
@click.pass_context
@click.option(
    "--config",
    "config_path",
    type=click.Path(path_type=Path),
    help="Experiment YAML file (fields of ExperimentConfig)",
)
@click.option(
    "--preset",
    type=click.Choice(sorted(PRESETS)),
    help="Built-in experiment suite",
)
@click.option("--seed", type=int, help="Experiment seed (overrides config)")
@click.option("--out", type=click.Path(path_type=Path), help="Write results to this file")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(OUTPUT_FORMATS),
    help="Output format (default from settings)",
)
@click.option("--jobs", type=int, help="Worker processes for replications")
@click.option("--n", "n", type=int, help="Sample budget for presets")
@click.option("--replications", type=int, help="Replications (overrides config)")
@click.option(
    "--verify-bound",
    is_flag=True,
    help="Check averaged constant-step least-squares curves against the expected-risk bound",
)
def run(
    ctx: click.Context,
    config_path: Optional[Path],
    preset: Optional[str],
    seed: Optional[int],
    out: Optional[Path],
    output_format: Optional[str],
    jobs: Optional[int],
    n: Optional[int],
    replications: Optional[int],
    verify_bound: bool,
):
    """
    Run experiments and report excess-risk curves.

    Give exactly one of --config or --preset. Curves are summarized on the
    console and written to --out when given.
    """
    settings = ctx.obj.get("settings") if ctx.obj else None
    settings = settings or Settings()
    verbose_logger = create_verbose_logger(enabled=settings.app.verbose)

    with reporting_errors(ctx):
        if (config_path is None) == (preset is None):
            raise ContractViolationError("give exactly one of --config or --preset")

        overrides = {}
        if seed is not None:
            overrides["seed"] = seed
        if replications is not None:
            overrides["replications"] = replications

        if config_path is not None:
            base = ExperimentConfig.from_file(config_path)
            if n is not None:
                overrides["n"] = n
            configs = [base]
        else:
            configs = get_preset(
                preset,
                n=n if n is not None else DEFAULT_PRESET_N,
                replications=replications or settings.harness.replications,
                seed=seed if seed is not None else settings.harness.seed,
            )
        configs = [resolve_config(config, settings, overrides) for config in configs]

        jobs = jobs or settings.harness.jobs
        output_format = output_format or settings.harness.output_format

        curves: List[RiskCurve] = []
        for config in configs:
            runner = ExperimentRunner(config, settings, jobs=jobs, verbose_logger=verbose_logger)
            curve = runner.run()
            curves.append(curve)
            if verify_bound:
                _report_bound(runner, curve, verbose_logger)

        console.print(_summary_table(curves))
        if out is not None:
            export_results(curves, out, output_format)
            console.print(f"[green]✓ Wrote {len(curves)} curve(s) to {out}[/green]")
