"""Evaluate closed-form excess-risk bounds."""

import click
from typing import Dict, Optional
from rich.console import Console
from rich.table import Table

from sa_forge.cli.errors import reporting_errors
from sa_forge.core.exceptions import ContractViolationError
from sa_forge.lms.bounds import (
    BoundParams,
    corollary_tail_threshold,
    theorem1_bound,
    theorem2_pmoment_bound,
    theorem2_special_case_bound,
)
from sa_forge.newton.bounds import NewtonBoundParams, theorem3_bound

console = Console()

REQUIRED = {
    "1": ("R", "sigma", "d", "dist0", "gamma", "n"),
    "2": ("R", "tau", "kappa", "d", "dist0", "p", "n"),
    "3": ("kappa", "rho", "d", "R", "dist0", "n"),
}


def parse_params(text: str) -> Dict[str, float]:
    """Parse ``key=value`` pairs separated by commas or whitespace."""
    params = {}
    for token in text.replace(",", " ").split():
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ContractViolationError(f"expected key=value, got '{token}'")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ContractViolationError(f"value of '{key}' is not a number: '{value}'")
    return params


def _require(params: Dict[str, float], theorem: str) -> None:
    missing = [k for k in REQUIRED[theorem] if k not in params]
    if missing:
        raise ContractViolationError(f"theorem {theorem} needs parameters: {', '.join(missing)}")


def evaluate_bound(theorem: str, params: Dict[str, float]) -> Dict[str, float]:
    """Evaluate one theorem's bound; returns labelled values for display.

    Theorem 2 uses the simplified form when ``gamma`` is omitted and adds the
    tail threshold when ``delta`` is given.
    """
    _require(params, theorem)
    n = int(params["n"])
    d = int(params["d"])
    if theorem == "1":
        bp = BoundParams(R=params["R"], sigma=params["sigma"], tau=params["sigma"], kappa=1.0, d=d, dist0=params["dist0"])
        return {"expected excess risk": theorem1_bound(bp, params["gamma"], n)}
    if theorem == "2":
        bp = BoundParams(
            R=params["R"],
            sigma=params.get("sigma", 0.0),
            tau=params["tau"],
            kappa=params["kappa"],
            d=d,
            dist0=params["dist0"],
        )
        p = params["p"]
        out = {}
        if "gamma" in params:
            out["p-th moment bound"] = theorem2_pmoment_bound(bp, p, params["gamma"], n)
        else:
            out["p-th moment bound (simplified)"] = theorem2_special_case_bound(bp, p, n)
        if "delta" in params:
            gamma = params.get("gamma", 1.0 / (12.0 * bp.kappa * bp.R2))
            out["tail threshold"] = corollary_tail_threshold(bp, gamma, params["delta"], n)
        return out
    np_ = NewtonBoundParams(kappa=params["kappa"], rho=params["rho"], d=d, R=params["R"], dist0=params["dist0"])
    bound, valid = theorem3_bound(np_, n)
    return {"two-step excess risk": bound, "minimum n": np_.minimum_n, "n large enough": float(valid)}


@click.command(name="bounds")
@click.pass_context
@click.option(
    "--theorem",
    type=click.Choice(sorted(REQUIRED)),
    required=True,
    help="1: averaged LMS, 2: p-th moment and tail, 3: two-step Newton",
)
@click.option(
    "--params",
    "params_text",
    required=True,
    help="Comma-separated key=value pairs, e.g. 'R=1,sigma=1,d=20,dist0=1,gamma=0.25,n=1000'",
)
def bounds(ctx: click.Context, theorem: str, params_text: Optional[str]):
    """
    Evaluate a closed-form bound for the given constants.
    """
    with reporting_errors(ctx):
        values = evaluate_bound(theorem, parse_params(params_text))
        table = Table(title=f"Theorem {theorem}", show_header=True, header_style="bold magenta")
        table.add_column("Quantity")
        table.add_column("Value", justify="right", style="cyan")
        for name, value in values.items():
            shown = ("yes" if value else "no") if name == "n large enough" else f"{value:.6g}"
            table.add_row(name, shown)
        console.print(table)
