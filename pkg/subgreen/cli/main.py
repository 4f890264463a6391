"""
CLI entry points for subgreen: a Green-potential laboratory for sublinear elliptic
equations with measure data.

This module provides Typer-based command-line interfaces for three functionalities:
- Running a scenario file and writing its JSON report (and radial profile tables).
- Printing the exponent bundle of an (n, p, q) problem.
- Printing the JSON schema every report validates against.

Exit codes of `run`: 0 when every requested check is satisfied and the solver
converged, 2 when a check fails or the iteration diverges, 1 on I/O or validation
errors (including violated hypotheses on n, p and q).
"""

import sys
from dataclasses import asdict
from pathlib import Path
from typing import List, NoReturn, Optional

import typer

from subgreen.common.constants import EXIT_INVALID, EXIT_OK, KNOWN_CHECKS
from subgreen.common.exceptions import (
    HypothesisError,
    ReportError,
    ScenarioError,
    SubGreenError,
)
from subgreen.common.types import RunArgs
from subgreen.core.conditions import exponents as build_exponents
from subgreen.core.pipeline import run_pipeline
from subgreen.io.utils import _parse_tolerance
from subgreen.io.writer import dump_json, load_report_schema

DEFAULT_REPORT_NAME: str = "report.json"
DEFAULT_KNOWN_CHECKS_STR = ", ".join(KNOWN_CHECKS)

app = typer.Typer(add_completion=True)

# ruff: noqa: B008

@app.command(help=f"""
Run a scenario file and write its report as JSON.\n
Known checks:\n
{DEFAULT_KNOWN_CHECKS_STR}\n\n
Exit codes:\n
  0 - all requested checks satisfied and the solver converged\n
  2 - a requested check failed or the Picard iteration diverged\n
  1 - the scenario or report could not be read, validated or written\n\n
Usage examples:\n
  subgreen run torsion.json --out torsion_report.json\n
  subgreen run homogeneous.json --profiles profiles/ --seed 7\n
  subgreen run homogeneous.json --tolerance residual=1e-6\n
""")
def run(
    scenario: Path = typer.Argument(
        ...,
        help="Path to the scenario JSON file"
    ),
    out: Path = typer.Option(
        Path(DEFAULT_REPORT_NAME),
        "--out", "-o",
        help="Path of the report JSON to write"
    ),
    profiles: Optional[Path] = typer.Option(
        None,
        help=(
            "Directory for radial profile tables (CSV with columns r, value) of "
            "Gσ, Gμ, the lower bound and the solution"
        )
    ),
    tolerance: List[str] = typer.Option(
        [],
        help="Tolerance override as name=value, may be repeated"
    ),
    seed: Optional[int] = typer.Option(
        None,
        help="Seed of the randomized checks (overrides the scenario seed)"
    )
) -> None:
    try:
        tolerances = dict(_parse_tolerance(text) for text in tolerance)
    except ScenarioError as e:
        _fail(str(e), EXIT_INVALID)

    args = RunArgs(
        scenario=scenario,
        out=out,
        profiles=profiles,
        tolerances=tolerances,
        seed=seed
    )

    try:
        outcome = run_pipeline(args, typer.echo)
    except HypothesisError as e1:
        _fail(f"Hypothesis violated ({e1.hypothesis}): {e1}", EXIT_INVALID)
    except ScenarioError as e2:
        _fail(str(e2), EXIT_INVALID)
    except ReportError as e3:
        _fail(str(e3), EXIT_INVALID)
    except SubGreenError as e4:
        _fail(str(e4), EXIT_INVALID)

    if outcome.exit_code != EXIT_OK:
        typer.secho(
            f"[notice] Report status: {outcome.report['status']}.",
            fg=typer.colors.YELLOW,
            err=True,
        )
        raise typer.Exit(code=outcome.exit_code)

@app.command(help="""
Print the exponent bundle of an (n, p, q) problem as JSON.\n
Usage example:\n
  subgreen exponents --n 3 --p 4 --q 0.5\n
""")
def exponents(
    n: int = typer.Option(
        ...,
        "--n",
        help="Dimension n (at least 3)"
    ),
    p: float = typer.Option(
        ...,
        "--p",
        help="Integrability exponent with n/(n-2) < p < ∞"
    ),
    q: float = typer.Option(
        ...,
        "--q",
        help="Sublinear exponent in (0, 1)"
    )
) -> None:
    try:
        exps = build_exponents(n, p, q)
    except HypothesisError as e:
        _fail(f"Hypothesis violated ({e.hypothesis}): {e}", EXIT_INVALID)
    typer.echo(dump_json({**asdict(exps), "identities": exps.identities()}), nl=False)

@app.command(help="""
Print the JSON schema every report validates against.\n
Usage example:\n
  subgreen schema > report_schema.json\n
""")
def schema() -> None:
    typer.echo(dump_json(load_report_schema()), nl=False)

def _fail(msg: str, code_value: int) -> NoReturn:
    """
    Print an error message to stderr and exit with the given code.

    Args:
        msg (str): The error message to print.
        code_value (int): The exit code to use.

    Raises:
        typer.Exit: Always raised to exit the CLI with the given code.
    """
    typer.echo(msg, file=sys.stderr)
    raise typer.Exit(code=code_value)

if __name__ == "__main__":
    app()
