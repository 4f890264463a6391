"""
Type definitions for argument handling of scenario runs.

This module defines the RunArgs dataclass, which stores every option of a scenario 
run and is passed from the CLI through loading, the check pipeline and report writing. 
It keeps function signatures short and the option set type safe. RunOutcome carries the 
assembled report and the exit code back to the caller.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union


@dataclass
class RunArgs:
    """
    Container for all arguments used in the scenario workflow.

    Attributes:
        scenario (Path | str): Path to the scenario JSON file. Defaults to "" (empty 
            Path).
        out (Path | str): Path of the report JSON to write. Defaults to "report.json".
        profiles (Optional[Path]): Directory for the radial profile CSV tables; no 
            tables are written when None. Defaults to None.
        tolerances (dict[str, float]): Tolerance overrides, applied on top of the 
            scenario's own map. Defaults to {}.
        seed (Optional[int]): Seed override for the randomized checks. Defaults to 
            None (use the scenario seed).
    """

    scenario: Union[Path, str] = ""
    out: Union[Path, str] = "report.json"
    profiles: Optional[Path] = None
    tolerances: dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None

@dataclass
class RunOutcome:
    """
    Result of a scenario run.

    Attributes:
        report (dict[str, Any]): The assembled report, before encoding.
        exit_code (int): 0 when every requested check is satisfied and the solver (if
            run) converged, 2 otherwise.
        report_path (Optional[Path]): Where the report was written.
        profile_paths (list[Path]): The written profile tables.
    """

    report: dict[str, Any]
    exit_code: int
    report_path: Optional[Path] = None
    profile_paths: list[Path] = field(default_factory=list)
