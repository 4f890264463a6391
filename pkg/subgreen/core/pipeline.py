"""
Pipeline functions for running a scenario: loading, condition checks, solving, energy
checks and saving the report.

This module provides the main workflow behind ``subgreen run``. Checks are executed in
dependency order (exponents, conditions, solve, verify, energy), each requested check
appears exactly once in the report, and numerical failures inside a single check are
recorded in that check's entry instead of aborting the run. Used by the CLI and other
automation scripts.
"""

import math
import time
from dataclasses import asdict
from typing import Any, Callable, Optional, TypeVar

import numpy as np
import numpy.typing as npt
from tqdm import tqdm

from subgreen.common.constants import (
    CHECK_ORDER,
    DEFAULT_TOLERANCES,
    EXIT_CONDITIONS_FAILED,
    EXIT_OK,
    PACKAGE_VERSION,
)
from subgreen.common.enums import CheckName
from subgreen.common.exceptions import ScenarioError, SolverStateError, SubGreenError
from subgreen.common.types import RunArgs, RunOutcome
from subgreen.core.conditions import (
    ConditionReport,
    Exponents,
    IteratedReport,
    check_cor12,
    check_thm11,
    exponents,
    iterated_check,
    lemma_norm_checks,
)
from subgreen.core.energy import (
    EnergyReport,
    lemma31_check,
    lemma32_check,
    riesz_energy_check,
)
from subgreen.core.potential import (
    best_constant_estimate,
    potential_field,
    weighted_norm_criterion,
)
from subgreen.core.solver import (
    SolverConfig,
    SolverTrace,
    lower_bound_field,
    minimality_gap,
    picard_solve,
    verify_solution,
)
from subgreen.io.loader import load_scenario
from subgreen.io.writer import save_profiles, save_report
from subgreen.model.field import EvalSet
from subgreen.model.scenario import Scenario

T = TypeVar("T")
CheckEntry = dict[str, Any]
FloatArray = npt.NDArray[np.float64]
ProgressCallback = Callable[[float], None]

SOLVER_CHECKS = (CheckName.SOLVE, CheckName.VERIFY)
ENERGY_CHECKS = (CheckName.LEMMA31, CheckName.LEMMA32, CheckName.RIESZ_ENERGY)


def run_pipeline(
        args: RunArgs,
        logger: Optional[Callable[[str], None]] = None
    ) -> RunOutcome:
    """
    Run a scenario end to end: load, check, solve, verify, energy checks and save.

    Args:
        args (RunArgs): Arguments of the run, requires all args attributes.
        logger (Callable[[str], None], optional): Optional logger for progress messages.

    Returns:
        RunOutcome: The report, the exit code and the written paths.

    Raises:
        ScenarioError: If the scenario cannot be read or fails validation.
        HypothesisError: If q or p violate the existence hypotheses.
        ReportError: If the report or the profiles cannot be written.
    """
    def make_progress_callback(progress_bar: Any) -> ProgressCallback:
        last_percent: list[float] = [0.0]

        def callback(current_percent: float) -> None:
            delta = current_percent - last_percent[0]
            if delta > 0:
                progress_bar.update(delta)
                last_percent[0] = current_percent

        return callback

    def with_progress(
            description: str,
            task: Callable[[Optional[ProgressCallback]], T]
        ) -> T:
        if logger:
            with tqdm(
                total=100,
                desc=description,
                bar_format="{l_bar}{bar}| [{elapsed}<{remaining}, {rate_fmt}{postfix}]"
            ) as pbar:
                return task(make_progress_callback(pbar))
        return task(None)

    (
        log_stage1,
        log_stage2,
        _,
        log_stage4,
        log_stage5,
        log_stage6
    ) = _progress_logger(logger)
    timings: dict[str, float] = {}
    started = last = time.perf_counter()

    def lap(name: str) -> None:
        nonlocal last
        now = time.perf_counter()
        timings[name] = now - last
        last = now

    scenario = load_run_scenario(args, log_stage1)
    exps = exponents(scenario.domain.dim, scenario.p, scenario.q)
    lap("load")

    if scenario.requests(CheckName.BEST_CONSTANT):
        checks = with_progress(
            "Stage 2 → Checking conditions",
            lambda callback: run_condition_checks(
                scenario, exps, progress_callback=callback
            ),
        )
    else:
        checks = run_condition_checks(scenario, exps, log_stage2)
    lap("conditions")

    trace: Optional[SolverTrace] = None
    solver_summary: Optional[dict[str, Any]] = None
    if any(scenario.requests(c) for c in SOLVER_CHECKS):
        trace, solver_checks, solver_summary = with_progress(
            f"Stage 3 → Solving by Picard iteration (q = {scenario.q:g})",
            lambda callback: run_solver(scenario, exps, progress_callback=callback),
        )
        checks.update(solver_checks)
        lap("solve")

    checks.update(run_energy_checks(scenario, exps, log_stage4))
    lap("energy")
    timings["total"] = time.perf_counter() - started

    report = build_report(scenario, exps, checks, solver_summary, timings)
    profiles = radial_profiles(scenario, trace) if args.profiles is not None else {}
    outcome = save_outputs(args, report, profiles, log_stage5)
    if log_stage6:
        log_stage6(report["status"], _failed_checks(checks))
    return outcome

def load_run_scenario(
        args: RunArgs,
        stage_logger: Optional[Callable[[str], None]] = None
    ) -> Scenario:
    """
    Load the scenario and apply the tolerance and seed overrides of the run.

    Args:
        args (RunArgs): Arguments of the run, requires only args.scenario,
            args.tolerances, args.seed.
        stage_logger (Callable[[str], None], optional): Optional logger for this stage.

    Returns:
        Scenario: The validated scenario with overrides applied.

    Raises:
        ScenarioError: If the scenario is malformed or an override names an unknown
            tolerance.
        HypothesisError: If q or p violate the existence hypotheses.
    """
    if stage_logger:
        stage_logger(str(args.scenario))
    scenario = load_scenario(args.scenario)
    for name, value in args.tolerances.items():
        if name not in DEFAULT_TOLERANCES:
            raise ScenarioError(
                f"Unknown tolerance '{name}'. Known: {sorted(DEFAULT_TOLERANCES)}."
            )
        scenario.tolerances[name] = float(value)
    if args.seed is not None:
        scenario.seed = int(args.seed)
    return scenario

def run_condition_checks(
        scenario: Scenario,
        exps: Exponents,
        stage_logger: Optional[Callable[[], None]] = None,
        progress_callback: Optional[ProgressCallback] = None
    ) -> dict[str, CheckEntry]:
    """
    Run the requested condition checks: potential conditions, density conditions,
    iterated inequalities, norm checks and the best-constant search.

    Args:
        scenario (Scenario): The scenario.
        exps (Exponents): Exponent bundle of the scenario.
        stage_logger (Callable[[], None], optional): Optional logger for this stage.
        progress_callback (Callable[[float], None], optional): Optional callback for
            progress of the best-constant search.

    Returns:
        dict[str, CheckEntry]: Report entries keyed by check name.
    """
    if stage_logger:
        stage_logger()
    domain, sigma, mu = scenario.domain, scenario.sigma, scenario.mu
    thm11_cache: list[ConditionReport] = []

    def thm11() -> ConditionReport:
        if not thm11_cache:
            thm11_cache.append(check_thm11(domain, sigma, mu, exps))
        return thm11_cache[0]

    tasks: dict[CheckName, Callable[[], CheckEntry]] = {
        CheckName.THM11: lambda: _condition_entry(thm11()),
        CheckName.COR12: lambda: _condition_entry(
            check_cor12(domain, sigma, mu, exps, thm11())
        ),
        CheckName.ITERATED: lambda: _iterated_entry([
            iterated_check(
                domain, sigma, t, tolerance=scenario.tolerances["iterated"]
            )
            for t in scenario.iterated_t
        ]),
        CheckName.LEMMA_NORMS: lambda: _condition_entry(
            lemma_norm_checks(
                domain,
                sigma,
                mu,
                exps,
                scenario.eval_set,
                seed=scenario.seed,
                trials=scenario.lemma_trials,
                thm11=thm11(),
            )
        ),
        CheckName.BEST_CONSTANT: lambda: _best_constant_entry(
            scenario, exps, progress_callback
        ),
    }
    return {
        check.value: _guarded(tasks[check])
        for check in CHECK_ORDER
        if check in tasks and scenario.requests(check)
    }

def run_solver(
        scenario: Scenario,
        exps: Exponents,
        stage_logger: Optional[Callable[[], None]] = None,
        progress_callback: Optional[ProgressCallback] = None
    ) -> tuple[Optional[SolverTrace], dict[str, CheckEntry], Optional[dict[str, Any]]]:
    """
    Solve the scenario's equation, compare with the fixed point reached from above
    and verify the solution.

    Args:
        scenario (Scenario): The scenario.
        exps (Exponents): Exponent bundle of the scenario.
        stage_logger (Callable[[], None], optional): Optional logger for this stage.
        progress_callback (Callable[[float], None], optional): Optional callback for
            progress updates of the iteration.

    Returns:
        tuple[Optional[SolverTrace], dict[str, CheckEntry], Optional[dict[str, Any]]]:
        - The trace, or None when the solver could not start.
        - Report entries of the requested solve/verify checks.
        - The solver summary of the report, or None.
    """
    if stage_logger:
        stage_logger()
    domain, sigma, mu = scenario.domain, scenario.sigma, scenario.mu
    requested = [c for c in SOLVER_CHECKS if scenario.requests(c)]
    try:
        cfg = SolverConfig(
            q=scenario.q,
            eval_set=scenario.eval_set,
            max_iter=scenario.max_iter,
            rel_tol=scenario.rel_tol,
        )
        trace = picard_solve(
            domain, sigma, mu, cfg, progress_callback=progress_callback
        )
    except SubGreenError as e:
        error = {"satisfied": False, "error": str(e)}
        return None, {c.value: dict(error) for c in requested}, None

    gap = math.nan
    if trace.converged:
        try:
            gap = minimality_gap(trace, domain, sigma, mu, cfg)
        except SolverStateError:
            gap = math.nan
    summary = _solver_summary(trace, gap)

    entries: dict[str, CheckEntry] = {}
    if scenario.requests(CheckName.SOLVE):
        entries[CheckName.SOLVE.value] = {
            "satisfied": bool(trace.converged),
            "values": {
                "iterations": float(trace.iterations),
                "solution_sup": trace.solution.sup,
                "final_residual": trace.final_residual,
                "minimality_gap": gap,
                "start_scale": trace.start_scale,
                "max_monotonicity_violation": max(
                    trace.monotonicity_violations, default=0.0
                ),
            },
        }
    if scenario.requests(CheckName.VERIFY):
        if trace.converged:
            entries[CheckName.VERIFY.value] = _guarded(
                lambda: _diagnostics_entry(
                    verify_solution(
                        trace, domain, sigma, mu, scenario.q, exps,
                        scenario.tolerances,
                    )
                )
            )
        else:
            entries[CheckName.VERIFY.value] = {
                "satisfied": False,
                "skipped": "Picard iteration did not converge.",
            }
    return trace, entries, summary

def run_energy_checks(
        scenario: Scenario,
        exps: Exponents,
        stage_logger: Optional[Callable[[], None]] = None
    ) -> dict[str, CheckEntry]:
    """
    Run the requested energy checks on the Riesz grid and the evaluation set.

    Args:
        scenario (Scenario): The scenario.
        exps (Exponents): Exponent bundle of the scenario.
        stage_logger (Callable[[], None], optional): Optional logger for this stage.

    Returns:
        dict[str, CheckEntry]: Report entries keyed by check name.
    """
    requested = [c for c in ENERGY_CHECKS if scenario.requests(c)]
    if not requested:
        return {}
    if stage_logger:
        stage_logger()
    domain, mu, q = scenario.domain, scenario.mu, scenario.q
    grid, radius = scenario.grid, scenario.riesz_radius
    clip = scenario.tolerances["clipped_fraction"]

    def lemma31() -> CheckEntry:
        report = lemma31_check(domain, mu, exps.gamma, q, grid, radius)
        bounded = math.isinf(report.rhs) or math.isfinite(report.lhs)
        return _energy_entry(report, bounded and report.clipped_fraction <= clip)

    def lemma32() -> CheckEntry:
        report = lemma32_check(domain, mu, exps.gamma, scenario.eval_set)
        bounded = math.isinf(report.rhs) or math.isfinite(report.lhs)
        return _energy_entry(report, bounded)

    def riesz_energy() -> CheckEntry:
        report = riesz_energy_check(domain, mu, q, grid, radius)
        together = math.isfinite(report.lhs) == math.isfinite(report.rhs)
        return _energy_entry(report, together and report.clipped_fraction <= clip)

    tasks: dict[CheckName, Callable[[], CheckEntry]] = {
        CheckName.LEMMA31: lemma31,
        CheckName.LEMMA32: lemma32,
        CheckName.RIESZ_ENERGY: riesz_energy,
    }
    return {check.value: _guarded(tasks[check]) for check in requested}

def build_report(
        scenario: Scenario,
        exps: Exponents,
        checks: dict[str, CheckEntry],
        solver_summary: Optional[dict[str, Any]],
        timings: dict[str, float]
    ) -> dict[str, Any]:
    """
    Assemble the report of a run.

    Args:
        scenario (Scenario): The scenario.
        exps (Exponents): Exponent bundle of the scenario.
        checks (dict[str, CheckEntry]): Entries of the requested checks.
        solver_summary (dict[str, Any], optional): Solver summary, None when the
            solver did not run.
        timings (dict[str, float]): Wall-clock seconds per stage.

    Returns:
        dict[str, Any]: The report, ready for encoding.
    """
    ordered = {
        check.value: checks[check.value]
        for check in CHECK_ORDER
        if check.value in checks
    }
    conditions_hold = all(entry["satisfied"] for entry in ordered.values())
    converged = solver_summary is None or bool(solver_summary["converged"])
    if solver_summary is not None and solver_summary["diverged"]:
        status = "diverged"
    elif conditions_hold and converged:
        status = "ok"
    else:
        status = "conditions_failed"
    return {
        "version": PACKAGE_VERSION,
        "scenario": scenario.raw,
        "seed": scenario.seed,
        "tolerances": dict(scenario.tolerances),
        "exponents": {**asdict(exps), "identities": exps.identities()},
        "checks": ordered,
        "solver": solver_summary,
        "satisfied": status == "ok",
        "status": status,
        "timings": dict(timings),
    }

def radial_profiles(
        scenario: Scenario,
        trace: Optional[SolverTrace] = None
    ) -> dict[str, tuple[FloatArray, FloatArray]]:
    """
    Profiles of Gσ, Gμ, the lower bound and the solution against the radius.

    Radial evaluation sets give the profiles on their nodes; grid evaluation sets give
    every cell value against its distance to the grid centre, sorted by distance.

    Args:
        scenario (Scenario): The scenario.
        trace (SolverTrace, optional): Solver trace; the solution profile is included
            only when it converged.

    Returns:
        dict[str, tuple[FloatArray, FloatArray]]: Profile name mapped to radii and
        values.
    """
    domain, eval_set = scenario.domain, scenario.eval_set
    fields = {
        "green_sigma": potential_field(domain, scenario.sigma, eval_set),
        "green_mu": potential_field(domain, scenario.mu, eval_set),
        "lower_bound": lower_bound_field(domain, scenario.sigma, scenario.q, eval_set),
    }
    if trace is not None and trace.converged:
        fields["solution"] = trace.solution
    radii = _profile_radii(eval_set)
    order = np.argsort(radii, kind="stable")
    return {name: (radii[order], f.values[order]) for name, f in fields.items()}

def save_outputs(
        args: RunArgs,
        report: dict[str, Any],
        profiles: dict[str, tuple[FloatArray, FloatArray]],
        stage_logger: Optional[Callable[[str], None]] = None
    ) -> RunOutcome:
    """
    Write the report and, when requested, the profile tables.

    Args:
        args (RunArgs): Arguments of the run, requires only args.out, args.profiles.
        report (dict[str, Any]): The assembled report.
        profiles (dict[str, tuple[FloatArray, FloatArray]]): Profiles to write.
        stage_logger (Callable[[str], None], optional): Optional logger for this stage.

    Returns:
        RunOutcome: The report, its exit code and the written paths.

    Raises:
        ReportError: If writing fails or the report does not match the schema.
    """
    if stage_logger:
        stage_logger(str(args.out))
    report_path = save_report(report, args.out)
    profile_paths = (
        save_profiles(profiles, args.profiles) if args.profiles is not None else []
    )
    return RunOutcome(
        report=report,
        exit_code=EXIT_OK if report["status"] == "ok" else EXIT_CONDITIONS_FAILED,
        report_path=report_path,
        profile_paths=profile_paths,
    )

def _guarded(task: Callable[[], CheckEntry]) -> CheckEntry:
    """
    Run one check, recording a library error as an unsatisfied entry.

    Args:
        task (Callable[[], CheckEntry]): The check.

    Returns:
        CheckEntry: The check's entry, or {"satisfied": False, "error": message}.
    """
    try:
        return task()
    except ScenarioError:
        raise
    except SubGreenError as e:
        return {"satisfied": False, "error": str(e)}

def _condition_entry(report: ConditionReport) -> CheckEntry:
    return {
        "satisfied": bool(report.satisfied),
        "degenerate": bool(report.degenerate),
        "values": dict(report.values),
    }

def _iterated_entry(reports: list[IteratedReport]) -> CheckEntry:
    return {
        "satisfied": all(r.satisfied for r in reports),
        "results": [
            {
                "t": r.t,
                "direction": r.direction,
                "max_violation": r.max_violation,
                "violations": r.violations,
                "satisfied": bool(r.satisfied),
            }
            for r in reports
        ],
    }

def _best_constant_entry(
        scenario: Scenario,
        exps: Exponents,
        progress_callback: Optional[ProgressCallback] = None
    ) -> CheckEntry:
    """
    Weighted norm inequality with r = γ + q and s = (γ + q)/q: the criterion norm
    next to the estimated best constant.
    """
    s, r = exps.s, exps.gamma + exps.q
    domain, sigma = scenario.domain, scenario.sigma
    criterion = weighted_norm_criterion(domain, sigma, s, r)
    values: dict[str, float] = {"s": s, "r": r, "criterion": criterion}
    if sigma.is_zero:
        if progress_callback:
            progress_callback(100.0)
        values.update(constant=0.0, ones_ratio=0.0)
        return {"satisfied": True, "degenerate": True, "values": values}
    estimate = best_constant_estimate(
        domain,
        sigma,
        s,
        r,
        trials=scenario.best_constant_trials,
        steps=scenario.best_constant_steps,
        seed=scenario.seed,
        progress_callback=progress_callback,
    )
    values.update(constant=estimate.constant, ones_ratio=estimate.ones_ratio)
    return {
        "satisfied": math.isfinite(criterion) and math.isfinite(estimate.constant),
        "degenerate": False,
        "values": values,
    }

def _diagnostics_entry(diagnostics: Any) -> CheckEntry:
    values = asdict(diagnostics)
    satisfied = bool(values.pop("satisfied"))
    return {"satisfied": satisfied, "values": values}

def _energy_entry(report: EnergyReport, satisfied: bool) -> CheckEntry:
    return {
        "satisfied": bool(satisfied),
        "degenerate": bool(report.degenerate),
        "values": {
            "gamma": report.gamma,
            "lhs": report.lhs,
            "rhs": report.rhs,
            "ratio": report.ratio,
            "clipped_mass": report.clipped_mass,
            "riesz_mass": report.riesz_mass,
            "clipped_fraction": report.clipped_fraction,
        },
    }

def _solver_summary(trace: SolverTrace, gap: float) -> dict[str, Any]:
    return {
        "iterations": trace.iterations,
        "converged": bool(trace.converged),
        "diverged": bool(trace.diverged),
        "residuals": list(trace.residuals),
        "monotonicity_violations": list(trace.monotonicity_violations),
        "start_scale": trace.start_scale,
        "final_residual": trace.final_residual,
        "residual_bound": trace.residual_bound,
        "solution_sup": trace.solution.sup,
        "minimality_gap": gap,
    }

def _profile_radii(eval_set: EvalSet) -> FloatArray:
    if eval_set.radii is not None:
        return np.asarray(eval_set.radii, dtype=float)
    center = (
        eval_set.grid.center if eval_set.grid is not None
        else np.zeros(eval_set.points.shape[1])
    )
    return np.asarray(np.linalg.norm(eval_set.points - center, axis=1), dtype=float)

def _failed_checks(checks: dict[str, CheckEntry]) -> list[str]:
    return [name for name, entry in checks.items() if not entry["satisfied"]]

def _progress_logger(
    logger: Optional[Callable[[str], None]]
    ) -> tuple[
        Optional[Callable[[str], None]],
        Optional[Callable[[], None]],
        Optional[Callable[[], None]],
        Optional[Callable[[], None]],
        Optional[Callable[[str], None]],
        Optional[Callable[[str, list[str]], None]]
    ]:
    """
    Create logger functions for each pipeline stage.

    Args:
        logger (Callable[[str], None], optional): Logger function to use for progress
            messages.

    Returns:
        tuple: Logger functions for each pipeline stage.
    """
    if logger is None:
        return (None, None, None, None, None, None)

    def stage_1_logger(scenario_path: str) -> None:
        logger(f"Stage 1 → Loading scenario {scenario_path}")

    def stage_2_logger() -> None:
        logger("Stage 2 → Checking conditions")

    def stage_3_logger() -> None:
        logger("Stage 3 → Solving by Picard iteration")

    def stage_4_logger() -> None:
        logger("Stage 4 → Running energy checks")

    def stage_5_logger(report_path: str) -> None:
        logger(f"Stage 5 → Saving report to {report_path}")

    def stage_6_logger(status: str, failed: list[str]) -> None:
        if status == "ok":
            logger("Status  → All requested checks satisfied.")
        elif status == "diverged":
            logger("Status  → Picard iteration diverged.")
        else:
            logger(f"Status  → Checks not satisfied: {', '.join(failed) or 'solve'}.")

    return (
        stage_1_logger,
        stage_2_logger,
        stage_3_logger,
        stage_4_logger,
        stage_5_logger,
        stage_6_logger
    )
