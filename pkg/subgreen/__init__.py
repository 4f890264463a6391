"""
subgreen package: Green-potential laboratory for sublinear elliptic equations.

This package evaluates Green potentials of nonnegative measures on the whole space, the
unit ball and the half-space, checks the integrability conditions under which
u = G(u^q dσ) + Gμ has a minimal positive solution, computes that solution by monotone
Picard iteration and compares generalized Green energies with those of numerical Riesz
measures.

It exposes core types, exceptions, library operations and the scenario pipeline for
both CLI and programmatic use.

Exports:
    - Enums: DomainKind, MeasureKind, EvalRule, EvalSetKind, CheckName,
        InequalityDirection
    - Exceptions: SubGreenError, DomainError, DomainMembershipError, ArgumentError,
        EvaluationError, CapabilityError, MeasureTypeError, HypothesisError,
        SolverStateError, ScenarioError, ReportError
    - Types: Domain, TensorGrid, EvalSet, Field, Measure, AtomicMeasure, GridDensity,
        RadialDensity, Exponents, ConditionReport, IteratedReport, EnergyReport,
        RieszResult, SolverConfig, IterationState, SolverTrace, SolutionDiagnostics,
        BestConstantEstimate, Scenario, RunArgs, RunOutcome
    - Kernels: green_kernel
    - Potentials: green_potential, potential_field, self_potential, lp_norm_dx,
        lp_norm_dmu, weighted_norm_criterion, best_constant_estimate
    - Solver: lower_bound_field, picard_solve, verify_solution, minimality_gap
    - Energy: energy, riesz_measure_numeric, reconstruction_defect, lemma31_check,
        lemma32_check, riesz_energy_check
    - Conditions: exponents, check_thm11, check_cor12, iterated_check,
        lemma_norm_checks
    - Pipeline: run_pipeline
    - IO: load_scenario, save_report, save_profiles, load_report_schema
"""

from subgreen.common.enums import (
                                  CheckName,
                                  DomainKind,
                                  EvalRule,
                                  EvalSetKind,
                                  InequalityDirection,
                                  MeasureKind,
)
from subgreen.common.exceptions import (
                                  ArgumentError,
                                  CapabilityError,
                                  DomainError,
                                  DomainMembershipError,
                                  EvaluationError,
                                  HypothesisError,
                                  MeasureTypeError,
                                  ReportError,
                                  ScenarioError,
                                  SolverStateError,
                                  SubGreenError,
)
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
                                  RieszResult,
                                  energy,
                                  lemma31_check,
                                  lemma32_check,
                                  reconstruction_defect,
                                  riesz_energy_check,
                                  riesz_measure_numeric,
)
from subgreen.core.kernels import green_kernel
from subgreen.core.measures import (
                                  AtomicMeasure,
                                  GridDensity,
                                  Measure,
                                  RadialDensity,
)
from subgreen.core.pipeline import run_pipeline
from subgreen.core.potential import (
                                  BestConstantEstimate,
                                  best_constant_estimate,
                                  green_potential,
                                  lp_norm_dmu,
                                  lp_norm_dx,
                                  potential_field,
                                  self_potential,
                                  weighted_norm_criterion,
)
from subgreen.core.solver import (
                                  IterationState,
                                  SolutionDiagnostics,
                                  SolverConfig,
                                  SolverTrace,
                                  lower_bound_field,
                                  minimality_gap,
                                  picard_solve,
                                  verify_solution,
)
from subgreen.io.loader import load_scenario
from subgreen.io.writer import load_report_schema, save_profiles, save_report
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet, Field
from subgreen.model.grid import TensorGrid
from subgreen.model.scenario import Scenario

__version__ = "0.1.0"

__all__ = [
                                  "ArgumentError",
                                  "AtomicMeasure",
                                  "BestConstantEstimate",
                                  "CapabilityError",
                                  "CheckName",
                                  "ConditionReport",
                                  "Domain",
                                  "DomainError",
                                  "DomainKind",
                                  "DomainMembershipError",
                                  "EnergyReport",
                                  "EvalRule",
                                  "EvalSet",
                                  "EvalSetKind",
                                  "EvaluationError",
                                  "Exponents",
                                  "Field",
                                  "GridDensity",
                                  "HypothesisError",
                                  "InequalityDirection",
                                  "IterationState",
                                  "IteratedReport",
                                  "Measure",
                                  "MeasureKind",
                                  "MeasureTypeError",
                                  "RadialDensity",
                                  "ReportError",
                                  "RieszResult",
                                  "RunArgs",
                                  "RunOutcome",
                                  "Scenario",
                                  "ScenarioError",
                                  "SolutionDiagnostics",
                                  "SolverConfig",
                                  "SolverStateError",
                                  "SolverTrace",
                                  "SubGreenError",
                                  "TensorGrid",
                                  "best_constant_estimate",
                                  "check_cor12",
                                  "check_thm11",
                                  "energy",
                                  "exponents",
                                  "green_kernel",
                                  "green_potential",
                                  "iterated_check",
                                  "lemma31_check",
                                  "lemma32_check",
                                  "lemma_norm_checks",
                                  "load_report_schema",
                                  "load_scenario",
                                  "lower_bound_field",
                                  "lp_norm_dmu",
                                  "lp_norm_dx",
                                  "minimality_gap",
                                  "picard_solve",
                                  "potential_field",
                                  "reconstruction_defect",
                                  "riesz_energy_check",
                                  "riesz_measure_numeric",
                                  "run_pipeline",
                                  "save_profiles",
                                  "save_report",
                                  "self_potential",
                                  "verify_solution",
                                  "weighted_norm_criterion",
]

Domain.__module__ = "subgreen"
TensorGrid.__module__ = "subgreen"
EvalSet.__module__ = "subgreen"
Field.__module__ = "subgreen"
Measure.__module__ = "subgreen"
AtomicMeasure.__module__ = "subgreen"
GridDensity.__module__ = "subgreen"
RadialDensity.__module__ = "subgreen"
Exponents.__module__ = "subgreen"
SolverConfig.__module__ = "subgreen"
SolverTrace.__module__ = "subgreen"
Scenario.__module__ = "subgreen"

DomainKind.__module__ = "subgreen"
MeasureKind.__module__ = "subgreen"
EvalRule.__module__ = "subgreen"
EvalSetKind.__module__ = "subgreen"
CheckName.__module__ = "subgreen"
InequalityDirection.__module__ = "subgreen"

SubGreenError.__module__ = "subgreen"
ArgumentError.__module__ = "subgreen"
HypothesisError.__module__ = "subgreen"
ScenarioError.__module__ = "subgreen"
ReportError.__module__ = "subgreen"
