"""
Scenario loader module for reading and validating scenario files.

This module reads a scenario JSON document and builds the objects a run needs: the
domain, the measures σ and μ, the Riesz grid, the evaluation set, the list of requested
checks, tolerances and numerical settings. Every validation failure is raised as a
ScenarioError naming the offending field; violated hypotheses of the existence theorem
are raised as HypothesisError.

Dependencies:
    - numpy: For radial node arrays and density sampling.
"""

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from subgreen.common.constants import DEFAULT_TOLERANCES, KNOWN_CHECKS
from subgreen.common.enums import CheckName, DomainKind, EvalSetKind, MeasureKind
from subgreen.common.exceptions import ScenarioError, SubGreenError
from subgreen.core.conditions import exponents
from subgreen.core.measures import AtomicMeasure, GridDensity, Measure, RadialDensity
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet
from subgreen.model.grid import TensorGrid
from subgreen.model.scenario import Scenario

from .utils import _decode

DEFAULT_ITERATED_T = [0.5, 1.0, 2.0]
DEFAULT_RADIAL_NODES = 512


def load_scenario(scenario_path: Union[Path, str]) -> Scenario:
    """
    Read and validate a scenario file.

    Args:
        scenario_path (Path | str): Path to the scenario JSON file.

    Returns:
        Scenario: The validated scenario.

    Raises:
        ScenarioError: If the file cannot be read or a field is malformed.
        HypothesisError: If q or p violate the existence hypotheses.
    """
    path = Path(scenario_path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioError(f"Error in reading scenario '{path}':", e) from e
    if not isinstance(document, dict):
        raise ScenarioError(f"Scenario '{path}' must hold a JSON object.")
    return parse_scenario(_decode(document))

def parse_scenario(document: dict[str, Any]) -> Scenario:
    """
    Build a Scenario from an already parsed JSON document.

    Args:
        document (dict[str, Any]): The scenario document.

    Returns:
        Scenario: The validated scenario.

    Raises:
        ScenarioError: If a field is missing or malformed.
        HypothesisError: If q or p violate the existence hypotheses.
    """
    domain = _build_domain(_section(document, "domain"))
    q = _number(document, "q")
    p = _number(document, "p")
    exponents(domain.dim, p, q)

    sigma = _build_measure(domain, _section(document, "sigma"), "sigma")
    mu = _build_measure(domain, _section(document, "mu"), "mu")
    if sigma.is_zero and mu.is_zero:
        raise ScenarioError("Both sigma and mu are zero: (σ, μ) must not be (0, 0).")

    grid_spec = _section(document, "grid")
    spacing = _number(grid_spec, "spacing", what="grid")
    extent = _number(grid_spec, "extent", what="grid")
    try:
        grid = TensorGrid.for_domain(domain, spacing, extent)
    except SubGreenError as e:
        raise ScenarioError("Malformed grid spec:", e) from e
    riesz_radius = float(grid_spec.get("radius", extent - spacing))

    checks, iterated_t = _parse_checks(document.get("checks", []))
    tolerances = dict(DEFAULT_TOLERANCES)
    for name, value in dict(document.get("tolerances", {})).items():
        if name not in DEFAULT_TOLERANCES:
            raise ScenarioError(
                f"Unknown tolerance '{name}'. Known: {sorted(DEFAULT_TOLERANCES)}."
            )
        tolerances[name] = float(value)

    solver = dict(document.get("solver", {}))
    best = dict(document.get("best_constant", {}))
    scenario = Scenario(
        name=str(document.get("name", "scenario")),
        domain=domain,
        sigma=sigma,
        mu=mu,
        q=q,
        p=p,
        grid=grid,
        riesz_radius=riesz_radius,
        eval_set=_build_eval_set(domain, _section(document, "eval_set")),
        checks=checks,
        iterated_t=iterated_t,
        tolerances=tolerances,
        seed=int(document.get("seed", 0)),
        raw=document,
    )
    if "max_iter" in solver:
        scenario.max_iter = int(solver["max_iter"])
    if "rel_tol" in solver:
        scenario.rel_tol = float(solver["rel_tol"])
    if "trials" in best:
        scenario.best_constant_trials = int(best["trials"])
    if "steps" in best:
        scenario.best_constant_steps = int(best["steps"])
    if "lemma_trials" in document:
        scenario.lemma_trials = int(document["lemma_trials"])
    return scenario

def _build_domain(spec: dict[str, Any]) -> Domain:
    try:
        return Domain(DomainKind(spec["kind"]), int(spec["dim"]))
    except KeyError as e:
        raise ScenarioError("Domain spec needs 'kind' and 'dim':", e) from e
    except (ValueError, SubGreenError) as e:
        raise ScenarioError("Malformed domain spec:", e) from e

def _build_measure(domain: Domain, spec: dict[str, Any], what: str) -> Measure:
    try:
        kind = MeasureKind(spec.get("kind"))
    except ValueError as e:
        raise ScenarioError(
            f"Measure '{what}' has unknown kind {spec.get('kind')!r}; expected one of "
            f"{[k.value for k in MeasureKind]}."
        ) from e
    try:
        if kind == MeasureKind.ATOMIC:
            points = np.asarray(spec.get("points", []), dtype=float)
            weights = np.asarray(spec.get("weights", []), dtype=float)
            return AtomicMeasure(domain, points.reshape(-1, domain.dim), weights)
        if kind == MeasureKind.GRID:
            return _grid_measure(domain, spec, what)
        return _radial_measure(domain, spec, what)
    except ScenarioError:
        raise
    except (SubGreenError, ValueError, TypeError) as e:
        raise ScenarioError(f"Malformed measure spec for '{what}':", e) from e

def _grid_measure(domain: Domain, spec: dict[str, Any], what: str) -> GridDensity:
    spacing = _number(spec, "spacing", what=what)
    extent = _extent(spec, "extent", domain, what)
    grid = TensorGrid.for_domain(domain, spacing, extent)
    value = float(spec.get("value", 1.0))
    radius = spec.get("support_radius")
    center = np.asarray(spec.get("support_center", grid.center), dtype=float)

    def density(points: np.ndarray) -> np.ndarray:
        out = np.full(points.shape[0], value)
        if radius is not None:
            out[np.linalg.norm(points - center, axis=1) > float(radius)] = 0.0
        return out

    return GridDensity.from_function(domain, grid, density)

def _radial_measure(domain: Domain, spec: dict[str, Any], what: str) -> RadialDensity:
    radius = _extent(spec, "radius", domain, what)
    nodes = spec.get("nodes", DEFAULT_RADIAL_NODES)
    radii = (
        np.linspace(0.0, radius, int(nodes)) if isinstance(nodes, (int, float))
        else np.asarray(nodes, dtype=float)
    )
    if "values" in spec:
        values = np.asarray(spec["values"], dtype=float)
    else:
        values = np.full(radii.size, float(spec.get("value", 1.0)))
        support = spec.get("support_radius")
        if support is not None:
            values[radii > float(support)] = 0.0
    return RadialDensity(domain, radii, values)

def _build_eval_set(domain: Domain, spec: dict[str, Any]) -> EvalSet:
    try:
        kind = EvalSetKind(spec.get("kind"))
        if kind == EvalSetKind.RADIAL:
            count = int(spec.get("resolution", DEFAULT_RADIAL_NODES))
            radius = _extent(spec, "radius", domain, "eval_set")
            return EvalSet.radial(domain, np.linspace(0.0, radius, count))
        if kind == EvalSetKind.GRID:
            spacing = (
                float(spec["spacing"]) if "spacing" in spec
                else 1.0 / float(spec["resolution"])
            )
            extent = _extent(spec, "extent", domain, "eval_set")
            grid = TensorGrid.for_domain(domain, spacing, extent)
            return EvalSet.from_grid(domain, grid, spec.get("radius"))
    except ScenarioError:
        raise
    except (KeyError, ValueError, SubGreenError) as e:
        raise ScenarioError("Malformed eval_set spec:", e) from e
    raise ScenarioError(
        "Evaluation set must be quadrature complete: kind 'grid' or 'radial'."
    )

def _parse_checks(entries: Any) -> tuple[list[CheckName], list[float]]:
    if not isinstance(entries, list):
        raise ScenarioError("'checks' must be a list.")
    checks: list[CheckName] = []
    iterated_t = list(DEFAULT_ITERATED_T)
    for entry in entries:
        if isinstance(entry, dict):
            name = entry.get("name")
            if name is None and len(entry) == 1:
                name, t_values = next(iter(entry.items()))
            else:
                t_values = entry.get("t")
            if name == CheckName.ITERATED.value and t_values is not None:
                iterated_t = [float(t) for t in t_values]
        else:
            name = entry
        if name not in KNOWN_CHECKS:
            raise ScenarioError(
                f"Unknown check {name!r}. Known checks: {KNOWN_CHECKS}."
            )
        check = CheckName(name)
        if check not in checks:
            checks.append(check)
    return checks, iterated_t

def _extent(spec: dict[str, Any], key: str, domain: Domain, what: str) -> float:
    if key in spec:
        return _number(spec, key, what=what)
    return _default_extent(domain, what)

def _default_extent(domain: Domain, what: str) -> float:
    if domain.kind == DomainKind.UNIT_BALL:
        return 1.0
    raise ScenarioError(
        f"'{what}' needs an explicit extent/radius on the {domain.kind.value} domain."
    )

def _section(document: dict[str, Any], key: str) -> dict[str, Any]:
    value = document.get(key)
    if not isinstance(value, dict):
        raise ScenarioError(f"Scenario field '{key}' is missing or not an object.")
    return value

def _number(document: dict[str, Any], key: str, what: str = "scenario") -> float:
    try:
        return float(document[key])
    except KeyError as e:
        raise ScenarioError(f"Field '{key}' is missing from {what}.") from e
    except (TypeError, ValueError) as e:
        raise ScenarioError(f"Field '{key}' of {what} is not a number:", e) from e
