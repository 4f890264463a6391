"""
In-memory form of a scenario file.

A Scenario holds the constructed domain, measures, grids and evaluation set of one 
run, the list of requested checks and the numerical settings, together with the raw 
JSON document that is echoed into the report.
"""

from dataclasses import dataclass, field
from typing import Any, Optional

from subgreen.common.constants import (
    DEFAULT_BEST_CONSTANT_STEPS,
    DEFAULT_BEST_CONSTANT_TRIALS,
    DEFAULT_LEMMA_TRIALS,
    DEFAULT_MAX_ITER,
    DEFAULT_REL_TOL,
    DEFAULT_TOLERANCES,
)
from subgreen.common.enums import CheckName
from subgreen.core.measures import Measure
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet
from subgreen.model.grid import TensorGrid


@dataclass
class Scenario:
    """
    A validated scenario.

    Attributes:
        name (str): Scenario name.
        domain (Domain): The domain.
        sigma (Measure): Coefficient measure σ.
        mu (Measure): Data measure μ.
        q (float): Sublinear exponent.
        p (float): Target integrability exponent.
        grid (TensorGrid): Grid of the Riesz-measure checks.
        riesz_radius (float, optional): Radius of the active Riesz region around the 
            grid centre.
        eval_set (EvalSet): Quadrature-complete evaluation set.
        checks (list[CheckName]): Requested checks, without duplicates.
        iterated_t (list[float]): Exponents of the iterated check.
        tolerances (dict[str, float]): Tolerance map (defaults merged in).
        seed (int): Seed of the randomized checks.
        max_iter (int): Picard iteration cap.
        rel_tol (float): Picard stopping tolerance.
        lemma_trials (int): Number of random test functions of the norm lemmas.
        best_constant_trials (int): Starts of the best-constant search.
        best_constant_steps (int): Ascent steps per start.
        raw (dict[str, Any]): The scenario document as read.
    """

    name: str
    domain: Domain
    sigma: Measure
    mu: Measure
    q: float
    p: float
    grid: TensorGrid
    eval_set: EvalSet
    checks: list[CheckName]
    riesz_radius: Optional[float] = None
    iterated_t: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    tolerances: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_TOLERANCES)
    )
    seed: int = 0
    max_iter: int = DEFAULT_MAX_ITER
    rel_tol: float = DEFAULT_REL_TOL
    lemma_trials: int = DEFAULT_LEMMA_TRIALS
    best_constant_trials: int = DEFAULT_BEST_CONSTANT_TRIALS
    best_constant_steps: int = DEFAULT_BEST_CONSTANT_STEPS
    raw: dict[str, Any] = field(default_factory=dict)

    def requests(self, check: CheckName) -> bool:
        return check in self.checks
