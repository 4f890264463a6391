"""
Minimal positive solutions of u = G(u^q dσ) + Gμ by monotone Picard iteration.

The iteration runs on the quadrature nodes of σ, where u^q dσ is formed exactly by
reweighting, and carries the evaluation set along: every iterate on the evaluation set
is G(v^q dσ) + Gμ for the node iterate v of the previous step, so the pointwise order
of the node iterates transfers to the evaluation set without interpolation.

Dependencies:
    numpy: For iterate arrays and the sup-norm diagnostics.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt

from subgreen.common.constants import (
    DEFAULT_MAX_ITER,
    DEFAULT_REL_TOL,
    DEFAULT_TOLERANCES,
    OVERFLOW_GUARD,
)
from subgreen.common.enums import DomainKind
from subgreen.common.exceptions import ArgumentError, SolverStateError
from subgreen.core.conditions import Exponents
from subgreen.core.measures import Measure
from subgreen.core.potential import GreenOperator, lp_norm_dx
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet, Field

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class SolverConfig:
    """
    Settings of the Picard iteration.

    Attributes:
        q (float): Sublinear exponent, 0 < q < 1.
        eval_set (EvalSet): Quadrature-complete evaluation set of the iterates.
        max_iter (int): Iteration cap. Defaults to 200.
        rel_tol (float): Stop when the sup-norm relative change is at most this.
            Defaults to 1e-8.

    Raises:
        ArgumentError: If q is outside (0, 1), rel_tol ≤ 0 or max_iter < 1.
        CapabilityError: If the evaluation set carries no dx quadrature.
    """

    q: float
    eval_set: EvalSet
    max_iter: int = DEFAULT_MAX_ITER
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self) -> None:
        _check_q(self.q)
        if not self.rel_tol > 0:
            raise ArgumentError(
                f"Relative tolerance must be positive, got {self.rel_tol}."
            )
        if self.max_iter < 1:
            raise ArgumentError(f"max_iter must be at least 1, got {self.max_iter}.")
        self.eval_set.quadrature_weights()


@dataclass
class IterationState:
    """
    One Picard state: values on the evaluation set and on the support nodes of σ.

    Attributes:
        eval_values (FloatArray): Values on the evaluation set.
        node_values (FloatArray): Values on the support nodes of σ.
    """

    eval_values: FloatArray
    node_values: FloatArray

    def scaled(self, factor: float) -> "IterationState":
        return IterationState(self.eval_values * factor, self.node_values * factor)


@dataclass
class SolverTrace:
    """
    Record of a Picard run.

    Attributes:
        iterates (list[Field]): Iterates on the evaluation set, starting with u₀.
        residuals (list[float]): Sup-norm relative change of every step.
        monotonicity_violations (list[float]): Largest pointwise move against the
            expected direction per step (decrease when iterating from below).
        converged (bool): Whether the stopping rule was met.
        diverged (bool): Whether the overflow guard fired or a node value became
            infinite.
        solution (Field): Last iterate.
        final_state (IterationState): Last state, node values included.
        data_field (Field): Gμ on the evaluation set.
        start_scale (float): Factor θ applied to the lower bound in the homogeneous
            start (1 otherwise).
        from_above (bool): Whether the run iterated downward from a supersolution.
        final_residual (float): ‖u - G(u^q dσ) - Gμ‖_sup / ‖u‖_sup of the solution.
        residual_bound (float): rel_tol (1+q)/(1-q), the tail bound of the stopping
            rule.
    """

    iterates: list[Field]
    residuals: list[float]
    monotonicity_violations: list[float]
    converged: bool
    diverged: bool
    solution: Field
    final_state: IterationState
    data_field: Field
    start_scale: float = 1.0
    from_above: bool = False
    final_residual: float = field(default=float("nan"))
    residual_bound: float = field(default=float("nan"))

    @property
    def iterations(self) -> int:
        return len(self.residuals)


@dataclass
class SolutionDiagnostics:
    """
    Verification record of a converged solution.

    Attributes:
        lower_bound_margin (float): min over the evaluation set of u - lower bound.
        relative_margin (float): The margin divided by ‖u‖_sup.
        lp_norm (float): ‖u‖_{L^p(dx)}.
        sigma_norm (float): ‖u‖_{L^{γ+q}(dσ)}.
        residual (float): Relative residual of the integral equation.
        data_lp_norm (float): ‖Gμ‖_{L^p(dx)}.
        coefficient_lp_norm (float): ‖G(u^q dσ)‖_{L^p(dx)}.
        boundary_ratio (float): Max of u over the outer layer of the evaluation set
            divided by ‖u‖_sup.
        satisfied (bool): Margin, finiteness and residual all within tolerance.
    """

    lower_bound_margin: float
    relative_margin: float
    lp_norm: float
    sigma_norm: float
    residual: float
    data_lp_norm: float
    coefficient_lp_norm: float
    boundary_ratio: float
    satisfied: bool


class _PicardSystem:
    """
    The four Green operators of one problem: σ and μ, each evaluated on the support
    nodes of σ and on the evaluation set.
    """

    def __init__(
            self,
            domain: Domain,
            sigma: Measure,
            mu: Measure,
            eval_set: EvalSet
        ) -> None:
        self.sigma = sigma
        nodes = sigma.support_nodes
        self.sigma_nodes = GreenOperator(domain, sigma, nodes)
        self.sigma_eval = GreenOperator(domain, sigma, eval_set.points)
        self.data_nodes = GreenOperator(domain, mu, nodes).potential(mu)
        self.data_eval = GreenOperator(domain, mu, eval_set.points).potential(mu)

    def step(self, state: IterationState, q: float) -> IterationState:
        masses = np.zeros(self.sigma.masses.shape)
        masses[self.sigma.support_index] = (
            self.sigma.support_masses * state.node_values**q
        )
        return IterationState(
            eval_values=self.sigma_eval.apply(masses) + self.data_eval,
            node_values=self.sigma_nodes.apply(masses) + self.data_nodes,
        )

    def lower_bound(self, q: float) -> IterationState:
        factor = (1.0 - q) ** (1.0 / (1.0 - q))
        potential = self.sigma_nodes.potential(self.sigma)
        return IterationState(
            eval_values=factor * self.sigma_eval.potential(self.sigma) ** (1 / (1 - q)),
            node_values=factor * potential ** (1.0 / (1.0 - q)),
        )


def lower_bound_field(
        domain: Domain,
        sigma: Measure,
        q: float,
        eval_set: EvalSet
    ) -> Field:
    """
    The pointwise lower bound (1-q)^{1/(1-q)} (Gσ)^{1/(1-q)} of every positive
    supersolution.

    Args:
        domain (Domain): The domain.
        sigma (Measure): The coefficient measure σ.
        q (float): Exponent in (0, 1).
        eval_set (EvalSet): Evaluation points.

    Returns:
        Field: The lower-bound field.

    Raises:
        ArgumentError: If q is outside (0, 1).
    """
    _check_q(q)
    potential = GreenOperator(domain, sigma, eval_set.points).potential(sigma)
    values = (1.0 - q) ** (1.0 / (1.0 - q)) * potential ** (1.0 / (1.0 - q))
    return Field(domain, eval_set, values, eval_set.default_rule)

def picard_solve(
        domain: Domain,
        sigma: Measure,
        mu: Measure,
        cfg: SolverConfig,
        start: Optional[IterationState] = None,
        descending: bool = False,
        progress_callback: Optional[Callable[[float], None]] = None
    ) -> SolverTrace:
    """
    Minimal positive solution of u = G(u^q dσ) + Gμ by Picard iteration.

    Without an explicit start the iteration begins at u₀ = Gμ when μ ≠ 0, and at the
    lower bound θ·(1-q)^{1/(1-q)}(Gσ)^{1/(1-q)} when μ = 0, where θ ≤ 1 is the largest
    factor making the start a subsolution of the discrete equation; both starts make
    the iterates increase. A start above the solution (e.g. twice a solution) makes
    them decrease instead; pass descending=True so that monotonicity is measured in that
    direction.

    Args:
        domain (Domain): The domain.
        sigma (Measure): Coefficient measure σ.
        mu (Measure): Data measure μ.
        cfg (SolverConfig): Iteration settings.
        start (IterationState, optional): Explicit starting state on cfg.eval_set and
            the support nodes of σ.
        descending (bool): Whether the iterates are expected to decrease.
        progress_callback (Callable[[float], None], optional): Receives the completed
            percentage of max_iter.

    Returns:
        SolverTrace: The trace; divergence is reported with converged=False.

    Raises:
        ArgumentError: If σ and μ are both zero, or the start does not fit.
    """
    if sigma.is_zero and mu.is_zero:
        raise ArgumentError(
            "Both measures are zero: the equation needs (σ, μ) ≠ (0, 0)."
        )
    q = cfg.q
    system = _PicardSystem(domain, sigma, mu, cfg.eval_set)
    rule = cfg.eval_set.default_rule
    data_field = Field(domain, cfg.eval_set, system.data_eval, rule)

    start_scale = 1.0
    if start is not None:
        if (start.eval_values.shape != (cfg.eval_set.size,)
                or start.node_values.shape != (sigma.support_index.size,)):
            raise ArgumentError("Starting state does not fit the evaluation set or σ.")
        state = start
    elif mu.is_zero:
        bound = system.lower_bound(q)
        state = bound
        if not _overflows(bound.node_values):
            start_scale = _subsolution_scale(bound, system.step(bound, q), q)
            state = bound.scaled(start_scale)
    else:
        state = IterationState(system.data_eval.copy(), system.data_nodes.copy())

    iterates = [Field(domain, cfg.eval_set, state.eval_values, rule)]
    residuals: list[float] = []
    violations: list[float] = []
    converged = diverged = False
    sign = -1.0 if descending else 1.0

    for k in range(cfg.max_iter):
        if _overflows(state.node_values):
            diverged = True
            break
        new = system.step(state, q)
        if _overflows(new.node_values):
            diverged = True
            break
        change = max(
            _relative_change(new.eval_values, state.eval_values),
            _relative_change(new.node_values, state.node_values),
        )
        residuals.append(change)
        violations.append(max(
            _largest_move(state.eval_values, new.eval_values, sign),
            _largest_move(state.node_values, new.node_values, sign),
        ))
        state = new
        iterates.append(Field(domain, cfg.eval_set, state.eval_values, rule))
        if progress_callback:
            progress_callback(100.0 * (k + 1) / cfg.max_iter)
        if change <= cfg.rel_tol:
            converged = True
            break

    final_residual = float("nan")
    if not diverged:
        final_residual = _sup_residual(system.step(state, q).eval_values,
                                       state.eval_values)
    if progress_callback:
        progress_callback(100.0)
    return SolverTrace(
        iterates=iterates,
        residuals=residuals,
        monotonicity_violations=violations,
        converged=converged,
        diverged=diverged,
        solution=iterates[-1],
        final_state=state,
        data_field=data_field,
        start_scale=start_scale,
        from_above=descending,
        final_residual=final_residual,
        residual_bound=cfg.rel_tol * (1 + q) / (1 - q),
    )

def verify_solution(
        trace: SolverTrace,
        domain: Domain,
        sigma: Measure,
        mu: Measure,
        q: float,
        exps: Exponents,
        tolerances: Optional[dict[str, float]] = None
    ) -> SolutionDiagnostics:
    """
    Check a converged solution against the lower bound, the integrability classes
    and the integral equation.

    Args:
        trace (SolverTrace): Converged trace.
        domain (Domain): The domain.
        sigma (Measure): Coefficient measure σ.
        mu (Measure): Data measure μ.
        q (float): Exponent in (0, 1).
        exps (Exponents): Exponent bundle (p and γ are used).
        tolerances (dict[str, float], optional): Overrides of DEFAULT_TOLERANCES.

    Returns:
        SolutionDiagnostics: The verification record.

    Raises:
        SolverStateError: If the trace did not converge.
    """
    if not trace.converged:
        raise SolverStateError("Cannot verify a trace that did not converge.")
    tol = {**DEFAULT_TOLERANCES, **(tolerances or {})}
    u = trace.solution
    bound = lower_bound_field(domain, sigma, q, u.eval_set)
    both = np.isfinite(u.values) & np.isfinite(bound.values)
    margin = float(np.min(u.values[both] - bound.values[both])) if np.any(both) else 0.0
    sup = _finite_sup(u.values)
    relative_margin = margin / sup if sup > 0 else 0.0

    lp_norm = lp_norm_dx(u, exps.p)
    exponent = exps.gamma + q
    node_values = trace.final_state.node_values
    if sigma.is_zero:
        sigma_norm = 0.0
    elif np.any(np.isinf(node_values)):
        sigma_norm = float("inf")
    else:
        sigma_norm = float(
            np.sum(sigma.support_masses * node_values**exponent)
        ) ** (1.0 / exponent)

    data_lp = lp_norm_dx(trace.data_field, exps.p)
    coefficient = np.where(
        np.isfinite(u.values), np.maximum(u.values - trace.data_field.values, 0.0), 0.0
    )
    coefficient_lp = lp_norm_dx(u.with_values(coefficient), exps.p)

    satisfied = (
        margin >= -tol["lower_bound_margin"]
        and np.isfinite(lp_norm)
        and np.isfinite(sigma_norm)
        and trace.final_residual <= tol["residual"]
    )
    return SolutionDiagnostics(
        lower_bound_margin=margin,
        relative_margin=relative_margin,
        lp_norm=lp_norm,
        sigma_norm=sigma_norm,
        residual=trace.final_residual,
        data_lp_norm=data_lp,
        coefficient_lp_norm=coefficient_lp,
        boundary_ratio=_boundary_ratio(domain, u),
        satisfied=bool(satisfied),
    )

def minimality_gap(
        trace: SolverTrace,
        domain: Domain,
        sigma: Measure,
        mu: Measure,
        cfg: SolverConfig
    ) -> float:
    """
    Compare the solution with the fixed point reached from above.

    Restarts the iteration from twice the solution (a supersolution, by sublinearity)
    and returns min(limit_from_above - solution) / ‖solution‖_sup. A value ≥ -ε says
    the limit from below is the smallest fixed point observed.

    Args:
        trace (SolverTrace): Converged trace of the run from below.
        domain (Domain): The domain.
        sigma (Measure): Coefficient measure σ.
        mu (Measure): Data measure μ.
        cfg (SolverConfig): Settings used for the run from below.

    Returns:
        float: The relative gap.

    Raises:
        SolverStateError: If either run did not converge.
    """
    if not trace.converged:
        raise SolverStateError("Minimality check needs a converged trace.")
    above = picard_solve(domain, sigma, mu, cfg, start=trace.final_state.scaled(2.0),
                         descending=True)
    if not above.converged:
        raise SolverStateError("Iteration from above did not converge.")
    below = trace.solution.values
    finite = np.isfinite(below) & np.isfinite(above.solution.values)
    sup = _finite_sup(below)
    if sup == 0.0 or not np.any(finite):
        return 0.0
    return float(np.min(above.solution.values[finite] - below[finite])) / sup

def _subsolution_scale(bound: IterationState, image: IterationState, q: float) -> float:
    """
    θ = min(1, min T(L)/L)^{1/(1-q)}, so that T(θL) ≥ θL on every node and point.
    """
    ratios = []
    for lower, upper in ((bound.node_values, image.node_values),
                         (bound.eval_values, image.eval_values)):
        positive = (lower > 0) & np.isfinite(lower)
        if np.any(positive):
            ratios.append(float(np.min(upper[positive] / lower[positive])))
    least = min([1.0, *ratios])
    return float(max(least, 0.0) ** (1.0 / (1.0 - q)))

def _overflows(values: FloatArray) -> bool:
    return bool(np.any(~np.isfinite(values)) or np.any(values > OVERFLOW_GUARD))

def _relative_change(new: FloatArray, old: FloatArray) -> float:
    finite = np.isfinite(new) & np.isfinite(old)
    if not np.any(finite):
        return 0.0
    scale = float(np.max(np.abs(new[finite])))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(new[finite] - old[finite]))) / scale

def _sup_residual(image: FloatArray, current: FloatArray) -> float:
    finite = np.isfinite(image) & np.isfinite(current)
    if not np.any(finite):
        return 0.0
    scale = float(np.max(np.abs(current[finite])))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(image[finite] - current[finite]))) / scale

def _largest_move(old: FloatArray, new: FloatArray, sign: float) -> float:
    finite = np.isfinite(new) & np.isfinite(old)
    if not np.any(finite):
        return 0.0
    return max(0.0, float(np.max(sign * (old[finite] - new[finite]))))

def _finite_sup(values: FloatArray) -> float:
    finite = values[np.isfinite(values)]
    return float(np.max(finite)) if finite.size else 0.0

def _boundary_ratio(domain: Domain, u: Field) -> float:
    sup = _finite_sup(u.values)
    if sup == 0.0:
        return 0.0
    points = u.eval_set.points
    if domain.kind == DomainKind.WHOLE_SPACE:
        radius = np.linalg.norm(points, axis=1)
        layer = radius >= 0.9 * float(np.max(radius))
    else:
        distance = domain.boundary_distance(points)
        layer = distance <= 0.1 * float(np.max(distance))
    values = u.values[layer & np.isfinite(u.values)]
    return float(np.max(values)) / sup if values.size else 0.0

def _check_q(q: float) -> None:
    if not 0 < q < 1:
        raise ArgumentError(f"Exponent q must lie in (0, 1), got {q}.")
