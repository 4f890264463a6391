"""
Unit tests for the Picard solver in subgreen.core.solver.

This module checks the solver settings, the pure-data case (torsion function), the
homogeneous case started from the scaled lower bound, monotonicity of the iterates,
the residual and minimality diagnostics, divergence handling and the verification of
converged solutions.
"""
import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from subgreen.common.enums import DomainKind
from subgreen.common.exceptions import (
    ArgumentError,
    CapabilityError,
    SolverStateError,
)
from subgreen.core.conditions import exponents
from subgreen.core.measures import AtomicMeasure
from subgreen.core.solver import (
    IterationState,
    SolverConfig,
    SolverTrace,
    lower_bound_field,
    minimality_gap,
    picard_solve,
    verify_solution,
)
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet
from tests.common_utils.utils import (
    radial_constant,
    radial_eval_set,
    torsion_profile,
    unit_ball,
)

def _homogeneous(q: float = 0.5, nodes: int = 256) -> tuple[SolverTrace, SolverConfig]:
    ball = unit_ball()
    sigma = radial_constant(ball, 1.0, nodes=nodes)
    mu = radial_constant(ball, 0.0, nodes=nodes)
    cfg = SolverConfig(q=q, eval_set=radial_eval_set(ball, nodes))
    return picard_solve(ball, sigma, mu, cfg), cfg

# ----------------------------
# Settings Tests
# ----------------------------

@pytest.mark.parametrize("q, max_iter, rel_tol", [
    (0.0, 10, 1e-8),
    (1.0, 10, 1e-8),
    (0.5, 0, 1e-8),
    (0.5, 10, 0.0),
])
def test_solver_config_rejects_bad_settings(q: float, max_iter: int,
                                            rel_tol: float) -> None:
    """
    Test that q outside (0, 1), max_iter < 1 and rel_tol ≤ 0 are rejected.

    Args:
        q (float): Exponent q.
        max_iter (int): Iteration cap.
        rel_tol (float): Stopping tolerance.
    """
    with pytest.raises(ArgumentError):
        SolverConfig(q=q, eval_set=radial_eval_set(unit_ball(), 8),
                     max_iter=max_iter, rel_tol=rel_tol)

def test_solver_config_needs_quadrature() -> None:
    """
    Test that the evaluation set must carry dx quadrature.
    """
    ball = unit_ball()
    cloud = EvalSet.from_points(ball, np.array([[0.1, 0.0, 0.0]]))
    with pytest.raises(CapabilityError):
        SolverConfig(q=0.5, eval_set=cloud)

def test_both_measures_zero_rejected() -> None:
    """
    Test that (σ, μ) = (0, 0) is rejected.
    """
    ball = unit_ball()
    zero = radial_constant(ball, 0.0, nodes=16)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball, 16))
    with pytest.raises(ArgumentError):
        picard_solve(ball, zero, zero, cfg)

# ----------------------------
# Pure Data Tests
# ----------------------------

def test_torsion_solution() -> None:
    """
    Test that σ = 0 and μ ≡ 1 give u = (1 - |x|²)/6 after one step.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 0.0)
    mu = radial_constant(ball, 1.0)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball))
    trace = picard_solve(ball, sigma, mu, cfg)
    assert trace.converged and not trace.diverged
    assert trace.iterations == 1
    radii = cfg.eval_set.radii
    inner = radii <= 0.8
    expected = torsion_profile(radii[inner])
    relative = np.abs(trace.solution.values[inner] - expected) / expected
    assert np.max(relative) <= 1e-4
    assert trace.final_residual <= 1e-12
    assert np.array_equal(trace.data_field.values, trace.solution.values)

def test_data_start_increases() -> None:
    """
    Test that starting from Gμ the iterates increase and stay above Gμ.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 1.0, nodes=128)
    mu = radial_constant(ball, 1.0, nodes=128)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball, 128))
    trace = picard_solve(ball, sigma, mu, cfg)
    assert trace.converged
    assert trace.start_scale == 1.0
    assert max(trace.monotonicity_violations) <= 1e-12
    assert np.all(trace.solution.values >= trace.data_field.values)
    for older, newer in zip(trace.iterates, trace.iterates[1:], strict=False):
        assert np.all(newer.values >= older.values - 1e-15)

# ----------------------------
# Homogeneous Problem Tests
# ----------------------------

def test_homogeneous_solution() -> None:
    """
    Test the positive solution of u = G(u^{1/2}) on the unit ball in three
    dimensions.
    """
    trace, cfg = _homogeneous()
    assert trace.converged
    assert 0.0 < trace.start_scale <= 1.0
    assert max(trace.monotonicity_violations) <= 1e-10
    centre = float(trace.solution.values[0])
    assert 0.015 < centre < 0.021
    assert trace.solution.values[-1] == 0.0
    assert trace.final_residual <= trace.residual_bound * 10
    assert trace.residual_bound == pytest.approx(cfg.rel_tol * 1.5 / 0.5)

def test_final_residual_scaled_by_current_iterate() -> None:
    """
    Test that the final residual is ‖T(u) - u‖_sup / ‖u‖_sup for the returned u, not
    scaled by ‖T(u)‖_sup.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 1.0, nodes=64)
    mu = radial_constant(ball, 0.0, nodes=64)
    eval_set = radial_eval_set(ball, 64)
    one = picard_solve(ball, sigma, mu, SolverConfig(q=0.5, eval_set=eval_set,
                                                     max_iter=1))
    two = picard_solve(ball, sigma, mu, SolverConfig(q=0.5, eval_set=eval_set,
                                                     max_iter=2))
    assert not one.converged and not one.diverged
    u = one.solution.values
    image = two.iterates[2].values
    gap = float(np.max(np.abs(image - u)))
    assert one.final_residual == pytest.approx(gap / float(np.max(u)), rel=1e-12)
    assert one.final_residual > gap / float(np.max(image))

def test_homogeneous_solution_above_lower_bound() -> None:
    """
    Test that the solution dominates the pointwise lower bound.
    """
    ball = unit_ball()
    trace, cfg = _homogeneous()
    sigma = radial_constant(ball, 1.0, nodes=256)
    bound = lower_bound_field(ball, sigma, cfg.q, cfg.eval_set)
    assert np.all(trace.solution.values >= bound.values - 1e-9)
    assert trace.iterates[0].values == pytest.approx(
        trace.start_scale * bound.values, rel=1e-12
    )

def test_homogeneous_minimality_gap() -> None:
    """
    Test that the iteration from above meets the solution from below.
    """
    ball = unit_ball()
    trace, cfg = _homogeneous()
    sigma = radial_constant(ball, 1.0, nodes=256)
    mu = radial_constant(ball, 0.0, nodes=256)
    gap = minimality_gap(trace, ball, sigma, mu, cfg)
    assert gap >= -1e-6
    assert gap <= 1e-6

def test_descending_start() -> None:
    """
    Test that a start above the solution gives decreasing iterates.
    """
    ball = unit_ball()
    trace, cfg = _homogeneous()
    sigma = radial_constant(ball, 1.0, nodes=256)
    mu = radial_constant(ball, 0.0, nodes=256)
    above = picard_solve(ball, sigma, mu, cfg, start=trace.final_state.scaled(3.0),
                         descending=True)
    assert above.converged and above.from_above
    assert max(above.monotonicity_violations) <= 1e-10
    assert above.solution.values == pytest.approx(trace.solution.values, rel=1e-6,
                                                  abs=1e-8)

def test_start_must_fit() -> None:
    """
    Test that an explicit start of the wrong shape is rejected.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 1.0, nodes=16)
    mu = radial_constant(ball, 0.0, nodes=16)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball, 16))
    start = IterationState(np.ones(3), np.ones(3))
    with pytest.raises(ArgumentError):
        picard_solve(ball, sigma, mu, cfg, start=start)

def test_iteration_cap() -> None:
    """
    Test that hitting max_iter leaves the trace unconverged but not diverged.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 1.0, nodes=64)
    mu = radial_constant(ball, 0.0, nodes=64)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball, 64), max_iter=2)
    trace = picard_solve(ball, sigma, mu, cfg)
    assert not trace.converged and not trace.diverged
    assert trace.iterations == 2
    assert len(trace.iterates) == 3

def test_progress_callback() -> None:
    """
    Test that the progress callback ends at 100 percent.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 1.0, nodes=32)
    mu = radial_constant(ball, 1.0, nodes=32)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball, 32))
    seen: list[float] = []
    picard_solve(ball, sigma, mu, cfg, progress_callback=seen.append)
    assert seen[-1] == 100.0

# ----------------------------
# Divergence Tests
# ----------------------------

def test_atom_in_sigma_diverges() -> None:
    """
    Test that an atom of σ sitting on a node of positive data makes the iteration
    diverge instead of raising.
    """
    space = Domain(DomainKind.WHOLE_SPACE, 3)
    sigma = AtomicMeasure(space, np.array([[0.25, 0.0, 0.0]]), np.array([1.0]))
    mu = AtomicMeasure(space, np.array([[0.0, 0.0, 0.0]]), np.array([1.0]))
    eval_set = EvalSet.radial(space, np.linspace(0.0, 1.0, 16))
    trace = picard_solve(space, sigma, mu, SolverConfig(q=0.5, eval_set=eval_set))
    assert trace.diverged and not trace.converged
    assert math.isnan(trace.final_residual)

# ----------------------------
# Verification Tests
# ----------------------------

def test_verify_homogeneous_solution() -> None:
    """
    Test that the homogeneous solution passes verification.
    """
    ball = unit_ball()
    trace, cfg = _homogeneous()
    sigma = radial_constant(ball, 1.0, nodes=256)
    mu = radial_constant(ball, 0.0, nodes=256)
    exps = exponents(3, 4.0, cfg.q)
    diagnostics = verify_solution(trace, ball, sigma, mu, cfg.q, exps)
    assert diagnostics.satisfied
    assert diagnostics.lower_bound_margin >= -1e-12
    assert 0.0 < diagnostics.lp_norm < math.inf
    assert 0.0 < diagnostics.sigma_norm < math.inf
    assert diagnostics.data_lp_norm == 0.0
    assert diagnostics.coefficient_lp_norm == pytest.approx(diagnostics.lp_norm)
    assert 0.0 <= diagnostics.boundary_ratio < 1.0

def test_verify_tolerance_override() -> None:
    """
    Test that a negative residual tolerance makes verification fail.
    """
    ball = unit_ball()
    trace, cfg = _homogeneous(nodes=64)
    sigma = radial_constant(ball, 1.0, nodes=64)
    mu = radial_constant(ball, 0.0, nodes=64)
    exps = exponents(3, 4.0, cfg.q)
    diagnostics = verify_solution(trace, ball, sigma, mu, cfg.q, exps,
                                  tolerances={"residual": -1.0})
    assert not diagnostics.satisfied

def test_verify_needs_convergence() -> None:
    """
    Test that unconverged traces cannot be verified or compared from above.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 1.0, nodes=32)
    mu = radial_constant(ball, 0.0, nodes=32)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball, 32), max_iter=1)
    trace = picard_solve(ball, sigma, mu, cfg)
    with pytest.raises(SolverStateError):
        verify_solution(trace, ball, sigma, mu, 0.5, exponents(3, 4.0, 0.5))
    with pytest.raises(SolverStateError):
        minimality_gap(trace, ball, sigma, mu, cfg)

# ----------------------------
# Oracle and Scaling Tests
# ----------------------------

def _shooting_centre_value(q: float) -> float:
    """
    u(0) of -(r²u')'/r² = u^q on the unit ball, u'(0) = 0, u(1) = 0, by integrating
    w(0) = 1 to its first zero R and rescaling u(r) = R^{-2/(1-q)} w(R r).
    """
    def rhs(r: float, y: np.ndarray) -> list[float]:
        return [y[1], -max(y[0], 0.0) ** q - 2.0 * y[1] / r]

    def hits_zero(_r: float, y: np.ndarray) -> float:
        return float(y[0])

    setattr(hits_zero, "terminal", True)
    setattr(hits_zero, "direction", -1)
    r0 = 1e-6
    sol = solve_ivp(rhs, (r0, 10.0), [1.0 - r0**2 / 6, -r0 / 3], events=hits_zero,
                    rtol=1e-10, atol=1e-12)
    radius = float(sol.t_events[0][0])
    return float(radius ** (-2.0 / (1.0 - q)))

def test_homogeneous_solution_matches_shooting() -> None:
    """
    Test u(0) of the Picard solution against an independent radial shooting solve.
    """
    trace, cfg = _homogeneous()
    expected = _shooting_centre_value(cfg.q)
    assert float(trace.solution.values[0]) == pytest.approx(expected, rel=1e-2)

@pytest.mark.parametrize("factor", [0.5, 2.0, 4.0])
def test_sigma_scaling_law(factor: float) -> None:
    """
    Test that σ → λσ rescales the homogeneous solution by λ^{1/(1-q)}.

    Args:
        factor (float): The factor λ.
    """
    ball = unit_ball()
    trace, cfg = _homogeneous(nodes=128)
    sigma = radial_constant(ball, factor, nodes=128)
    mu = radial_constant(ball, 0.0, nodes=128)
    scaled = picard_solve(ball, sigma, mu, cfg)
    assert scaled.converged
    expected = factor ** (1 / (1 - cfg.q)) * trace.solution.values
    assert scaled.solution.values == pytest.approx(expected, rel=1e-3, abs=1e-12)

def test_verify_torsion_lp_norm() -> None:
    """
    Test ‖u‖_{L^4(dx)} of the torsion function against its closed form.
    """
    ball = unit_ball()
    sigma = radial_constant(ball, 0.0)
    mu = radial_constant(ball, 1.0)
    cfg = SolverConfig(q=0.5, eval_set=radial_eval_set(ball, 1025))
    trace = picard_solve(ball, sigma, mu, cfg)
    diagnostics = verify_solution(trace, ball, sigma, mu, 0.5, exponents(3, 4.0, 0.5))
    # ∫ ((1 - r²)/6)^4 4πr² dr = 4π · 128/3465 / 6^4
    expected = (4 * math.pi * 128 / 3465 / 6**4) ** 0.25
    assert diagnostics.lp_norm == pytest.approx(expected, rel=1e-4)
    assert diagnostics.sigma_norm == 0.0
    assert diagnostics.coefficient_lp_norm == 0.0
    assert diagnostics.satisfied
