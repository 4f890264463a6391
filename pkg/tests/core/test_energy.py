"""
Unit tests for energies and numerical Riesz measures in subgreen.core.energy.

This module checks E_γ against the closed form for the constant density, the Riesz
density of (Gμ)^{1-q} against its analytic Laplacian, the refinement behaviour and the
reconstruction defect of the discrete Riesz measure, and the three energy comparisons.
"""
import math

import numpy as np
import pytest

from subgreen.common.exceptions import ArgumentError
from subgreen.core.energy import (
    _riesz_density,
    energy,
    lemma31_check,
    lemma32_check,
    reconstruction_defect,
    riesz_energy_check,
    riesz_measure_numeric,
)
from subgreen.core.measures import AtomicMeasure, RadialDensity
from subgreen.model.grid import TensorGrid
from tests.common_utils.utils import radial_constant, radial_eval_set, unit_ball

TORSION_ENERGY = 4 * math.pi / 45

def _riesz_density_of_root_torsion(radii_sq: np.ndarray) -> np.ndarray:
    # -Δ ((1 - r²)/6)^{1/2} in three dimensions
    rest = 1.0 - radii_sq
    return 6**-0.5 * (3.0 * rest**-0.5 + radii_sq * rest**-1.5)

# ----------------------------
# Energy Tests
# ----------------------------

def test_energy_of_constant_density() -> None:
    """
    Test E_1[1] = ∫ (1 - |x|²)/6 dx = 4π/45 on the unit ball.
    """
    ball = unit_ball()
    assert energy(ball, radial_constant(ball, 1.0), 1.0) == pytest.approx(
        TORSION_ENERGY, rel=1e-4
    )

def test_energy_scales_homogeneously() -> None:
    """
    Test E_γ[λm] = λ^{1+γ} E_γ[m].
    """
    ball = unit_ball()
    m = radial_constant(ball, 1.0, nodes=128)
    base = energy(ball, m, 0.5)
    assert energy(ball, m.scale(4.0), 0.5) == pytest.approx(4.0**1.5 * base)

def test_energy_special_cases() -> None:
    """
    Test that atoms give +inf, the zero measure gives 0 and γ ≤ 0 is rejected.
    """
    ball = unit_ball()
    atoms = AtomicMeasure(ball, np.array([[0.1, 0.0, 0.0]]), np.array([1.0]))
    assert math.isinf(energy(ball, atoms, 1.0))
    assert energy(ball, radial_constant(ball, 0.0, nodes=16), 1.0) == 0.0
    with pytest.raises(ArgumentError):
        energy(ball, atoms, 0.0)

# ----------------------------
# Riesz Measure Tests
# ----------------------------

def test_riesz_density_matches_laplacian() -> None:
    """
    Test ω_h against -Δ(G1)^{1/2} on the cells of a grid well inside the ball.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=2048)
    grid = TensorGrid.for_domain(ball, 1 / 16, 0.5)
    result = riesz_measure_numeric(ball, mu, 0.5, grid)
    centers = grid.centers()[result.active]
    expected = _riesz_density_of_root_torsion(np.sum(centers**2, axis=1))
    values = result.measure.values[result.active]
    assert np.max(np.abs(values - expected) / expected) <= 2e-2
    assert result.clipped_mass == 0.0
    assert result.power == 0.5
    assert result.total_mass == pytest.approx(
        float(np.sum(values)) * grid.cell_volume
    )

def test_riesz_radius_restricts_active_cells() -> None:
    """
    Test that only cells within the radius carry the stencil.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=256)
    grid = TensorGrid.for_domain(ball, 1 / 8, 0.5)
    result = riesz_measure_numeric(ball, mu, 0.5, grid, radius=0.3)
    distance = np.linalg.norm(grid.centers() - grid.center, axis=1)
    assert set(result.active.tolist()) == set(np.flatnonzero(distance <= 0.3).tolist())
    assert np.all(result.measure.values[distance > 0.3] == 0.0)
    assert result.target.shape == result.active.shape

def test_riesz_refinement() -> None:
    """
    Test that the energy of ω_h restricted to a ball changes little under refinement.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=1024)
    coarse, fine = (
        lemma31_check(ball, mu, 1 / 3, 0.5, TensorGrid.for_domain(ball, h, 0.5),
                      radius=0.4)
        for h in (1 / 16, 1 / 32)
    )
    assert fine.lhs == pytest.approx(coarse.lhs, rel=1e-1)
    assert fine.rhs == pytest.approx(coarse.rhs)

def test_reconstruction_defect() -> None:
    """
    Test that Gω_h reproduces w up to a constant on the inner cells.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=1024)
    grid = TensorGrid.for_domain(ball, 1 / 16, 0.5)
    result = riesz_measure_numeric(ball, mu, 0.5, grid, radius=0.4)
    defect = reconstruction_defect(ball, result)
    assert 0.0 <= defect < 5e-2

def test_reconstruction_defect_halves_under_refinement() -> None:
    """
    Test that the reconstruction defect at h = 1/32 is at most half of that at
    h = 1/16.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=1024)
    coarse, fine = (
        reconstruction_defect(
            ball,
            riesz_measure_numeric(ball, mu, 0.5, TensorGrid.for_domain(ball, h, 0.5),
                                  radius=0.4),
        )
        for h in (1 / 16, 1 / 32)
    )
    assert 0.0 < coarse
    assert fine <= 0.5 * coarse

def test_riesz_rejections() -> None:
    """
    Test that q outside (0, 1), stencils leaving the domain and atoms on the grid are
    rejected.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=64)
    small = TensorGrid.for_domain(ball, 1 / 8, 0.25)
    with pytest.raises(ArgumentError):
        riesz_measure_numeric(ball, mu, 1.0, small)
    with pytest.raises(ArgumentError):
        riesz_measure_numeric(ball, mu, 0.5, TensorGrid.for_domain(ball, 1 / 8, 1.0))
    atom = AtomicMeasure(ball, np.array([[0.0625, 0.0625, 0.0625]]), np.array([1.0]))
    with pytest.raises(ArgumentError):
        riesz_measure_numeric(ball, atom, 0.5, small)
    with pytest.raises(ArgumentError):
        riesz_measure_numeric(ball, mu, 0.5, small, radius=0.01)

# ----------------------------
# Energy Comparison Tests
# ----------------------------

def test_lemma31_check_finite() -> None:
    """
    Test that a bounded density gives finite energies on both sides.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=256)
    grid = TensorGrid.for_domain(ball, 1 / 8, 0.5)
    report = lemma31_check(ball, mu, 1 / 3, 0.5, grid)
    assert report.gamma == pytest.approx(1 / 3)
    assert 0.0 < report.lhs < math.inf
    assert 0.0 < report.rhs < math.inf
    assert report.ratio == pytest.approx(report.lhs / report.rhs)
    assert report.clipped_fraction == 0.0
    assert report.riesz_mass > 0.0
    assert not report.degenerate

@pytest.mark.parametrize("profile", ["constant", "rising", "falling"])
@pytest.mark.parametrize("q", [0.25, 0.5, 0.75])
def test_clipped_fraction_on_smooth_densities(profile: str, q: float) -> None:
    """
    Test that clipping removes at most 5% of the Riesz mass for smooth radial densities
    at h = 1/16.

    Args:
        profile (str): Shape of the density in r.
        q (float): Exponent q.
    """
    ball = unit_ball()
    radii = np.linspace(0.0, 1.0, 1024)
    values = {
        "constant": np.ones_like(radii),
        "rising": 1.0 + radii**2,
        "falling": 2.0 - radii**2,
    }[profile]
    mu = RadialDensity(ball, radii, values)
    report = lemma31_check(ball, mu, 1 / 3, q, TensorGrid.for_domain(ball, 1 / 16, 0.5))
    assert report.riesz_mass > 0.0
    assert report.clipped_fraction <= 0.05

def test_lemma32_check() -> None:
    """
    Test ‖G1‖_{L^6(dx)} against E_1[1]^{1/2} on the unit ball.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=1025)
    report = lemma32_check(ball, mu, 1.0, radial_eval_set(ball, 1025))
    assert report.rhs == pytest.approx(TORSION_ENERGY**0.5, rel=1e-4)
    # ∫ ((1 - r²)/6)^6 4πr² dr = 4π · 1024/45045 / 6^6
    expected_lhs = (4 * math.pi * 1024 / 45045 / 6**6) ** (1 / 6)
    assert report.lhs == pytest.approx(expected_lhs, rel=1e-4)
    assert report.riesz_mass == 0.0

def test_lemma32_check_zero_measure() -> None:
    """
    Test that μ = 0 is degenerate with both sides and the ratio equal to 0.
    """
    ball = unit_ball()
    zero = radial_constant(ball, 0.0, nodes=32)
    report = lemma32_check(ball, zero, 1.0, radial_eval_set(ball, 32))
    assert report.degenerate
    assert report.lhs == report.rhs == report.ratio == 0.0

def test_riesz_energy_check() -> None:
    """
    Test the Dirichlet energy comparison with γ = 1 - q.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=256)
    report = riesz_energy_check(ball, mu, 0.25, TensorGrid.for_domain(ball, 1 / 8, 0.5))
    assert report.gamma == 0.75
    assert 0.0 < report.lhs < math.inf
    assert 0.0 < report.ratio < math.inf

# ----------------------------
# Scaling and Consistency Tests
# ----------------------------

@pytest.mark.parametrize("factor", [0.5, 2.0])
def test_energy_ratios_invariant_under_scaling(factor: float) -> None:
    """
    Test that the ratios of both energy comparisons do not change under μ → λμ.

    Args:
        factor (float): The factor λ.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=256)
    grid = TensorGrid.for_domain(ball, 1 / 8, 0.5)
    eval_set = radial_eval_set(ball, 256)
    base31 = lemma31_check(ball, mu, 1 / 3, 0.5, grid)
    scaled31 = lemma31_check(ball, mu.scale(factor), 1 / 3, 0.5, grid)
    assert scaled31.ratio == pytest.approx(base31.ratio, rel=1e-6)
    base32 = lemma32_check(ball, mu, 1 / 3, eval_set)
    scaled32 = lemma32_check(ball, mu.scale(factor), 1 / 3, eval_set)
    assert scaled32.ratio == pytest.approx(base32.ratio, rel=1e-6)

def test_laplacian_of_potential_recovers_density() -> None:
    """
    Test that the discrete Laplacian of Gμ itself gives back the density 1.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=2048)
    grid = TensorGrid.for_domain(ball, 1 / 16, 0.5)
    result = _riesz_density(ball, mu, 1.0, grid)
    values = result.measure.values[result.active]
    assert np.max(np.abs(values - 1.0)) <= 1e-2
    assert result.clipped_mass == 0.0

def test_riesz_mass_refinement() -> None:
    """
    Test that the interior Riesz mass changes by at most 10% from h = 1/16 to 1/32.
    """
    ball = unit_ball()
    mu = radial_constant(ball, 1.0, nodes=1024)
    masses = [
        riesz_measure_numeric(ball, mu, 0.5, TensorGrid.for_domain(ball, h, 0.5),
                              radius=0.4).total_mass
        for h in (1 / 16, 1 / 32)
    ]
    assert abs(masses[0] - masses[1]) <= 0.1 * masses[1]
