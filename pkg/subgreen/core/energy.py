"""
Generalized Green energies and numerical Riesz measures.

This module computes E_γ[m] = ∫ (Gm)^γ dm, the Riesz measure ω_h of w = (Gμ)^{1-q}
obtained by applying the centred discrete Laplacian to w on a tensor grid, and the
energy comparisons built on them: E_{(γ+q)/(1-q)}[ω_h] against E_γ[μ],
‖Gμ‖_{L^p(dx)} against E_γ[μ]^{1/(γ+1)} with p = n(1+γ)/(n-2), and E_1[ω_h] against
E_{1-q}[μ].

Dependencies:
    numpy: For stencil indexing and energy sums.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from subgreen.common.exceptions import ArgumentError
from subgreen.core.measures import GridDensity, Measure
from subgreen.core.potential import GreenOperator, lp_norm_dx, potential_field
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet
from subgreen.model.grid import TensorGrid

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


@dataclass
class EnergyReport:
    """
    Result of an energy comparison lhs ≲ rhs.

    Attributes:
        gamma (float): Energy exponent of the data side.
        lhs (float): Left-hand side.
        rhs (float): Right-hand side.
        ratio (float): lhs/rhs (0 when both vanish, +inf when only rhs does).
        clipped_mass (float): Negative Riesz mass removed by clipping (0 when no
            Riesz measure is involved).
        riesz_mass (float): Total mass of the clipped Riesz measure (0 when none).
        degenerate (bool): Whether the data measure is zero.
    """

    gamma: float
    lhs: float
    rhs: float
    ratio: float
    clipped_mass: float = 0.0
    riesz_mass: float = 0.0
    degenerate: bool = False

    @property
    def clipped_fraction(self) -> float:
        total = self.riesz_mass + self.clipped_mass
        return self.clipped_mass / total if total > 0 else 0.0


@dataclass
class RieszResult:
    """
    A numerical Riesz measure together with what produced it.

    Attributes:
        measure (GridDensity): ω_h, clipped to be nonnegative.
        clipped_mass (float): Σ |negative part| · cell volume.
        active (IntArray): Flat indices of the cells carrying the stencil.
        target (FloatArray): w = (Gμ)^power at the active cell centres.
        radius (float | None): Radius of the active region around the grid centre.
        power (float): The power applied to Gμ.
    """

    measure: GridDensity
    clipped_mass: float
    active: IntArray
    target: FloatArray
    radius: Optional[float]
    power: float

    @property
    def total_mass(self) -> float:
        return self.measure.total_mass()


def energy(domain: Domain, m: Measure, gamma: float) -> float:
    """
    Generalized Green energy E_γ[m] = ∫ (Gm)^γ dm.

    Args:
        domain (Domain): The domain.
        m (Measure): The measure.
        gamma (float): Exponent γ > 0.

    Returns:
        float: The energy; +inf propagates (e.g. from atoms).

    Raises:
        ArgumentError: If γ ≤ 0.
    """
    if not gamma > 0:
        raise ArgumentError(f"Energy exponent must be positive, got {gamma}.")
    if m.is_zero:
        return 0.0
    values = GreenOperator(domain, m, m.support_nodes).potential(m)
    if np.any(np.isinf(values)):
        return math.inf
    return float(np.sum(m.support_masses * values**gamma))

def riesz_measure_numeric(
        domain: Domain,
        mu: Measure,
        q: float,
        grid: TensorGrid,
        radius: Optional[float] = None
    ) -> RieszResult:
    """
    Riesz measure of w = (Gμ)^{1-q} by the centred (2n+1)-point Laplacian.

    The stencil is applied at the active cells (all cells of the grid, or those whose
    centre lies within `radius` of the grid centre); negative values are clipped to 0
    and their mass recorded.

    Args:
        domain (Domain): The domain.
        mu (Measure): The data measure μ.
        q (float): Exponent in (0, 1).
        grid (TensorGrid): Grid of the Riesz density.
        radius (float, optional): Radius of the active region.

    Returns:
        RieszResult: ω_h and its diagnostics.

    Raises:
        ArgumentError: If q is outside (0, 1), a stencil point leaves the domain, or
            Gμ is infinite at a stencil point.
    """
    if not 0 < q < 1:
        raise ArgumentError(f"Exponent q must lie in (0, 1), got {q}.")
    return _riesz_density(domain, mu, 1.0 - q, grid, radius)

def reconstruction_defect(domain: Domain, result: RieszResult) -> float:
    """
    Oscillation of Gω_h - w over the inner half of the active region, relative to
    max w there.

    Mass of the true Riesz measure outside the active region adds a harmonic term to
    Gω_h - w, so the defect measures the oscillation rather than the size of the
    difference.

    Args:
        domain (Domain): The domain.
        result (RieszResult): Output of riesz_measure_numeric.

    Returns:
        float: max |d - mean d| / max w with d = Gω_h - w on the inner cells.
    """
    grid = result.measure.grid
    centers = grid.centers()[result.active]
    distance = np.linalg.norm(centers - grid.center, axis=1)
    reach = result.radius if result.radius is not None else float(np.max(distance))
    inner = distance <= reach / 2
    if not np.any(inner):
        return 0.0
    reconstructed = GreenOperator(
        domain, result.measure, centers[inner]
    ).potential(result.measure)
    target = result.target[inner]
    gap = reconstructed - target
    scale = float(np.max(target))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(gap - np.mean(gap)))) / scale

def lemma31_check(
        domain: Domain,
        mu: Measure,
        gamma: float,
        q: float,
        grid: TensorGrid,
        radius: Optional[float] = None
    ) -> EnergyReport:
    """
    Compare E_{(γ+q)/(1-q)}[ω_h] with E_γ[μ] for the Riesz measure ω_h of
    (Gμ)^{1-q}.

    Args:
        domain (Domain): The domain.
        mu (Measure): The data measure μ.
        gamma (float): Exponent γ > 0.
        q (float): Exponent in (0, 1).
        grid (TensorGrid): Grid of the Riesz density.
        radius (float, optional): Radius of the active region.

    Returns:
        EnergyReport: The comparison.
    """
    result = riesz_measure_numeric(domain, mu, q, grid, radius)
    lhs = energy(domain, result.measure, (gamma + q) / (1 - q))
    rhs = energy(domain, mu, gamma)
    return _report(gamma, lhs, rhs, result, mu.is_zero)

def lemma32_check(
        domain: Domain,
        mu: Measure,
        gamma: float,
        eval_set: EvalSet
    ) -> EnergyReport:
    """
    Compare ‖Gμ‖_{L^p(dx)}, p = n(1+γ)/(n-2), with E_γ[μ]^{1/(γ+1)}.

    Args:
        domain (Domain): The domain.
        mu (Measure): The data measure μ.
        gamma (float): Exponent γ > 0.
        eval_set (EvalSet): Quadrature-complete set for the dx norm.

    Returns:
        EnergyReport: The comparison.
    """
    p = domain.dim * (1 + gamma) / (domain.dim - 2)
    lhs = lp_norm_dx(potential_field(domain, mu, eval_set), p)
    rhs = energy(domain, mu, gamma) ** (1.0 / (gamma + 1))
    return _report(gamma, lhs, rhs, None, mu.is_zero)

def riesz_energy_check(
        domain: Domain,
        mu: Measure,
        q: float,
        grid: TensorGrid,
        radius: Optional[float] = None
    ) -> EnergyReport:
    """
    Compare E_1[ω_h] with E_{1-q}[μ]; finite Dirichlet energy of the Riesz measure of
    (Gμ)^{1-q} goes together with finite E_{1-q}[μ].

    Args:
        domain (Domain): The domain.
        mu (Measure): The data measure μ.
        q (float): Exponent in (0, 1).
        grid (TensorGrid): Grid of the Riesz density.
        radius (float, optional): Radius of the active region.

    Returns:
        EnergyReport: The comparison, with gamma = 1 - q.
    """
    result = riesz_measure_numeric(domain, mu, q, grid, radius)
    lhs = energy(domain, result.measure, 1.0)
    rhs = energy(domain, mu, 1.0 - q)
    return _report(1.0 - q, lhs, rhs, result, mu.is_zero)

def _riesz_density(
        domain: Domain,
        mu: Measure,
        power: float,
        grid: TensorGrid,
        radius: Optional[float] = None
    ) -> RieszResult:
    """
    -Δ_h applied to (Gμ)^power at the active cells of the grid.
    """
    centers = grid.centers()
    active = np.arange(grid.size, dtype=np.int64)
    if radius is not None:
        active = active[np.linalg.norm(centers - grid.center, axis=1) <= radius]
    if active.size == 0:
        raise ArgumentError("Riesz grid has no active cells.")

    dim = grid.dim
    big = grid.expanded(1)
    offsets = np.zeros((2 * dim + 1, dim), dtype=np.int64)
    for axis in range(dim):
        offsets[1 + 2 * axis, axis] = 1
        offsets[2 + 2 * axis, axis] = -1
    cells = np.array(np.unravel_index(active, grid.counts)).T + 1
    stencil = (cells[:, None, :] + offsets[None, :, :]).reshape(-1, dim)
    flat = np.ravel_multi_index(tuple(stencil.T), big.counts)
    needed, inverse = np.unique(flat, return_inverse=True)
    points = big.centers()[needed]
    if not np.all(domain.contains(points)):
        raise ArgumentError(
            "Riesz grid touches the domain boundary: a stencil point lies outside."
        )

    potential = GreenOperator(domain, mu, points).potential(mu)
    if np.any(np.isinf(potential)):
        raise ArgumentError("Gμ is infinite on the Riesz grid (atom inside the grid).")
    w = (potential**power)[inverse].reshape(active.size, 2 * dim + 1)

    laplacian = np.zeros(active.size)
    for axis, h in enumerate(grid.spacing):
        laplacian += (2.0 * w[:, 0] - w[:, 1 + 2 * axis] - w[:, 2 + 2 * axis]) / h**2
    negative = np.minimum(laplacian, 0.0)
    values = np.zeros(grid.size)
    values[active] = np.maximum(laplacian, 0.0)
    return RieszResult(
        measure=GridDensity(domain, grid, values),
        clipped_mass=float(-np.sum(negative) * grid.cell_volume),
        active=active,
        target=w[:, 0].copy(),
        radius=radius,
        power=power,
    )

def _report(
        gamma: float,
        lhs: float,
        rhs: float,
        result: Optional[RieszResult],
        degenerate: bool
    ) -> EnergyReport:
    if rhs == 0:
        ratio = 0.0 if lhs == 0 else math.inf
    elif math.isinf(rhs):
        ratio = math.inf if math.isinf(lhs) else 0.0
    else:
        ratio = lhs / rhs
    return EnergyReport(
        gamma=gamma,
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        clipped_mass=result.clipped_mass if result is not None else 0.0,
        riesz_mass=result.total_mass if result is not None else 0.0,
        degenerate=degenerate,
    )
