"""
Nonnegative Radon measures on a model domain.

This module provides three representations of a measure (weighted atoms, a piecewise 
constant density on a tensor grid, and a radial density on radii), all reduced to one 
common form: fixed quadrature nodes with node masses. Integration, scaling and 
reweighting act on the node masses only, so reweighting composes exactly with 
integration.

Dependencies:
    numpy: For node and mass arrays.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

import numpy as np
import numpy.typing as npt

from subgreen.common.enums import DomainKind, MeasureKind
from subgreen.common.exceptions import (
    ArgumentError,
    DomainMembershipError,
    EvaluationError,
    MeasureTypeError,
)
from subgreen.model.domain import Domain
from subgreen.model.grid import TensorGrid, trapezoid_weights

FloatArray = npt.NDArray[np.float64]
PointFunction = Callable[[FloatArray], FloatArray]
Integrand = Union[PointFunction, FloatArray]


class Measure(ABC):
    """
    Common interface of every measure representation.

    Subclasses expose `nodes` (quadrature nodes, shape (N, n)) and `masses` (node 
    masses, shape (N,)); everything else is derived from them.
    """

    domain: Domain

    @property
    @abstractmethod
    def kind(self) -> MeasureKind:
        """Representation kind."""

    @property
    @abstractmethod
    def nodes(self) -> FloatArray:
        """Quadrature nodes of shape (N, n)."""

    @property
    @abstractmethod
    def masses(self) -> FloatArray:
        """Node masses of shape (N,)."""

    @abstractmethod
    def _rescaled(self, factors: FloatArray) -> "Measure":
        """Same representation with node densities multiplied by `factors`."""

    @cached_property
    def support_index(self) -> npt.NDArray[np.int64]:
        return np.flatnonzero(self.masses > 0).astype(np.int64)

    @property
    def support_nodes(self) -> FloatArray:
        return self.nodes[self.support_index]

    @property
    def support_masses(self) -> FloatArray:
        return self.masses[self.support_index]

    @property
    def is_zero(self) -> bool:
        return self.support_index.size == 0

    def total_mass(self) -> float:
        """
        Total mass m(Ω).

        Returns:
            float: Sum of the node masses.
        """
        return float(np.sum(self.masses))

    def integrate(self, f: Integrand) -> float:
        """
        ∫ f dm by the measure's fixed quadrature.

        Args:
            f (Callable | FloatArray): Vectorized function of points (k, n) -> (k,), or 
                its values at all N nodes.

        Returns:
            float: The integral; +inf if f is infinite at a node of positive mass.

        Raises:
            EvaluationError: If f is NaN at a node of positive mass.
        """
        values = self._support_values(f)
        if np.any(np.isnan(values)):
            raise EvaluationError("Integrand evaluated to NaN on the support.")
        if np.any(np.isinf(values)):
            return float(np.inf)
        return float(np.sum(values * self.support_masses))

    def scale(self, factor: float) -> "Measure":
        """
        The measure λ·m.

        Args:
            factor (float): λ ≥ 0.

        Returns:
            Measure: Same representation, masses multiplied by λ.

        Raises:
            ArgumentError: If λ is negative or not finite.
        """
        if not np.isfinite(factor) or factor < 0:
            raise ArgumentError(f"Scale factor must be finite and >= 0, got {factor}.")
        return self._rescaled(np.full(self.masses.shape, float(factor)))

    def reweight(self, g: Integrand) -> "Measure":
        """
        The measure g·dm, with g sampled at the measure's own nodes.

        Args:
            g (Callable | FloatArray): Nonnegative density, as a function of points or 
                its values at all N nodes.

        Returns:
            Measure: Same representation with node densities multiplied by g.

        Raises:
            ArgumentError: If g is negative, NaN or infinite at a node of positive mass.
        """
        values = self._support_values(g)
        if np.any(~np.isfinite(values)) or np.any(values < 0):
            raise ArgumentError(
                "Reweighting density must be finite and nonnegative on the support."
            )
        factors = np.zeros(self.masses.shape)
        factors[self.support_index] = values
        return self._rescaled(factors)

    def _support_values(self, f: Integrand) -> FloatArray:
        if callable(f):
            return np.asarray(f(self.support_nodes), dtype=float).reshape(-1)
        values = np.asarray(f, dtype=float).reshape(-1)
        if values.shape != self.masses.shape:
            raise ArgumentError(
                f"Expected {self.masses.size} node values, got {values.size}."
            )
        return values[self.support_index]


@dataclass(eq=False)
class AtomicMeasure(Measure):
    """
    A finite sum of weighted Dirac masses.

    Attributes:
        domain (Domain): The domain containing every atom.
        points (FloatArray): Atom locations of shape (N, n).
        weights (FloatArray): Nonnegative weights of shape (N,).
    """

    domain: Domain
    points: FloatArray
    weights: FloatArray

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if self.weights.size == 0:
            self.points = np.zeros((0, self.domain.dim))
        else:
            self.points = self.domain.require(self.points, "Atom")
        _check_nonnegative(self.weights, "Atom weights")
        if self.points.shape[0] != self.weights.size:
            raise ArgumentError("Atom points and weights differ in length.")

    @property
    def kind(self) -> MeasureKind:
        return MeasureKind.ATOMIC

    @property
    def nodes(self) -> FloatArray:
        return self.points

    @property
    def masses(self) -> FloatArray:
        return self.weights

    def _rescaled(self, factors: FloatArray) -> "AtomicMeasure":
        return AtomicMeasure(self.domain, self.points, self.weights * factors)


@dataclass(eq=False)
class GridDensity(Measure):
    """
    A Lebesgue density, constant on each cell of a tensor grid.

    Attributes:
        domain (Domain): The domain; every cell with positive density has its centre 
            inside it.
        grid (TensorGrid): The grid.
        values (FloatArray): Density per cell, flat C-order array of shape (grid.size,).
    """

    domain: Domain
    grid: TensorGrid
    values: FloatArray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if self.values.size != self.grid.size:
            raise ArgumentError(
                f"Grid has {self.grid.size} cells, got {self.values.size} values."
            )
        if self.grid.dim != self.domain.dim:
            raise ArgumentError("Grid and domain dimensions differ.")
        _check_nonnegative(self.values, "Grid density")
        active = self.values > 0
        if np.any(active) and not np.all(self.domain.contains(self.nodes[active])):
            raise DomainMembershipError(
                "Grid density is positive on a cell centred outside the domain."
            )

    @classmethod
    def from_function(
            cls,
            domain: Domain,
            grid: TensorGrid,
            density: PointFunction
        ) -> "GridDensity":
        """
        Sample a density at the cell centres inside the domain (zero elsewhere).

        Args:
            domain (Domain): The domain.
            grid (TensorGrid): The grid.
            density (Callable): Vectorized nonnegative density.

        Returns:
            GridDensity: The sampled measure.
        """
        centers = grid.centers()
        values = np.zeros(grid.size)
        inside = domain.contains(centers)
        values[inside] = np.asarray(density(centers[inside]), dtype=float)
        return cls(domain, grid, values)

    @property
    def kind(self) -> MeasureKind:
        return MeasureKind.GRID

    @cached_property
    def nodes(self) -> FloatArray:
        return self.grid.centers()

    @property
    def masses(self) -> FloatArray:
        return self.values * self.grid.cell_volume

    def density_at(self, points: FloatArray) -> FloatArray:
        """
        Density of the cell containing each point (0 outside the grid).

        Args:
            points (FloatArray): Array of shape (m, n).

        Returns:
            FloatArray: Densities of shape (m,).
        """
        flat = self.grid.locate(points)
        out = np.zeros(flat.size)
        out[flat >= 0] = self.values[flat[flat >= 0]]
        return out

    def lebesgue_norm(self, s: float) -> float:
        """
        ‖density‖_{L^s(dx)} by the midpoint rule.

        Args:
            s (float): Exponent s > 0.

        Returns:
            float: The norm.
        """
        return float(np.sum(self.values**s) * self.grid.cell_volume) ** (1.0 / s)

    def _rescaled(self, factors: FloatArray) -> "GridDensity":
        return GridDensity(self.domain, self.grid, self.values * factors)


@dataclass(eq=False)
class RadialDensity(Measure):
    """
    A radially symmetric Lebesgue density centred at the origin.

    Nodes are placed on the first coordinate axis; node masses are the composite 
    trapezoid weights times ω_{n-1} r^{n-1} times the density.

    Attributes:
        domain (Domain): The unit ball or the whole space.
        radii (FloatArray): Strictly increasing radii, starting at 0 or above; on the 
            ball the last one may equal 1 (the sphere is Lebesgue-null).
        values (FloatArray): Density at each radius.
    """

    domain: Domain
    radii: FloatArray
    values: FloatArray

    def __post_init__(self) -> None:
        self.radii = np.asarray(self.radii, dtype=float).reshape(-1)
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if not self.domain.is_radial:
            raise MeasureTypeError(
                f"Radial densities need the unit ball or the whole space, got "
                f"{self.domain.kind.value}."
            )
        if self.radii.size != self.values.size:
            raise ArgumentError("Radii and radial values differ in length.")
        if self.radii.size and self.radii[0] < 0:
            raise ArgumentError("Radii must be nonnegative.")
        if self.domain.kind == DomainKind.UNIT_BALL and np.any(self.radii > 1.0):
            raise DomainMembershipError("Radial support leaves the unit ball.")
        _check_nonnegative(self.values, "Radial density")
        self._weights = trapezoid_weights(self.radii) * self.domain.sphere_area * (
            self.radii ** (self.domain.dim - 1)
        )

    @property
    def kind(self) -> MeasureKind:
        return MeasureKind.RADIAL

    @cached_property
    def nodes(self) -> FloatArray:
        pts = np.zeros((self.radii.size, self.domain.dim))
        pts[:, 0] = self.radii
        return pts

    @property
    def masses(self) -> FloatArray:
        return self._weights * self.values

    def lebesgue_norm(self, s: float) -> float:
        """
        ‖density‖_{L^s(dx)} by the radial trapezoid rule.

        Args:
            s (float): Exponent s > 0.

        Returns:
            float: The norm.
        """
        return float(np.sum(self._weights * self.values**s)) ** (1.0 / s)

    def _rescaled(self, factors: FloatArray) -> "RadialDensity":
        return RadialDensity(self.domain, self.radii, self.values * factors)


def total_mass(m: Measure) -> float:
    """
    Total mass of a measure (see Measure.total_mass).
    """
    return m.total_mass()

def integrate(m: Measure, f: Integrand) -> float:
    """
    ∫ f dm (see Measure.integrate).
    """
    return m.integrate(f)

def scale(m: Measure, factor: float) -> Measure:
    """
    λ·m (see Measure.scale).
    """
    return m.scale(factor)

def reweight(m: Measure, g: Integrand) -> Measure:
    """
    g·dm (see Measure.reweight).
    """
    return m.reweight(g)

def _check_nonnegative(values: FloatArray, what: str) -> None:
    if np.any(~np.isfinite(values)) or np.any(values < 0):
        raise ArgumentError(f"{what} must be finite and nonnegative.")
