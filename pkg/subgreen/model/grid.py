"""
Tensor grids and one-dimensional quadrature weights.

This module provides the TensorGrid dataclass (cells of a uniform tensor grid with 
their centres, volumes and point location) and the composite trapezoid weights used 
for radial quadrature. Both are fixed at construction so that every quadrature in the 
library reuses the same nodes.
"""

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from subgreen.common.enums import DomainKind
from subgreen.common.exceptions import ArgumentError
from subgreen.model.domain import Domain

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


@dataclass(frozen=True)
class TensorGrid:
    """
    A uniform tensor grid of cells.

    Attributes:
        origin (tuple[float, ...]): Lower corner of the grid.
        spacing (tuple[float, ...]): Cell width per axis.
        counts (tuple[int, ...]): Number of cells per axis.

    Raises:
        ArgumentError: If the three tuples disagree in length, or a spacing or count 
            is not positive.
    """

    origin: tuple[float, ...]
    spacing: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (len(self.origin) == len(self.spacing) == len(self.counts)):
            raise ArgumentError("Grid origin, spacing and counts differ in length.")
        if any(h <= 0 for h in self.spacing) or any(c < 1 for c in self.counts):
            raise ArgumentError("Grid spacing and counts must be positive.")

    @classmethod
    def for_domain(cls, domain: Domain, spacing: float, extent: float) -> "TensorGrid":
        """
        Build the grid of cells of width `spacing` covering the box of half-width 
        `extent` around the origin; for the half-space the last axis covers 
        (0, 2·extent] instead.

        Args:
            domain (Domain): Target domain, fixes the dimension and the box layout.
            spacing (float): Cell width h.
            extent (float): Half-width of the box.

        Returns:
            TensorGrid: The grid, symmetric about the origin on centred axes.
        """
        if spacing <= 0 or extent <= 0:
            raise ArgumentError("Grid spacing and extent must be positive.")
        count = max(1, math.ceil(2 * extent / spacing - 1e-9))
        origin = [-count * spacing / 2] * domain.dim
        if domain.kind == DomainKind.HALF_SPACE:
            origin[-1] = 0.0
        return cls(
            origin=tuple(origin),
            spacing=(spacing,) * domain.dim,
            counts=(count,) * domain.dim,
        )

    @property
    def dim(self) -> int:
        return len(self.counts)

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def center(self) -> FloatArray:
        half = np.asarray(self.counts) * np.asarray(self.spacing) / 2
        return np.asarray(self.origin) + half

    def centers(self) -> FloatArray:
        """
        Cell centres in C (row-major) order of the flat cell index.

        Returns:
            FloatArray: Array of shape (size, dim).
        """
        idx = np.indices(self.counts).reshape(self.dim, -1).T
        return np.asarray(self.origin) + (idx + 0.5) * np.asarray(self.spacing)

    def locate(self, points: FloatArray) -> IntArray:
        """
        Flat index of the cell containing each point, -1 when outside the grid.

        Args:
            points (FloatArray): Array of shape (m, dim).

        Returns:
            IntArray: Flat indices of shape (m,).
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        idx = np.floor(
            (pts - np.asarray(self.origin)) / np.asarray(self.spacing)
        ).astype(np.int64)
        inside = np.all((idx >= 0) & (idx < np.asarray(self.counts)), axis=1)
        flat = np.full(pts.shape[0], -1, dtype=np.int64)
        if np.any(inside):
            flat[inside] = np.ravel_multi_index(
                tuple(idx[inside].T), self.counts
            )
        return flat

    def expanded(self, cells: int = 1) -> "TensorGrid":
        """
        The same grid padded by `cells` cells on every side.

        Args:
            cells (int): Collar width in cells.

        Returns:
            TensorGrid: The padded grid.
        """
        return TensorGrid(
            origin=tuple(
                o - cells * h for o, h in zip(self.origin, self.spacing, strict=True)
            ),
            spacing=self.spacing,
            counts=tuple(c + 2 * cells for c in self.counts),
        )


def trapezoid_weights(nodes: FloatArray) -> FloatArray:
    """
    Composite trapezoid weights for increasing nodes.

    Args:
        nodes (FloatArray): Strictly increasing abscissae of shape (k,).

    Returns:
        FloatArray: Weights w with Σ w_i f(x_i) ≈ ∫ f over [x_0, x_{k-1}].

    Raises:
        ArgumentError: If the nodes are not strictly increasing.
    """
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size < 2 or np.any(np.diff(x) <= 0):
        raise ArgumentError("Radial nodes must be strictly increasing (at least 2).")
    gaps = np.diff(x)
    weights = np.zeros_like(x)
    weights[:-1] += gaps / 2
    weights[1:] += gaps / 2
    return weights
