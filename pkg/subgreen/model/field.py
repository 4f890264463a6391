"""
Evaluation sets and scalar fields on a domain.

An EvalSet fixes where a field is known and, for grid and radial sets, the Lebesgue 
quadrature weights attached to those points. A Field couples an EvalSet with 
nonnegative extended-real values and the rule used to evaluate it elsewhere (nearest 
neighbour or linear interpolation in |x|).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.spatial import cKDTree

from subgreen.common.enums import EvalRule, EvalSetKind
from subgreen.common.exceptions import ArgumentError, CapabilityError, EvaluationError
from subgreen.model.domain import Domain
from subgreen.model.grid import TensorGrid, trapezoid_weights

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


@dataclass(eq=False)
class EvalSet:
    """
    A set of evaluation points, optionally carrying Lebesgue quadrature weights.

    Attributes:
        kind (EvalSetKind): Grid, radial or free points.
        points (FloatArray): Points of shape (m, n).
        weights (FloatArray | None): dx-quadrature weights of shape (m,), None when 
            the set is not quadrature complete.
        radii (FloatArray | None): Radial nodes for radial sets.
        grid (TensorGrid | None): Underlying grid for grid sets.
        cells (IntArray | None): Flat grid indices of the active cells.
    """

    kind: EvalSetKind
    points: FloatArray
    weights: Optional[FloatArray] = None
    radii: Optional[FloatArray] = None
    grid: Optional[TensorGrid] = None
    cells: Optional[IntArray] = None

    @classmethod
    def from_grid(
            cls,
            domain: Domain,
            grid: TensorGrid,
            radius: Optional[float] = None
        ) -> "EvalSet":
        """
        Active cell centres of a grid: those inside the domain (and within `radius` of 
        the origin when given).

        Args:
            domain (Domain): Domain the points must lie in.
            grid (TensorGrid): The grid.
            radius (float, optional): Extra radial restriction of the centres.

        Returns:
            EvalSet: A quadrature-complete grid evaluation set.
        """
        centers = grid.centers()
        mask = domain.contains(centers)
        if radius is not None:
            mask &= np.linalg.norm(centers, axis=1) <= radius
        cells = np.flatnonzero(mask).astype(np.int64)
        return cls(
            kind=EvalSetKind.GRID,
            points=centers[cells],
            weights=np.full(cells.size, grid.cell_volume),
            grid=grid,
            cells=cells,
        )

    @classmethod
    def radial(cls, domain: Domain, radii: FloatArray) -> "EvalSet":
        """
        Radial nodes placed on the first coordinate axis.

        Args:
            domain (Domain): A domain admitting radial fields (ball or whole space).
            radii (FloatArray): Strictly increasing nonnegative radii.

        Returns:
            EvalSet: A quadrature-complete radial evaluation set.

        Raises:
            ArgumentError: If the domain is not radial or radii are negative.
        """
        r = np.asarray(radii, dtype=float)
        if not domain.is_radial:
            raise ArgumentError(
                f"Radial evaluation sets need a radial domain, got {domain.kind.value}."
            )
        if r.size and r[0] < 0:
            raise ArgumentError("Radial nodes must be nonnegative.")
        points = np.zeros((r.size, domain.dim))
        points[:, 0] = r
        domain.require(points, "Radial node", closed=True)
        weights = trapezoid_weights(r) * domain.sphere_area * r ** (domain.dim - 1)
        return cls(kind=EvalSetKind.RADIAL, points=points, weights=weights, radii=r)

    @classmethod
    def from_points(cls, domain: Domain, points: FloatArray) -> "EvalSet":
        """
        A free point cloud without quadrature weights.

        Args:
            domain (Domain): Domain the points must lie in.
            points (FloatArray): Array of shape (m, n).

        Returns:
            EvalSet: A point evaluation set.
        """
        return cls(kind=EvalSetKind.POINTS, points=domain.require(points))

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def default_rule(self) -> EvalRule:
        return (
            EvalRule.RADIAL_LINEAR if self.kind == EvalSetKind.RADIAL
            else EvalRule.NEAREST
        )

    def quadrature_weights(self) -> FloatArray:
        """
        Lebesgue quadrature weights of the set.

        Returns:
            FloatArray: Weights of shape (m,).

        Raises:
            CapabilityError: If the set is not quadrature complete.
        """
        if self.weights is None:
            raise CapabilityError(
                f"Evaluation set of kind '{self.kind.value}' carries no dx quadrature."
            )
        return self.weights


@dataclass(eq=False)
class Field:
    """
    A nonnegative extended-real function on a domain, known on an evaluation set.

    Attributes:
        domain (Domain): The domain.
        eval_set (EvalSet): Where values are known.
        values (FloatArray): Values of shape (m,), +inf allowed.
        rule (EvalRule): Evaluation rule away from the evaluation set.
    """

    domain: Domain
    eval_set: EvalSet
    values: FloatArray
    rule: EvalRule = field(default=EvalRule.NEAREST)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.eval_set.size,):
            raise ArgumentError(
                f"Field has {self.values.shape} values for "
                f"{self.eval_set.size} evaluation points."
            )
        if np.any(np.isnan(self.values)):
            raise EvaluationError("Field values contain NaN.")
        if np.any(self.values < 0):
            raise ArgumentError("Field values must be nonnegative.")
        if self.rule == EvalRule.RADIAL_LINEAR and self.eval_set.radii is None:
            raise CapabilityError("Radial-linear rule needs a radial evaluation set.")

    @cached_property
    def _tree(self) -> cKDTree:
        return cKDTree(self.eval_set.points)

    def at(self, points: FloatArray) -> FloatArray:
        """
        Evaluate the field at arbitrary points with its evaluation rule.

        Args:
            points (FloatArray): Array of shape (k, n).

        Returns:
            FloatArray: Values of shape (k,).
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.rule == EvalRule.RADIAL_LINEAR:
            assert self.eval_set.radii is not None
            radii = self.eval_set.radii
            r = np.linalg.norm(pts, axis=1)
            if np.any(r > radii[-1] * (1 + 1e-12)):
                raise CapabilityError(
                    "Radial-linear rule cannot reach points beyond the last radial "
                    f"node {radii[-1]}."
                )
            return np.asarray(np.interp(r, radii, self.values), dtype=float)
        _, idx = self._tree.query(pts)
        return self.values[np.asarray(idx, dtype=np.int64)]

    def with_values(self, values: FloatArray) -> "Field":
        """
        A field on the same evaluation set with new values.

        Args:
            values (FloatArray): New values of shape (m,).

        Returns:
            Field: The new field.
        """
        return Field(self.domain, self.eval_set, values, self.rule)

    @property
    def sup(self) -> float:
        return float(np.max(self.values)) if self.values.size else 0.0
