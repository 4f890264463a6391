"""
Model domains Ω ⊂ ℝⁿ (n ≥ 3) with an explicit Green function of -Δ.

This module defines the Domain dataclass with membership tests and the geometric 
helpers (distance to the boundary, unit-sphere constants) used by the kernels and the 
quadrature rules.
"""

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.special import gamma as gamma_fn

from subgreen.common.enums import DomainKind
from subgreen.common.exceptions import DomainError, DomainMembershipError

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Domain:
    """
    A model domain in ℝⁿ.

    Attributes:
        kind (DomainKind): Whole space, unit ball {|x| < 1} or half-space {xₙ > 0}.
        dim (int): Space dimension n, at least 3.

    Raises:
        DomainError: If dim < 3.
    """

    kind: DomainKind
    dim: int

    def __post_init__(self) -> None:
        if self.dim < 3:
            raise DomainError(
                f"Domain dimension must be at least 3, got {self.dim}."
            )

    @property
    def green_constant(self) -> float:
        """
        Normalization c_n = Γ(n/2 - 1) / (4 π^{n/2}) of the fundamental solution.

        Returns:
            float: c_n, so that -Δ(c_n |x|^{2-n}) = δ₀.
        """
        n = self.dim
        return float(gamma_fn(n / 2 - 1) / (4 * math.pi ** (n / 2)))

    @property
    def sphere_area(self) -> float:
        """
        Surface area ω_{n-1} = 2 π^{n/2} / Γ(n/2) of the unit sphere.

        Returns:
            float: ω_{n-1}.
        """
        n = self.dim
        return float(2 * math.pi ** (n / 2) / gamma_fn(n / 2))

    @property
    def is_radial(self) -> bool:
        """
        Whether radial densities centred at the origin make sense on this domain.

        Returns:
            bool: True for the whole space and the unit ball.
        """
        return self.kind in (DomainKind.WHOLE_SPACE, DomainKind.UNIT_BALL)

    def contains(
            self,
            points: FloatArray,
            closed: bool = False
        ) -> npt.NDArray[np.bool_]:
        """
        Membership test for an array of points.

        Args:
            points (FloatArray): Array of shape (m, n) or (n,).
            closed (bool): Test against the closure of the domain instead.

        Returns:
            npt.NDArray[np.bool_]: Boolean mask of shape (m,) (or a 0-d array).
        """
        pts = np.asarray(points, dtype=float)
        finite = np.all(np.isfinite(pts), axis=-1)
        if self.kind == DomainKind.UNIT_BALL:
            sq = np.sum(pts * pts, axis=-1)
            return finite & ((sq <= 1.0) if closed else (sq < 1.0))
        if self.kind == DomainKind.HALF_SPACE:
            last = pts[..., -1]
            return finite & ((last >= 0.0) if closed else (last > 0.0))
        return finite

    def require(
            self,
            points: FloatArray,
            what: str = "Point",
            closed: bool = False
        ) -> FloatArray:
        """
        Validate that points have the domain's dimension and lie inside it.

        Args:
            points (FloatArray): Array of shape (m, n) or (n,).
            what (str): Name used in error messages.
            closed (bool): Accept points of the finite boundary (where every Green
                potential vanishes).

        Returns:
            FloatArray: The points as a float array of shape (m, n).

        Raises:
            DomainMembershipError: If a point has the wrong dimension or lies outside.
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[-1] != self.dim:
            raise DomainMembershipError(
                f"{what} has dimension {pts.shape[-1]}, domain has {self.dim}."
            )
        inside = self.contains(pts, closed=closed)
        if not np.all(inside):
            bad = pts[~inside][0]
            raise DomainMembershipError(
                f"{what} {bad.tolist()} lies outside the {self.kind.value} domain."
            )
        return pts

    def boundary_distance(self, points: FloatArray) -> FloatArray:
        """
        Distance of points to the finite boundary (infinite for the whole space).

        Args:
            points (FloatArray): Array of shape (m, n).

        Returns:
            FloatArray: Distances of shape (m,).
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.kind == DomainKind.UNIT_BALL:
            return 1.0 - np.linalg.norm(pts, axis=-1)
        if self.kind == DomainKind.HALF_SPACE:
            return pts[:, -1].copy()
        return np.full(pts.shape[0], np.inf)
