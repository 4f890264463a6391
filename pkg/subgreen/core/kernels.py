"""
Green functions of -Δ on the model domains.

This module evaluates the positive Green function G(x, y) on the whole space, the unit 
ball and the half-space, pointwise and as dense target-by-source blocks, together with 
the spherical mean of G used by radial measures and the exact self-cell value used by 
grid quadrature.

Dependencies:
    numpy: For vectorized kernel blocks (the x·y products go through one matmul).
"""

import math

import numpy as np
import numpy.typing as npt

from subgreen.common.enums import DomainKind
from subgreen.model.domain import Domain

FloatArray = npt.NDArray[np.float64]


def green_kernel(domain: Domain, x: FloatArray, y: FloatArray) -> float:
    """
    Green function G(x, y) of -Δ on the domain.

    Whole space: c_n |x-y|^{2-n}. Unit ball: c_n(|x-y|^{2-n} - (|x| |y - x*|)^{2-n}) 
    with x* = x/|x|², where |x|²|y - x*|² = |x|²|y|² - 2x·y + 1 (equal to 1 at x = 0, 
    which is the centre formula c_n(|y|^{2-n} - 1)). Half-space: c_n(|x-y|^{2-n} - 
    |x-ȳ|^{2-n}) with ȳ the reflection of y.

    Args:
        domain (Domain): The domain.
        x (FloatArray): First point, shape (n,).
        y (FloatArray): Second point, shape (n,).

    Returns:
        float: G(x, y) in (0, +inf]; +inf on the diagonal.

    Raises:
        DomainMembershipError: If x or y lies outside the domain.
    """
    xp = domain.require(x, "Point x")[0]
    yp = domain.require(y, "Point y")[0]
    r = float(np.linalg.norm(xp - yp))
    if r == 0.0:
        return math.inf
    expo = 2 - domain.dim
    value = r ** expo
    if domain.kind == DomainKind.UNIT_BALL:
        image_sq = float(xp @ xp) * float(yp @ yp) - 2.0 * float(xp @ yp) + 1.0
        value -= image_sq ** (expo / 2)
    elif domain.kind == DomainKind.HALF_SPACE:
        reflected = yp.copy()
        reflected[-1] = -reflected[-1]
        value -= float(np.linalg.norm(xp - reflected)) ** expo
    return max(domain.green_constant * value, 0.0)

def green_block(
        domain: Domain,
        targets: FloatArray,
        sources: FloatArray
    ) -> FloatArray:
    """
    Dense block of kernel values G(targets_i, sources_j).

    Coincident points give +inf. Membership is not re-checked here; callers validate 
    their point sets once.

    Args:
        domain (Domain): The domain.
        targets (FloatArray): Array of shape (m, n).
        sources (FloatArray): Array of shape (k, n).

    Returns:
        FloatArray: Kernel values of shape (m, k).
    """
    xx = np.einsum("ij,ij->i", targets, targets)
    yy = np.einsum("ij,ij->i", sources, sources)
    dots = targets @ sources.T
    r2 = np.maximum(xx[:, None] + yy[None, :] - 2.0 * dots, 0.0)
    with np.errstate(divide="ignore"):
        block = _radial_power(r2, domain.dim)
        if domain.kind == DomainKind.UNIT_BALL:
            image_sq = xx[:, None] * yy[None, :] - 2.0 * dots + 1.0
            block -= _radial_power(image_sq, domain.dim)
        elif domain.kind == DomainKind.HALF_SPACE:
            image_sq = r2 + 4.0 * np.outer(targets[:, -1], sources[:, -1])
            block -= _radial_power(image_sq, domain.dim)
    block *= domain.green_constant
    return np.maximum(block, 0.0)

def image_pairs(
        domain: Domain,
        targets: FloatArray,
        sources: FloatArray
    ) -> FloatArray:
    """
    The regular (image) part c_n |x-y|^{2-n} - G(x, y) for paired points.

    Args:
        domain (Domain): The domain.
        targets (FloatArray): Array of shape (m, n).
        sources (FloatArray): Array of shape (m, n), paired row by row with targets.

    Returns:
        FloatArray: Image-term values of shape (m,); zeros on the whole space.
    """
    if domain.kind == DomainKind.UNIT_BALL:
        image_sq = (
            np.einsum("ij,ij->i", targets, targets)
            * np.einsum("ij,ij->i", sources, sources)
            - 2.0 * np.einsum("ij,ij->i", targets, sources)
            + 1.0
        )
    elif domain.kind == DomainKind.HALF_SPACE:
        reflected = sources.copy()
        reflected[:, -1] = -reflected[:, -1]
        diff = targets - reflected
        image_sq = np.einsum("ij,ij->i", diff, diff)
    else:
        return np.zeros(targets.shape[0])
    return domain.green_constant * _radial_power(image_sq, domain.dim)

def radial_mean_kernel(domain: Domain, r: FloatArray, s: FloatArray) -> FloatArray:
    """
    Mean of G(x, ·) over the sphere of radius s, for |x| = r.

    Equal to c_n(max(r, s)^{2-n} - 1) on the unit ball and c_n max(r, s)^{2-n} on the 
    whole space; the ball's image term averages to the constant c_n.

    Args:
        domain (Domain): The whole space or the unit ball.
        r (FloatArray): Target radii of shape (m,).
        s (FloatArray): Source radii of shape (k,).

    Returns:
        FloatArray: Kernel values of shape (m, k); +inf when r = s = 0.
    """
    biggest = np.maximum(np.asarray(r, dtype=float)[:, None],
                         np.asarray(s, dtype=float)[None, :])
    with np.errstate(divide="ignore"):
        block = biggest ** (2.0 - domain.dim)
    if domain.kind == DomainKind.UNIT_BALL:
        block = np.maximum(block - 1.0, 0.0)
    return np.asarray(domain.green_constant * block, dtype=float)

def self_cell_kernel(domain: Domain, cell_volume: float) -> float:
    """
    Effective kernel value of the cell containing the target point.

    The cell is replaced by the ball of equal volume, radius ρ = (V n / ω_{n-1})^{1/n}, 
    on which ∫ c_n |y|^{2-n} dy = c_n ω_{n-1} ρ²/2; dividing by V turns it into a value 
    that multiplies the cell mass like any other kernel entry.

    Args:
        domain (Domain): The domain (fixes n).
        cell_volume (float): Cell volume V.

    Returns:
        float: c_n ω_{n-1} ρ² / (2V).
    """
    n = domain.dim
    rho = (cell_volume * n / domain.sphere_area) ** (1.0 / n)
    return domain.green_constant * domain.sphere_area * rho**2 / (2.0 * cell_volume)

def _radial_power(squared: FloatArray, dim: int) -> FloatArray:
    """
    |z|^{2-n} from |z|², with the common n = 3 case done by a reciprocal square root.
    """
    if dim == 3:
        return np.asarray(1.0 / np.sqrt(squared), dtype=float)
    return np.asarray(np.power(squared, (2.0 - dim) / 2.0), dtype=float)
