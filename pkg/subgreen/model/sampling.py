"""
Deterministic low-discrepancy sample points inside a domain.
"""

import numpy as np
import numpy.typing as npt
from scipy.stats import qmc

from subgreen.common.enums import DomainKind
from subgreen.model.domain import Domain

FloatArray = npt.NDArray[np.float64]


def halton_points(domain: Domain, count: int, radius: float = 0.9) -> FloatArray:
    """
    Unscrambled Halton points mapped into the domain.

    The cube [-radius, radius]ⁿ is filled by the Halton sequence; for the ball only 
    points with |x| < radius are kept, for the half-space the last coordinate is
    shifted into (0, 2·radius). No seed is involved, so the points are reproducible bit
    for bit.

    Args:
        domain (Domain): Target domain.
        count (int): Number of points.
        radius (float): Half-width of the sampling box (ball radius for the unit ball).

    Returns:
        FloatArray: Array of shape (count, n).
    """
    engine = qmc.Halton(d=domain.dim, scramble=False)
    # skip the corner point at the origin of the unit cube
    engine.fast_forward(1)
    points: list[FloatArray] = []
    have = 0
    while have < count:
        batch = radius * (2.0 * engine.random(max(2 * count, 64)) - 1.0)
        if domain.kind == DomainKind.UNIT_BALL:
            batch = batch[np.linalg.norm(batch, axis=1) < radius]
        elif domain.kind == DomainKind.HALF_SPACE:
            batch[:, -1] += radius
            batch = batch[batch[:, -1] > 0]
        points.append(batch)
        have += batch.shape[0]
    return np.concatenate(points)[:count]
