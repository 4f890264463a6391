"""
Unit tests for the Green functions in subgreen.core.kernels.

This module checks closed-form values, symmetry and positivity of G on the three model
domains, agreement of the dense blocks with the pointwise kernel, the spherical mean
used by radial measures and the self-cell value used by grid quadrature.
"""
import math
from pathlib import Path
from typing import TypedDict, cast

import numpy as np
import pytest

from subgreen.common.enums import DomainKind
from subgreen.common.exceptions import DomainMembershipError
from subgreen.core.kernels import (
    green_block,
    green_kernel,
    image_pairs,
    radial_mean_kernel,
    self_cell_kernel,
)
from subgreen.model.domain import Domain
from subgreen.model.sampling import halton_points
from tests.common_utils.utils import load_test_cases

# Test cases paths
DATA_PATH: Path = Path(__file__).parent / "data"
DATA_GREEN_KERNEL: Path = DATA_PATH / "green_kernel.yaml"

C3 = 1 / (4 * math.pi)

def _random_pairs(
        domain: Domain,
        rng: np.random.Generator,
        count: int
    ) -> tuple[np.ndarray, np.ndarray]:
    size = (2 * count, domain.dim)
    if domain.kind == DomainKind.UNIT_BALL:
        directions = rng.normal(size=size)
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        points = directions * 0.9 * rng.uniform(size=(2 * count, 1)) ** (1 / domain.dim)
    else:
        points = rng.uniform(-0.9, 0.9, size=size)
        if domain.kind == DomainKind.HALF_SPACE:
            points[:, -1] = rng.uniform(0.05, 1.8, size=2 * count)
    return points[:count], points[count:]

# ----------------------------
# TypedDict Definitions for Tests
# ----------------------------

class GreenKernelTest(TypedDict):
    """
    Represents a test case for a closed-form kernel value in three dimensions.

    Attributes:
        kind (str): Domain kind value.
        x (list[float]): First point.
        y (list[float]): Second point.
        expected (float): G(x, y) divided by c_3 = 1/(4π).
    """
    kind: str
    x: list[float]
    y: list[float]
    expected: float

# ----------------------------
# Pointwise Kernel Tests
# ----------------------------

@pytest.mark.parametrize("case", cast(list[GreenKernelTest],
                                      load_test_cases(DATA_GREEN_KERNEL)))
def test_green_kernel_closed_forms(case: GreenKernelTest) -> None:
    """
    Test kernel values against hand-computed closed forms.

    Args:
        case (GreenKernelTest): Test case containing the points and expected value.
    """
    domain = Domain(DomainKind(case["kind"]), 3)
    value = green_kernel(domain, np.array(case["x"]), np.array(case["y"]))
    assert value == pytest.approx(C3 * case["expected"])

@pytest.mark.parametrize("kind", list(DomainKind))
def test_green_kernel_diagonal_is_infinite(kind: DomainKind) -> None:
    """
    Test that G(x, x) = +inf on every domain.

    Args:
        kind (DomainKind): The domain kind.
    """
    x = np.array([0.1, 0.2, 0.3])
    assert math.isinf(green_kernel(Domain(kind, 3), x, x))

@pytest.mark.parametrize("kind", [DomainKind.UNIT_BALL, DomainKind.HALF_SPACE])
def test_green_kernel_rejects_outside_points(kind: DomainKind) -> None:
    """
    Test that points on or beyond the finite boundary are rejected.

    Args:
        kind (DomainKind): The domain kind.
    """
    domain = Domain(kind, 3)
    with pytest.raises(DomainMembershipError):
        green_kernel(domain, np.array([0.0, 0.0, 0.5]), np.array([0.0, 0.0, -1.0]))

@pytest.mark.parametrize("kind", list(DomainKind))
@pytest.mark.parametrize("dim", [3, 4, 5])
def test_green_kernel_symmetric_and_dominated(kind: DomainKind, dim: int) -> None:
    """
    Test G(x, y) = G(y, x) and 0 < G(x, y) ≤ c_n |x-y|^{2-n} on 1000 random pairs.

    Args:
        kind (DomainKind): The domain kind.
        dim (int): Space dimension.
    """
    domain = Domain(kind, dim)
    sources, targets = _random_pairs(domain, np.random.default_rng(dim), 1000)
    for x, y in zip(sources, targets, strict=True):
        forward = green_kernel(domain, x, y)
        backward = green_kernel(domain, y, x)
        free = domain.green_constant * np.linalg.norm(x - y) ** (2 - dim)
        assert forward == pytest.approx(backward, rel=1e-12)
        assert 0.0 < forward <= free * (1 + 1e-12)

# ----------------------------
# Kernel Block Tests
# ----------------------------

@pytest.mark.parametrize("kind", list(DomainKind))
@pytest.mark.parametrize("dim", [3, 4])
def test_green_block_matches_pointwise(kind: DomainKind, dim: int) -> None:
    """
    Test that the dense block equals the pointwise kernel entry by entry.

    Args:
        kind (DomainKind): The domain kind.
        dim (int): Space dimension.
    """
    domain = Domain(kind, dim)
    points = halton_points(domain, 15)
    targets, sources = points[:7], points[7:]
    block = green_block(domain, targets, sources)
    expected = np.array([[green_kernel(domain, x, y) for y in sources]
                         for x in targets])
    assert block.shape == (7, 8)
    assert block == pytest.approx(expected, rel=1e-10)

def test_green_block_coincident_points() -> None:
    """
    Test that coincident target and source give +inf in the block.
    """
    domain = Domain(DomainKind.UNIT_BALL, 3)
    points = np.array([[0.1, 0.0, 0.0], [0.0, 0.3, 0.0]])
    block = green_block(domain, points, points)
    assert np.isinf(block[0, 0]) and np.isinf(block[1, 1])
    assert np.all(np.isfinite(block[[0, 1], [1, 0]]))

def test_green_block_vanishes_towards_boundary() -> None:
    """
    Test that G(x, y) tends to 0 as y approaches the sphere.
    """
    domain = Domain(DomainKind.UNIT_BALL, 3)
    x = np.array([[0.2, 0.0, 0.0]])
    ys = np.array([[0.0, 1.0 - eps, 0.0] for eps in (1e-1, 1e-3, 1e-6)])
    values = green_block(domain, x, ys)[0]
    assert values[0] > values[1] > values[2]
    assert values[2] < 1e-5

@pytest.mark.parametrize("kind", list(DomainKind))
def test_image_pairs(kind: DomainKind) -> None:
    """
    Test that the image part is the free kernel minus G for paired points.

    Args:
        kind (DomainKind): The domain kind.
    """
    domain = Domain(kind, 3)
    points = halton_points(domain, 10)
    targets, sources = points[:5], points[5:]
    images = image_pairs(domain, targets, sources)
    for k, (x, y) in enumerate(zip(targets, sources, strict=True)):
        free = C3 / np.linalg.norm(x - y)
        assert images[k] == pytest.approx(free - green_kernel(domain, x, y), abs=1e-12)
    if kind == DomainKind.WHOLE_SPACE:
        assert np.all(images == 0.0)

# ----------------------------
# Radial Mean and Self-Cell Tests
# ----------------------------

@pytest.mark.parametrize("kind, expected", [
    (DomainKind.UNIT_BALL, C3 * (1 / 0.7 - 1)),
    (DomainKind.WHOLE_SPACE, C3 / 0.7),
])
def test_radial_mean_kernel_closed_form(kind: DomainKind, expected: float) -> None:
    """
    Test the spherical mean c_n(max(r, s)^{2-n} - 1) (ball) or c_n max(r, s)^{2-n}.

    Args:
        kind (DomainKind): The domain kind.
        expected (float): Expected value for r = 0.3, s = 0.7 and for r = 0.7, s = 0.3.
    """
    domain = Domain(kind, 3)
    block = radial_mean_kernel(domain, np.array([0.3, 0.7]), np.array([0.7, 0.3]))
    assert block[0, 0] == pytest.approx(expected)
    assert block[1, 1] == pytest.approx(expected)

def test_radial_mean_kernel_is_sphere_average() -> None:
    """
    Test the spherical mean against a Monte Carlo average of G over the sphere.
    """
    domain = Domain(DomainKind.UNIT_BALL, 3)
    rng = np.random.default_rng(11)
    directions = rng.normal(size=(200000, 3))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    x = np.array([[0.0, 0.3, 0.0]])
    average = float(np.mean(green_block(domain, x, 0.7 * directions)))
    expected = float(radial_mean_kernel(domain, np.array([0.3]), np.array([0.7]))[0, 0])
    assert average == pytest.approx(expected, rel=1e-2)

def test_radial_mean_kernel_origin_pair() -> None:
    """
    Test that r = s = 0 gives +inf.
    """
    domain = Domain(DomainKind.WHOLE_SPACE, 3)
    assert np.isinf(radial_mean_kernel(domain, np.array([0.0]), np.array([0.0]))[0, 0])

@pytest.mark.parametrize("dim", [3, 4, 5])
def test_self_cell_kernel(dim: int) -> None:
    """
    Test that the self-cell value times the cell volume equals the integral of the
    free kernel over the ball of equal volume.

    Args:
        dim (int): Space dimension.
    """
    domain = Domain(DomainKind.WHOLE_SPACE, dim)
    volume = 1e-3
    rho = (volume * dim / domain.sphere_area) ** (1 / dim)
    ball_integral = domain.green_constant * domain.sphere_area * rho**2 / 2
    assert self_cell_kernel(domain, volume) * volume == pytest.approx(ball_integral)
    if dim == 3:
        assert self_cell_kernel(domain, 1.0) == pytest.approx(
            (3 / (4 * math.pi)) ** (2 / 3) / 2
        )

def test_ball_kernel_boundary_decay() -> None:
    """
    Test that G(0, y) at |y| = 1 - 1e-6 is at most 1e-4 times its value at |y| = 0.5.
    """
    domain = Domain(DomainKind.UNIT_BALL, 3)
    origin = np.zeros(3)
    near_boundary = green_kernel(domain, origin, np.array([0.0, 0.0, 1.0 - 1e-6]))
    halfway = green_kernel(domain, origin, np.array([0.0, 0.0, 0.5]))
    assert 0.0 < near_boundary <= 1e-4 * halfway
