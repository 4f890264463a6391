"""
Green potentials, Lebesgue and measure norms, and the weighted norm inequality.

This module provides the GreenOperator (the discrete map from node masses of a measure
to values of its Green potential on a set of targets), the pointwise and field-valued
potentials built on it, L^p norms against dx and against a measure, and the two
numerical faces of the (s, r) weighted norm inequality ‖G(f dσ)‖_{L^r(dσ)} ≤
c‖f‖_{L^s(dσ)}: a multi-start lower estimate of the best constant c, and the potential
criterion ‖Gσ‖_{L^{sr/(s-r)}(dσ)} < ∞.

Dependencies:
    numpy: For kernel blocks, matrix-vector products and random streams (one
        SeedSequence child per trial, so results do not depend on scheduling).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import numpy.typing as npt

from subgreen.common.constants import (
    DEFAULT_BEST_CONSTANT_STEPS,
    DEFAULT_BEST_CONSTANT_TRIALS,
    KERNEL_CACHE_LIMIT,
    KERNEL_CHUNK_SIZE,
)
from subgreen.common.enums import EvalRule, EvalSetKind, MeasureKind
from subgreen.common.exceptions import ArgumentError
from subgreen.core.kernels import (
    green_block,
    image_pairs,
    radial_mean_kernel,
    self_cell_kernel,
)
from subgreen.core.measures import GridDensity, Measure, RadialDensity
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet, Field

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


class GreenOperator:
    """
    Discrete Green operator of a measure's quadrature, evaluated at fixed targets.

    The operator is built once for the support nodes of a base measure and then
    applied to any node-mass vector on the same nodes (for instance the masses of
    u^q dσ during Picard iteration). Kernel rows depend on the representation:

    - atomic: plain kernel values, +inf where a target coincides with an atom;
    - grid: midpoint kernel values, except the cell containing the target, whose entry
      is the equal-volume-ball value minus the regular image part;
    - radial: the spherical mean of the kernel at the target's radius.

    The kernel matrix is cached when targets x sources stays below
    KERNEL_CACHE_LIMIT; otherwise it is rebuilt in chunks of targets on every apply.

    Attributes:
        domain (Domain): The domain.
        measure (Measure): Base measure fixing the nodes and the support.
        targets (FloatArray): Evaluation points of shape (m, n).
    """

    def __init__(self, domain: Domain, measure: Measure, targets: FloatArray) -> None:
        if measure.domain != domain:
            raise ArgumentError(
                f"Measure lives on {measure.domain}, potential requested on {domain}."
            )
        self.domain = domain
        self.measure = measure
        self.targets = np.atleast_2d(np.asarray(targets, dtype=float))
        self.support = measure.support_index
        self._sources = measure.nodes[self.support]
        self._matrix: Optional[FloatArray] = None
        self._inf_entries: Optional[tuple[IntArray, IntArray]] = None
        if self.targets.shape[0] * self.support.size <= KERNEL_CACHE_LIMIT:
            self._matrix, self._inf_entries = self._block(
                np.arange(self.targets.shape[0])
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (int(self.targets.shape[0]), int(self.support.size))

    def matrix(self) -> FloatArray:
        """
        The full kernel matrix (targets x support nodes), +inf entries included.

        Returns:
            FloatArray: Matrix of shape (m, N).
        """
        if self._matrix is None:
            block, (rows, cols) = self._block(np.arange(self.targets.shape[0]))
        else:
            block, (rows, cols) = self._matrix.copy(), self._inf_entries_or_empty()
        block[rows, cols] = np.inf
        return np.asarray(block, dtype=float)

    def apply(self, masses: FloatArray) -> FloatArray:
        """
        Potential values Σ_j K(x_i, y_j) m_j at every target.

        Args:
            masses (FloatArray): Node masses of shape (N_total,) on the base measure's
                nodes; masses off the base support must vanish.

        Returns:
            FloatArray: Values of shape (m,), +inf where a singular entry meets a
            positive mass.

        Raises:
            ArgumentError: If the mass vector does not fit the base measure.
        """
        full = np.asarray(masses, dtype=float).reshape(-1)
        if full.shape != self.measure.masses.shape:
            raise ArgumentError(
                f"Expected {self.measure.masses.size} node masses, got {full.size}."
            )
        weights = full[self.support]
        if np.count_nonzero(full) > np.count_nonzero(weights):
            raise ArgumentError("Node masses leave the support of the base measure.")
        if self.support.size == 0:
            return np.zeros(self.targets.shape[0])
        if self._matrix is not None:
            return self._finish(self._matrix @ weights, self._inf_entries_or_empty(),
                                weights)
        out = np.empty(self.targets.shape[0])
        for start in range(0, self.targets.shape[0], KERNEL_CHUNK_SIZE):
            rows = np.arange(start, min(start + KERNEL_CHUNK_SIZE,
                                        self.targets.shape[0]))
            block, inf_entries = self._block(rows)
            out[rows] = self._finish(block @ weights, inf_entries, weights)
        return out

    def potential(self, m: Measure) -> FloatArray:
        """
        Potential of a measure sharing the base measure's nodes (e.g. a reweighting).

        Args:
            m (Measure): Measure on the same nodes.

        Returns:
            FloatArray: Values of shape (m,).
        """
        return self.apply(m.masses)

    def _inf_entries_or_empty(self) -> tuple[IntArray, IntArray]:
        if self._inf_entries is None:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        return self._inf_entries

    @staticmethod
    def _finish(
            values: FloatArray,
            inf_entries: tuple[IntArray, IntArray],
            weights: FloatArray
        ) -> FloatArray:
        rows, cols = inf_entries
        hit = weights[cols] > 0
        values[rows[hit]] = np.inf
        return values

    def _block(
            self,
            rows: IntArray
        ) -> tuple[FloatArray, tuple[IntArray, IntArray]]:
        """
        Finite kernel block for a slice of targets, with the positions of its
        singular entries (stored as 0 in the block).
        """
        targets = self.targets[rows]
        if self.measure.kind == MeasureKind.RADIAL:
            assert isinstance(self.measure, RadialDensity)
            block = radial_mean_kernel(
                self.domain,
                np.linalg.norm(targets, axis=1),
                self.measure.radii[self.support],
            )
        else:
            block = green_block(self.domain, targets, self._sources)
            if self.measure.kind == MeasureKind.GRID:
                assert isinstance(self.measure, GridDensity)
                self._correct_self_cells(targets, block, self.measure)
        inf_rows, inf_cols = np.nonzero(np.isinf(block))
        block[inf_rows, inf_cols] = 0.0
        # row indices are local to the block
        return block, (inf_rows.astype(np.int64), inf_cols.astype(np.int64))

    def _correct_self_cells(
            self,
            targets: FloatArray,
            block: FloatArray,
            grid_measure: GridDensity
        ) -> None:
        grid = grid_measure.grid
        position = np.full(grid.size, -1, dtype=np.int64)
        position[self.support] = np.arange(self.support.size)
        cells = grid.locate(targets)
        owned = np.flatnonzero(cells >= 0)
        cols = position[cells[owned]]
        keep = cols >= 0
        owned, cols = owned[keep], cols[keep]
        if owned.size == 0:
            return
        regular = image_pairs(self.domain, targets[owned], self._sources[cols])
        block[owned, cols] = np.maximum(
            self_cell_kernel(self.domain, grid.cell_volume) - regular, 0.0
        )


@dataclass
class BestConstantEstimate:
    """
    Outcome of the best-constant search of the weighted norm inequality.

    Attributes:
        constant (float): Best ratio found (a lower estimate of the constant), +inf
            when the measure is inadmissible.
        maximizer (FloatArray): Maximizing f on the support nodes, ‖f‖_{L^s(dσ)} = 1.
        ones_ratio (float): Ratio of the feasible point f ≡ 1.
        trials (int): Number of starts used.
        steps (int): Ascent steps per start.
    """

    constant: float
    maximizer: FloatArray
    ones_ratio: float
    trials: int
    steps: int


def green_potential(domain: Domain, m: Measure, x: FloatArray) -> float:
    """
    Green potential Gm(x) = ∫ G(x, y) dm(y) at a single point.

    Args:
        domain (Domain): The domain.
        m (Measure): The measure.
        x (FloatArray): Point of shape (n,).

    Returns:
        float: Gm(x), +inf when x carries an atom.

    Raises:
        DomainMembershipError: If x lies outside the domain.
    """
    point = domain.require(x, "Evaluation point")
    return float(GreenOperator(domain, m, point).potential(m)[0])

def potential_field(
        domain: Domain,
        m: Measure,
        eval_set: EvalSet,
        rule: Optional[EvalRule] = None
    ) -> Field:
    """
    Green potential of a measure over an evaluation set.

    Args:
        domain (Domain): The domain.
        m (Measure): The measure.
        eval_set (EvalSet): Evaluation points (already validated against the domain).
        rule (EvalRule, optional): Evaluation rule of the result, defaults to the set's
            natural rule.

    Returns:
        Field: The potential field.
    """
    values = GreenOperator(domain, m, eval_set.points).potential(m)
    return Field(domain, eval_set, values, rule or eval_set.default_rule)

def self_potential(domain: Domain, m: Measure) -> Field:
    """
    Green potential of a measure evaluated at its own quadrature nodes.

    Radial measures use their radii as a radial evaluation set, grid measures the
    centres of their support cells, atomic measures their atoms.

    Args:
        domain (Domain): The domain.
        m (Measure): The measure.

    Returns:
        Field: The potential on the measure's nodes (every support node is a point of
        the evaluation set).
    """
    if isinstance(m, RadialDensity):
        eval_set = EvalSet.radial(domain, m.radii)
    elif isinstance(m, GridDensity):
        eval_set = EvalSet(
            kind=EvalSetKind.GRID,
            points=m.nodes[m.support_index],
            weights=np.full(m.support_index.size, m.grid.cell_volume),
            grid=m.grid,
            cells=m.support_index,
        )
    else:
        eval_set = EvalSet(kind=EvalSetKind.POINTS, points=m.support_nodes)
    return potential_field(domain, m, eval_set)

def lp_norm_dx(f: Field, p: float) -> float:
    """
    (∫ |f|^p dx)^{1/p} with the evaluation set's Lebesgue quadrature.

    Args:
        f (Field): Field on a quadrature-complete evaluation set.
        p (float): Exponent p > 0.

    Returns:
        float: The norm, +inf when f is infinite on a cell of positive weight.

    Raises:
        ArgumentError: If p ≤ 0.
        CapabilityError: If the evaluation set carries no dx quadrature.
    """
    _check_exponent(p)
    weights = f.eval_set.quadrature_weights()
    return weighted_norm(f.values, weights, p)

def lp_norm_dmu(f: Field, p: float, m: Measure) -> float:
    """
    (∫ |f|^p dm)^{1/p}, with f evaluated at the support nodes of m by its rule.

    Args:
        f (Field): The field.
        p (float): Exponent p > 0.
        m (Measure): The measure.

    Returns:
        float: The norm; +inf propagates.

    Raises:
        ArgumentError: If p ≤ 0.
        CapabilityError: If the evaluation rule cannot reach a support node.
    """
    _check_exponent(p)
    if m.is_zero:
        return 0.0
    return weighted_norm(f.at(m.support_nodes), m.support_masses, p)

def weighted_norm(values: FloatArray, weights: FloatArray, p: float) -> float:
    """
    Discrete norm (Σ w_i |v_i|^p)^{1/p} over the nodes with positive weight; +inf when
    any such value is infinite.
    """
    positive = weights > 0
    vals = np.abs(np.asarray(values, dtype=float)[positive])
    if np.any(np.isinf(vals)):
        return float(np.inf)
    return float(np.sum(weights[positive] * vals**p)) ** (1.0 / p)

def weighted_norm_criterion(
        domain: Domain,
        sigma: Measure,
        s: float,
        r: float
    ) -> float:
    """
    ‖Gσ‖_{L^{sr/(s-r)}(dσ)}, finite exactly when the (s, r) weighted norm inequality
    holds for σ (0 < r < s, s > 1).

    Args:
        domain (Domain): The domain.
        sigma (Measure): The measure σ.
        s (float): Exponent s > 1.
        r (float): Exponent r in (0, s).

    Returns:
        float: The criterion norm.
    """
    _check_weighted_exponents(s, r)
    return lp_norm_dmu(self_potential(domain, sigma), s * r / (s - r), sigma)

def best_constant_estimate(
        domain: Domain,
        sigma: Measure,
        s: float,
        r: float,
        trials: int = DEFAULT_BEST_CONSTANT_TRIALS,
        steps: int = DEFAULT_BEST_CONSTANT_STEPS,
        seed: int = 0,
        progress_callback: Optional[Callable[[float], None]] = None
    ) -> BestConstantEstimate:
    """
    Lower estimate of the best c in ‖G(f dσ)‖_{L^r(dσ)} ≤ c‖f‖_{L^s(dσ)}.

    Maximizes R(f) = ‖G(f dσ)‖_{L^r(dσ)} / ‖f‖_{L^s(dσ)} over f ≥ 0 on the support
    nodes. Trial 0 starts from f ≡ 1, the others from uniform random f drawn from their
    own child of SeedSequence(seed). Each step takes a forward-difference gradient,
    moves along it, projects onto f ≥ 0, renormalizes to ‖f‖_{L^s(dσ)} = 1 and keeps
    the move only if R increases (halving the step otherwise), so the result never
    decreases with more trials or steps.

    Args:
        domain (Domain): The domain.
        sigma (Measure): The measure σ.
        s (float): Exponent s > 1.
        r (float): Exponent r in (0, s).
        trials (int): Number of starts, at least 1.
        steps (int): Ascent steps per start.
        seed (int): Seed of the random starts.
        progress_callback (Callable[[float], None], optional): Receives the completed
            percentage.

    Returns:
        BestConstantEstimate: Best ratio, maximizer and the f ≡ 1 ratio.

    Raises:
        ArgumentError: If σ has empty support, or the exponents or counts are invalid.
    """
    _check_weighted_exponents(s, r)
    if trials < 1 or steps < 0:
        raise ArgumentError("Best-constant search needs trials >= 1 and steps >= 0.")
    if sigma.is_zero:
        raise ArgumentError(
            "Best-constant search needs a measure with nonempty support."
        )

    weights = sigma.support_masses
    kernel = GreenOperator(domain, sigma, sigma.support_nodes).matrix()
    ones = np.ones(weights.size)
    ones_ratio = _ratio(kernel, weights, ones, s, r)
    if not np.isfinite(ones_ratio):
        if progress_callback:
            progress_callback(100.0)
        return BestConstantEstimate(
            np.inf, _normalized(ones, weights, s), np.inf, trials, steps
        )

    children = np.random.SeedSequence(seed).spawn(trials)
    best_value, best_f = -np.inf, ones
    for trial, child in enumerate(children):
        if trial == 0:
            start = ones
        else:
            start = np.random.default_rng(child).uniform(0.0, 1.0, weights.size)
        value, f = _ascend(
            kernel,
            weights,
            _normalized(start, weights, s),
            s,
            r,
            steps,
            progress_callback,
            trial,
            trials,
        )
        if value > best_value:
            best_value, best_f = value, f
    if progress_callback:
        progress_callback(100.0)
    return BestConstantEstimate(
        float(best_value), best_f, float(ones_ratio), trials, steps
    )

def _ascend(
        kernel: FloatArray,
        weights: FloatArray,
        f: FloatArray,
        s: float,
        r: float,
        steps: int,
        progress_callback: Optional[Callable[[float], None]],
        trial: int,
        trials: int
    ) -> tuple[float, FloatArray]:
    value = _ratio(kernel, weights, f, s, r)
    rate = 0.5
    for step in range(steps):
        grad = _ratio_gradient(kernel, weights, f, s, r, value)
        scale = float(np.max(np.abs(grad)))
        if scale == 0.0 or not np.isfinite(scale):
            break
        direction = grad / scale * float(np.max(f))
        while rate > 1e-8:
            candidate = np.maximum(f + rate * direction, 0.0)
            if np.any(candidate > 0):
                candidate = _normalized(candidate, weights, s)
                trial_value = _ratio(kernel, weights, candidate, s, r)
                if trial_value > value:
                    f, value = candidate, trial_value
                    rate = min(rate * 1.5, 4.0)
                    break
            rate *= 0.5
        if progress_callback:
            progress_callback(100.0 * (trial * steps + step + 1) / (trials * steps))
    return value, f

def _ratio(
        kernel: FloatArray,
        weights: FloatArray,
        f: FloatArray,
        s: float,
        r: float
    ) -> float:
    numerator = weighted_norm(_apply_dense(kernel, f * weights), weights, r)
    denominator = weighted_norm(f, weights, s)
    return numerator / denominator if denominator > 0 else 0.0

def _ratio_gradient(
        kernel: FloatArray,
        weights: FloatArray,
        f: FloatArray,
        s: float,
        r: float,
        value: float
    ) -> FloatArray:
    """
    Forward differences of R along every coordinate; each perturbation is a rank-one
    update of the potential, done for a chunk of coordinates at a time.
    """
    eps = 1e-6 * max(float(np.max(f)), 1e-12)
    g = kernel @ (f * weights)
    base_s = float(np.sum(weights * f**s))
    denominators = (base_s + weights * ((f + eps) ** s - f**s)) ** (1.0 / s)
    grad = np.empty(f.size)
    for start in range(0, f.size, KERNEL_CHUNK_SIZE):
        cols = slice(start, min(start + KERNEL_CHUNK_SIZE, f.size))
        shifted = g[:, None] + eps * kernel[:, cols] * weights[None, cols]
        numerators = np.sum(weights[:, None] * shifted**r, axis=0) ** (1.0 / r)
        grad[cols] = (numerators / denominators[cols] - value) / eps
    return grad

def _apply_dense(kernel: FloatArray, masses: FloatArray) -> FloatArray:
    finite = np.where(np.isinf(kernel), 0.0, kernel)
    values = finite @ masses
    singular = np.isinf(kernel) & (masses[None, :] > 0)
    values[np.any(singular, axis=1)] = np.inf
    return np.asarray(values, dtype=float)

def _normalized(f: FloatArray, weights: FloatArray, s: float) -> FloatArray:
    norm = weighted_norm(f, weights, s)
    return f / norm if norm > 0 else f

def _check_exponent(p: float) -> None:
    if not p > 0:
        raise ArgumentError(f"Norm exponent must be positive, got {p}.")

def _check_weighted_exponents(s: float, r: float) -> None:
    if not (s > 1 and 0 < r < s):
        raise ArgumentError(
            f"Weighted norm inequality needs s > 1 and 0 < r < s, got s={s}, r={r}."
        )
