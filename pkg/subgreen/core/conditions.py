"""
Exponent arithmetic and numerical checks of the existence hypotheses.

This module builds the exponent bundle of an (n, p, q) problem, checks the
Green-potential integrability conditions ‖Gσ‖_{L^r(dσ)} < ∞ and ‖Gμ‖_{L^γ(dμ)} < ∞,
their Lebesgue-density sufficient conditions with the Hardy-Littlewood-Sobolev chain
made visible, the iterated pointwise inequalities (Gσ)^t ≶ t G((Gσ)^{t-1} dσ), and the
norm lemmas linking σ, μ and the L^p(dx) bound of the solution.

Dependencies:
    numpy: For node arrays and the seeded random test functions.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import numpy.typing as npt

from subgreen.common.constants import (
    DEFAULT_LEMMA_TRIALS,
    DEFAULT_SAMPLE_POINTS,
    DEFAULT_TOLERANCES,
)
from subgreen.common.enums import CheckName, InequalityDirection
from subgreen.common.exceptions import ArgumentError, HypothesisError, MeasureTypeError
from subgreen.core.measures import GridDensity, Measure, RadialDensity
from subgreen.core.potential import (
    GreenOperator,
    lp_norm_dmu,
    self_potential,
    weighted_norm,
)
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet
from subgreen.model.sampling import halton_points

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Exponents:
    """
    The exponent bundle of an (n, p, q) problem.

    Attributes:
        n (int): Dimension, at least 3.
        p (float): Target integrability, n/(n-2) < p < ∞.
        q (float): Sublinear exponent in (0, 1).
        gamma (float): γ = (p(n-2) - n)/n > 0.
        r (float): (γ+q)/(1-q), exponent of the σ condition.
        s (float): (γ+q)/q, exponent of the weighted inequality.
        s1 (float): np/(n(1-q) + 2p), Lebesgue exponent for σ.
        s2 (float): np/(n + 2p), Lebesgue exponent for μ.
        s1conj (float): Conjugate of s1.
        s2conj (float): Conjugate of s2.
        p_lem (float): n(1+γ)/(n-2), equal to p.
    """

    n: int
    p: float
    q: float
    gamma: float
    r: float
    s: float
    s1: float
    s2: float
    s1conj: float
    s2conj: float
    p_lem: float

    @property
    def s_from_p(self) -> float:
        """
        The weighted-inequality exponent written through p: (p(n-2) - n(1-q))/(nq).
        """
        n, p, q = self.n, self.p, self.q
        return (p * (n - 2) - n * (1 - q)) / (n * q)

    @property
    def sconj(self) -> float:
        return self.s / (self.s - 1.0)

    @property
    def sigma_dx_exponent(self) -> float:
        """
        p/(1-q), the dx exponent of Gσ in the norm lemmas.
        """
        return self.p / (1.0 - self.q)

    def identities(self) -> dict[str, float]:
        """
        Residuals of the identities tying the bundle together (all 0 in exact
        arithmetic).

        Returns:
            dict[str, float]: Residuals keyed by identity name.
        """
        two_over_n = 2.0 / self.n
        return {
            "p_lem_minus_p": self.p_lem - self.p,
            "hls_sigma": 1 / self.s1 - 1 / (self.r * self.s1conj) - two_over_n,
            "hls_mu": 1 / self.s2 - 1 / (self.gamma * self.s2conj) - two_over_n,
            "s_formula": self.s_from_p - self.s,
        }


@dataclass
class ConditionReport:
    """
    Result of one hypothesis check.

    Attributes:
        check (CheckName): Which check produced the report.
        satisfied (bool): Whether the checked conditions hold numerically.
        values (dict[str, float]): Computed norms, bounds and ratios (+inf allowed).
        degenerate (bool): Whether the inputs make the check vacuous.
    """

    check: CheckName
    satisfied: bool
    values: dict[str, float] = field(default_factory=dict)
    degenerate: bool = False


@dataclass
class IteratedReport:
    """
    Result of the iterated inequality check for one exponent t.

    Attributes:
        t (float): The exponent.
        direction (InequalityDirection): Upper for t ≥ 1, lower for t < 1.
        max_violation (float): Largest relative violation (positive = violated).
        violations (FloatArray): Per-point relative signed violations.
        satisfied (bool): max_violation within tolerance.
    """

    t: float
    direction: InequalityDirection
    max_violation: float
    violations: FloatArray
    satisfied: bool


def exponents(n: int, p: float, q: float) -> Exponents:
    """
    Build the exponent bundle of an (n, p, q) problem.

    Args:
        n (int): Dimension n ≥ 3.
        p (float): Exponent with n/(n-2) < p < ∞.
        q (float): Exponent in (0, 1).

    Returns:
        Exponents: The fully populated bundle.

    Raises:
        HypothesisError: If a hypothesis of the existence theorem fails.
    """
    if n < 3:
        raise HypothesisError(f"Dimension must be at least 3, got n={n}.", "n >= 3")
    if not 0 < q < 1:
        raise HypothesisError(f"Exponent q={q} is outside (0, 1).", "0 < q < 1")
    threshold = n / (n - 2)
    if not (math.isfinite(p) and p > threshold):
        raise HypothesisError(
            f"Exponent p={p} must satisfy the strict inequality "
            f"n/(n-2) = {threshold:g} < p < ∞ (γ would be ≤ 0).",
            "n/(n-2) < p < ∞",
        )
    gamma = (p * (n - 2) - n) / n
    s1 = n * p / (n * (1 - q) + 2 * p)
    s2 = n * p / (n + 2 * p)
    return Exponents(
        n=n,
        p=p,
        q=q,
        gamma=gamma,
        r=(gamma + q) / (1 - q),
        s=(gamma + q) / q,
        s1=s1,
        s2=s2,
        s1conj=s1 / (s1 - 1),
        s2conj=s2 / (s2 - 1),
        p_lem=n * (1 + gamma) / (n - 2),
    )

def check_thm11(
        domain: Domain,
        sigma: Measure,
        mu: Measure,
        exps: Exponents
    ) -> ConditionReport:
    """
    Check ‖Gσ‖_{L^r(dσ)} < ∞ and ‖Gμ‖_{L^γ(dμ)} < ∞.

    Args:
        domain (Domain): The domain.
        sigma (Measure): Coefficient measure σ.
        mu (Measure): Data measure μ.
        exps (Exponents): Exponent bundle.

    Returns:
        ConditionReport: Values N1, N2; degenerate when both measures vanish.
    """
    n1 = lp_norm_dmu(self_potential(domain, sigma), exps.r, sigma)
    n2 = lp_norm_dmu(self_potential(domain, mu), exps.gamma, mu)
    degenerate = sigma.is_zero and mu.is_zero
    return ConditionReport(
        check=CheckName.THM11,
        satisfied=bool(math.isfinite(n1) and math.isfinite(n2) and not degenerate),
        values={"N1": n1, "N2": n2},
        degenerate=degenerate,
    )

def check_cor12(
        domain: Domain,
        sigma: Measure,
        mu: Measure,
        exps: Exponents,
        thm11: Optional[ConditionReport] = None
    ) -> ConditionReport:
    """
    Check σ ∈ L^{s1}(dx) and μ ∈ L^{s2}(dx), next to the potential norms they bound.

    The Hardy-Littlewood-Sobolev chain gives N1 ≤ C‖σ‖_{s1}^{(γ+1)/(γ+q)} and
    N2 ≤ C‖μ‖_{s2}^{(γ+1)/γ}; both right-hand sides and the ratios N/bound are
    reported (the constants are not pinned, so ratios are not compared to anything).

    Args:
        domain (Domain): The domain.
        sigma (Measure): Density measure σ (grid or radial).
        mu (Measure): Density measure μ (grid or radial).
        exps (Exponents): Exponent bundle.
        thm11 (ConditionReport, optional): Precomputed potential-norm report.

    Returns:
        ConditionReport: Lebesgue norms, chain bounds and ratios.

    Raises:
        MeasureTypeError: If either measure is atomic.
    """
    for name, m in (("σ", sigma), ("μ", mu)):
        if not isinstance(m, (GridDensity, RadialDensity)):
            raise MeasureTypeError(
                f"Lebesgue-density conditions need a density for {name}, "
                f"got {m.kind.value}."
            )
    assert isinstance(sigma, (GridDensity, RadialDensity))
    assert isinstance(mu, (GridDensity, RadialDensity))
    thm11 = thm11 or check_thm11(domain, sigma, mu, exps)
    sigma_norm = sigma.lebesgue_norm(exps.s1)
    mu_norm = mu.lebesgue_norm(exps.s2)
    sigma_bound = sigma_norm ** ((exps.gamma + 1) / (exps.gamma + exps.q))
    mu_bound = mu_norm ** ((exps.gamma + 1) / exps.gamma)
    n1, n2 = thm11.values["N1"], thm11.values["N2"]
    return ConditionReport(
        check=CheckName.COR12,
        satisfied=bool(math.isfinite(sigma_norm) and math.isfinite(mu_norm)),
        values={
            "sigma_norm_s1": sigma_norm,
            "mu_norm_s2": mu_norm,
            "sigma_chain_bound": sigma_bound,
            "mu_chain_bound": mu_bound,
            "N1": n1,
            "N2": n2,
            "sigma_chain_ratio": _safe_ratio(n1, sigma_bound),
            "mu_chain_ratio": _safe_ratio(n2, mu_bound),
        },
        degenerate=sigma.is_zero and mu.is_zero,
    )

def iterated_check(
        domain: Domain,
        sigma: Measure,
        t: float,
        sample_points: Optional[FloatArray] = None,
        tolerance: float = DEFAULT_TOLERANCES["iterated"]
    ) -> IteratedReport:
    """
    Check (Gσ)^t ≤ t G((Gσ)^{t-1} dσ) for t ≥ 1, and the reverse for 0 < t < 1.

    Both sides use the same quadrature of σ. The per-point violation is
    (lhs - rhs)/max(lhs, rhs) for the upper direction and (rhs - lhs)/max(lhs, rhs)
    for the lower one, so a positive value means the inequality fails there.

    Args:
        domain (Domain): The domain.
        sigma (Measure): The measure σ.
        t (float): Exponent t > 0.
        sample_points (FloatArray, optional): Points of shape (k, n); defaults to the
            first DEFAULT_SAMPLE_POINTS Halton points of the domain.
        tolerance (float): Largest acceptable violation.

    Returns:
        IteratedReport: Violations and their maximum.

    Raises:
        ArgumentError: If t ≤ 0, or Gσ is infinite on the support of σ or vanishes
            at an interior support node while t < 1.
    """
    if not t > 0:
        raise ArgumentError(f"Iterated exponent t must be positive, got {t}.")
    points = (
        halton_points(domain, DEFAULT_SAMPLE_POINTS) if sample_points is None
        else domain.require(sample_points, "Sample point")
    )
    direction = InequalityDirection.UPPER if t >= 1 else InequalityDirection.LOWER
    if sigma.is_zero:
        zeros = np.zeros(points.shape[0])
        return IteratedReport(t, direction, 0.0, zeros, True)

    node_potential = GreenOperator(domain, sigma, sigma.support_nodes).potential(sigma)
    if np.any(~np.isfinite(node_potential)):
        raise ArgumentError("Gσ is infinite on the support of σ.")
    # G(x, y) = 0 for y on the boundary, so such nodes drop out of the right side
    vanishing = node_potential <= 0
    if t < 1 and np.any(vanishing & domain.contains(sigma.support_nodes)):
        raise ArgumentError(
            "Gσ vanishes at an interior support node of σ while t < 1."
        )
    factors = np.zeros(node_potential.shape)
    factors[~vanishing] = node_potential[~vanishing] ** (t - 1)

    operator = GreenOperator(domain, sigma, points)
    lhs = operator.potential(sigma) ** t
    masses = np.zeros(sigma.masses.shape)
    masses[sigma.support_index] = sigma.support_masses * factors
    rhs = t * operator.apply(masses)

    scale = np.maximum(lhs, rhs)
    gap = lhs - rhs if direction == InequalityDirection.UPPER else rhs - lhs
    violations = np.divide(gap, scale, out=np.zeros_like(gap), where=scale > 0)
    worst = float(np.max(violations)) if violations.size else 0.0
    return IteratedReport(t, direction, worst, violations, worst <= tolerance)

def lemma_norm_checks(
        domain: Domain,
        sigma: Measure,
        mu: Measure,
        exps: Exponents,
        eval_set: EvalSet,
        seed: int = 0,
        trials: int = DEFAULT_LEMMA_TRIALS,
        thm11: Optional[ConditionReport] = None
    ) -> ConditionReport:
    """
    Interaction of σ and μ, and the two norm lemmas behind the L^p bound.

    Reports
    - ``interaction``: ‖Gμ‖_{L^{γ+q}(dσ)}, which must be finite whenever the
      potential conditions hold;
    - ``weighted_constant``: the largest ratio ‖G(f dσ)‖_{L^p(dx)} /
      (‖Gσ‖_{L^{p/(1-q)}(dx)}^{1/s'} ‖f‖_{L^s(dσ)}) over `trials` random
      nonnegative f on the support nodes (seeded), and ``weighted_ones_ratio``,
      the same ratio for f ≡ 1;
    - ``norm_ratio``: ‖Gσ‖_{L^{p/(1-q)}(dx)} / N1^{(γ+q)/(γ+1)}.

    Args:
        domain (Domain): The domain.
        sigma (Measure): Coefficient measure σ.
        mu (Measure): Data measure μ.
        exps (Exponents): Exponent bundle.
        eval_set (EvalSet): Quadrature-complete set for the dx norms.
        seed (int): Seed of the random test functions.
        trials (int): Number of random test functions.
        thm11 (ConditionReport, optional): Precomputed potential-norm report.

    Returns:
        ConditionReport: All quantities; degenerate when σ vanishes.
    """
    thm11 = thm11 or check_thm11(domain, sigma, mu, exps)
    weights = eval_set.quadrature_weights()
    if sigma.is_zero:
        return ConditionReport(
            check=CheckName.LEMMA_NORMS,
            satisfied=True,
            values={
                "interaction": 0.0,
                "weighted_constant": 0.0,
                "weighted_ones_ratio": 0.0,
                "sigma_dx_norm": 0.0,
                "norm_ratio": 0.0,
                "implication_holds": 1.0,
            },
            degenerate=True,
        )

    exponent = exps.gamma + exps.q
    mu_at_sigma = GreenOperator(domain, mu, sigma.support_nodes).potential(mu)
    interaction = weighted_norm(mu_at_sigma, sigma.support_masses, exponent)

    to_eval = GreenOperator(domain, sigma, eval_set.points)
    sigma_dx = weighted_norm(to_eval.potential(sigma), weights, exps.sigma_dx_exponent)
    scale = sigma_dx ** (1.0 / exps.sconj)

    def ratio(f: FloatArray) -> float:
        masses = np.zeros(sigma.masses.shape)
        masses[sigma.support_index] = sigma.support_masses * f
        top = weighted_norm(to_eval.apply(masses), weights, exps.p)
        return _safe_ratio(top, scale * weighted_norm(f, sigma.support_masses, exps.s))

    rng = np.random.default_rng(seed)
    samples = [ratio(rng.uniform(0.0, 1.0, sigma.support_index.size))
               for _ in range(trials)]
    ones_ratio = ratio(np.ones(sigma.support_index.size))
    norm_ratio = _safe_ratio(
        sigma_dx, thm11.values["N1"] ** ((exps.gamma + exps.q) / (exps.gamma + 1))
    )
    implication = (not thm11.satisfied) or math.isfinite(interaction)
    values = {
        "interaction": interaction,
        "weighted_constant": max(samples) if samples else 0.0,
        "weighted_ones_ratio": ones_ratio,
        "sigma_dx_norm": sigma_dx,
        "norm_ratio": norm_ratio,
        "implication_holds": 1.0 if implication else 0.0,
    }
    finite = all(math.isfinite(v) for v in values.values())
    return ConditionReport(
        check=CheckName.LEMMA_NORMS,
        satisfied=bool(implication and finite),
        values=values,
    )

def _safe_ratio(top: float, bottom: float) -> float:
    if bottom == 0.0:
        return 0.0 if top == 0.0 else math.inf
    if math.isinf(bottom):
        return 0.0 if math.isfinite(top) else math.inf
    return top / bottom
