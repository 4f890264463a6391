"""
Enum definitions for domains, measures, evaluation sets and scenario checks.

These enums are used throughout the library, the scenario loader and the CLI to keep 
option handling type safe. Every enum is ``str``-valued so that scenario JSON and CLI 
arguments map onto them directly.
"""

from enum import Enum


class DomainKind(str, Enum):
    """
    Enum for the model domains with an explicit Green function of -Δ.

    Attributes:
        WHOLE_SPACE (str): All of ℝⁿ.
        UNIT_BALL (str): The open unit ball {|x| < 1}.
        HALF_SPACE (str): The upper half-space {xₙ > 0}.
    """
    WHOLE_SPACE = "whole_space"
    UNIT_BALL = "unit_ball"
    HALF_SPACE = "half_space"

class MeasureKind(str, Enum):
    """
    Enum for the supported representations of a nonnegative Radon measure.

    Attributes:
        ATOMIC (str): Finite sum of weighted Dirac masses.
        GRID (str): Piecewise-constant Lebesgue density on a tensor grid.
        RADIAL (str): Radially symmetric Lebesgue density sampled on radii.
    """
    ATOMIC = "atomic"
    GRID = "grid"
    RADIAL = "radial"

class EvalRule(str, Enum):
    """
    Enum for the rule used to evaluate a field away from its evaluation set.

    Attributes:
        NEAREST (str): Value of the nearest evaluation point.
        RADIAL_LINEAR (str): Linear interpolation in |x| between radial nodes.
    """
    NEAREST = "nearest"
    RADIAL_LINEAR = "radial-linear"

class EvalSetKind(str, Enum):
    """
    Enum for evaluation sets.

    Attributes:
        GRID (str): Active cell centres of a tensor grid (quadrature complete).
        RADIAL (str): Radial nodes along the first axis (quadrature complete).
        POINTS (str): Free point cloud (not quadrature complete).
    """
    GRID = "grid"
    RADIAL = "radial"
    POINTS = "points"

class CheckName(str, Enum):
    """
    Enum for the checks a scenario may request.

    Attributes:
        THM11 (str): Green-potential integrability conditions of the existence theorem.
        COR12 (str): Lebesgue-density sufficient conditions.
        ITERATED (str): Iterated pointwise inequalities for a list of exponents t.
        LEMMA_NORMS (str): Interaction, weighted-lemma and norm-lemma ratios.
        LEMMA31 (str): Riesz-measure energy comparison.
        LEMMA32 (str): L^p bound of Gμ by the generalized energy.
        RIESZ_ENERGY (str): Finite-energy equivalence for the Riesz measure.
        BEST_CONSTANT (str): Weighted norm inequality best-constant estimate.
        SOLVE (str): Minimal solution by Picard iteration.
        VERIFY (str): Verification of the converged solution.
    """
    THM11 = "thm11"
    COR12 = "cor12"
    ITERATED = "iterated"
    LEMMA_NORMS = "lemma26_27_28"
    LEMMA31 = "lemma31"
    LEMMA32 = "lemma32"
    RIESZ_ENERGY = "riesz_energy"
    BEST_CONSTANT = "best_constant"
    SOLVE = "solve"
    VERIFY = "verify"

class InequalityDirection(str, Enum):
    """
    Enum for the direction of the iterated inequality dictated by the exponent t.

    Attributes:
        UPPER (str): (Gσ)^t ≤ t G((Gσ)^{t-1} dσ), used when t ≥ 1.
        LOWER (str): (Gσ)^t ≥ t G((Gσ)^{t-1} dσ), used when 0 < t < 1.
    """
    UPPER = "upper"
    LOWER = "lower"
