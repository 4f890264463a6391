"""
Test utilities for loading YAML-based test cases and building the small problems
shared by several test modules.

This module provides:
    - A helper function to load test cases from a YAML file for use in unit tests or
        validation routines.
    - Builders for the radial torsion and homogeneous problems on the unit ball.
    - TypedDict definitions for structured test data, such as exponent triples.
"""

import re
from pathlib import Path
from typing import Any, TypedDict

import numpy as np
import yaml

from subgreen.common.enums import DomainKind
from subgreen.core.measures import RadialDensity
from subgreen.model.domain import Domain
from subgreen.model.field import EvalSet

# ----------------------------
# Util Functions
# ----------------------------

def load_test_cases(path: Path) -> Any:
    """
    Load test cases from a YAML file.

    Args:
        path (Path): Path to the YAML file containing test cases.

    Returns:
        Any: Parsed test cases from the YAML file. The structure depends on the file
            contents.
    """
    with path.open(encoding="utf-8") as f:
        return yaml.safe_load(f)

def strip_ansi(text: str) -> str:
    """
    Remove ANSI color and formatting codes, such as those used in terminal
    output for colored text.

    Args:
        text (str): The input string that may contain ANSI escape codes.

    Returns:
        str: The input string with ANSI codes removed.
    """
    return re.sub(r"\x1B\[[0-?]*[ -/]*[@-~]", "", text)

def unit_ball(dim: int = 3) -> Domain:
    """
    The unit ball of the given dimension.
    """
    return Domain(DomainKind.UNIT_BALL, dim)

def radial_constant(
        domain: Domain,
        value: float,
        nodes: int = 512,
        radius: float = 1.0
    ) -> RadialDensity:
    """
    A constant radial density on [0, radius] sampled at equispaced radii.

    Args:
        domain (Domain): The unit ball or the whole space.
        value (float): The density value (0 gives the zero measure).
        nodes (int): Number of radial nodes.
        radius (float): Outer radius.

    Returns:
        RadialDensity: The measure.
    """
    radii = np.linspace(0.0, radius, nodes)
    return RadialDensity(domain, radii, np.full(nodes, float(value)))

def radial_eval_set(domain: Domain, nodes: int = 512) -> EvalSet:
    """
    Radial evaluation set on [0, 1] with equispaced nodes.
    """
    return EvalSet.radial(domain, np.linspace(0.0, 1.0, nodes))

def torsion_profile(radii: np.ndarray) -> np.ndarray:
    """
    The torsion function (1 - r²)/6 of the unit ball in three dimensions.
    """
    return (1.0 - np.asarray(radii) ** 2) / 6.0

# ----------------------------
# TypedDict Definitions for Tests
# ----------------------------

class ExponentTripleDict(TypedDict):
    """
    TypedDict for representing an (n, p, q) problem in test cases.

    Attributes:
        n (int): Dimension.
        p (float): Target integrability exponent.
        q (float): Sublinear exponent.
    """
    n: int
    p: float
    q: float
