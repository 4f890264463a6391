"""
Numerical defaults and vocabularies shared by the library and the CLI.

This module defines the overflow guard of the Picard iteration, default solver 
settings, the default tolerance map of a scenario, sample and trial counts of the 
randomized checks, and the set of known scenario check names.
"""

from .enums import CheckName

PACKAGE_VERSION: str = "0.1.0"

OVERFLOW_GUARD: float = 1e300

DEFAULT_MAX_ITER: int = 200
DEFAULT_REL_TOL: float = 1e-8

# Random test functions of the norm checks and Halton sample count of the iterated
# check.
DEFAULT_LEMMA_TRIALS: int = 20
DEFAULT_SAMPLE_POINTS: int = 100

DEFAULT_BEST_CONSTANT_TRIALS: int = 8
DEFAULT_BEST_CONSTANT_STEPS: int = 60

# Node-count ceiling (targets x sources) below which a kernel matrix is cached.
KERNEL_CACHE_LIMIT: int = 20_000_000
KERNEL_CHUNK_SIZE: int = 512

DEFAULT_TOLERANCES: dict[str, float] = {
    "lower_bound_margin": 1e-6,
    "monotonicity": 1e-10,
    "iterated": 1e-3,
    "residual": 1e-4,
    "clipped_fraction": 0.05,
}

# Exit codes of `subgreen run`.
EXIT_OK: int = 0
EXIT_INVALID: int = 1
EXIT_CONDITIONS_FAILED: int = 2

KNOWN_CHECKS: list[str] = [c.value for c in CheckName]

# Execution order of checks, independent of the order requested in a scenario.
CHECK_ORDER: list[CheckName] = [
    CheckName.THM11,
    CheckName.COR12,
    CheckName.ITERATED,
    CheckName.LEMMA_NORMS,
    CheckName.BEST_CONSTANT,
    CheckName.SOLVE,
    CheckName.VERIFY,
    CheckName.LEMMA31,
    CheckName.LEMMA32,
    CheckName.RIESZ_ENERGY,
]
