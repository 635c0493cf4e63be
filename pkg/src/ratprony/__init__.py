"""Rational Prony and generalized Bernoulli pole recovery in the Hardy space H2.

The package recovers the poles and coefficients of
``H = sum_k c_k / (1 - conj(lam_k) z)`` from samples on the unit circle,
either with the operator (rational) Prony method or with the generalized
Bernoulli iteration over Takenaka-Malmquist systems.  Exponential moment
sequences are handled by lifting them to such functions first.
"""

from .bernoulli import GBConfig, gb_find_dominant, gb_recover_iterative
from .errors import (
    DiskPointError,
    InsufficientDataError,
    InvalidInputError,
    NonConvergenceError,
    RankDeficiencyError,
    RatPronyError,
    SingularDiagonalError,
)
from .hardy import (
    CircleSampling,
    GeneratingSequence,
    RationalAtomSet,
    blaschke_eval,
    h2_inner,
    tm_basis,
    tm_eval,
)
from .lifting import LiftedProblem, lift
from .linear import compare_conditioning, tm_triangular_recover
from .prony import (
    MomentSequence,
    RecoveryResult,
    classical_prony,
    grop_moments,
    grop_recover,
    match_poles,
    solve_prony,
    vandermonde_recover,
)

__version__ = "0.1.0"

__all__ = [
    "CircleSampling",
    "DiskPointError",
    "GBConfig",
    "GeneratingSequence",
    "InsufficientDataError",
    "InvalidInputError",
    "LiftedProblem",
    "MomentSequence",
    "NonConvergenceError",
    "RankDeficiencyError",
    "RatPronyError",
    "RationalAtomSet",
    "RecoveryResult",
    "SingularDiagonalError",
    "blaschke_eval",
    "classical_prony",
    "compare_conditioning",
    "gb_find_dominant",
    "gb_recover_iterative",
    "grop_moments",
    "grop_recover",
    "h2_inner",
    "lift",
    "match_poles",
    "solve_prony",
    "tm_basis",
    "tm_eval",
    "tm_triangular_recover",
    "vandermonde_recover",
]
