"""Sharpened Markov-type tail bounds from restricted expectations.

Restricting the expectation in Markov's inequality to the tail event gives a
bound that always sits between the true tail probability and the classical
bound. This package computes those bounds (first-moment, higher-moment, and
Chernoff flavors) for built-in and user-supplied distributions, estimates them
from data, and verifies the orderings by seeded Monte Carlo.
"""

from .bounds import (
    BoundKind,
    ChernoffResult,
    ComparisonRow,
    chernoff_bounds,
    evaluate_bound,
    markov_bounds,
    moment_bounds,
    optimize_chernoff,
)
from .distributions import (
    Distribution,
    Exponential,
    Generic,
    HalfNormal,
    parse_distribution,
)
from .empirical import (
    Sample,
    VerificationReport,
    VerificationRow,
    monte_carlo_verify,
    verify_sample,
)
from .errors import (
    DomainError,
    InvalidBracket,
    InvalidInput,
    NonConvergence,
    TailBoundsError,
)
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    find_root_monotone,
    integrate_semi_infinite,
    minimize_unimodal,
)

__version__ = "0.1.0"

__all__ = [
    "BoundKind",
    "ChernoffResult",
    "ComparisonRow",
    "chernoff_bounds",
    "evaluate_bound",
    "markov_bounds",
    "moment_bounds",
    "optimize_chernoff",
    "Distribution",
    "Exponential",
    "Generic",
    "HalfNormal",
    "parse_distribution",
    "Sample",
    "VerificationReport",
    "VerificationRow",
    "monte_carlo_verify",
    "verify_sample",
    "DomainError",
    "InvalidBracket",
    "InvalidInput",
    "NonConvergence",
    "TailBoundsError",
    "DEFAULT_QUADRATURE",
    "QuadratureConfig",
    "find_root_monotone",
    "integrate_semi_infinite",
    "minimize_unimodal",
    "__version__",
]
