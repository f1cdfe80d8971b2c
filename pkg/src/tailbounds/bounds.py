"""Tail bounds built from restricted expectations.

For a nonnegative random variable and threshold nu > 0, each bound family
produces a sandwich: the true tail probability is at most the enhanced bound
(numerator restricted to the tail event) which is at most the traditional
bound (full expectation). Values are reported as computed; any clamping to 1
is presentation-only and lives in the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import Distribution, Exponential, _check_exponent, _check_order
from .errors import DomainError, InvalidBracket, InvalidInput, NonConvergence
from .numerics import minimize_unimodal

__all__ = [
    "ComparisonRow",
    "ChernoffResult",
    "BoundKind",
    "markov_bounds",
    "moment_bounds",
    "chernoff_bounds",
    "optimize_chernoff",
    "evaluate_bound",
]

_SANDWICH_SLACK = 1e-9
_EXP_BRACKET_MARGIN = 1e-6
_DEFAULT_T_MAX_SCALE = 50.0


def _check_threshold(nu: float) -> float:
    if isinstance(nu, bool) or not isinstance(nu, (int, float)):
        raise InvalidInput(f"threshold must be a real number, got {nu!r}")
    nu = float(nu)
    if not (math.isfinite(nu) and nu > 0.0):
        raise InvalidInput(f"threshold must be finite and positive, got {nu!r}")
    return nu


@dataclass(frozen=True)
class ComparisonRow:
    """One threshold's tail probability and its two bounds.

    Construction enforces tail <= enhanced <= traditional up to a slack of
    1e-9 * max(1, traditional), which absorbs quadrature noise but rejects
    genuinely inconsistent values.
    """

    nu: float
    tail: float
    enhanced: float
    traditional: float

    def __post_init__(self) -> None:
        slack = _SANDWICH_SLACK * max(1.0, self.traditional)
        if self.tail > self.enhanced + slack or self.enhanced > self.traditional + slack:
            raise InvalidInput(
                f"bound sandwich violated at nu={self.nu}: "
                f"tail={self.tail}, enhanced={self.enhanced}, traditional={self.traditional}"
            )


@dataclass(frozen=True)
class ChernoffResult:
    """Outcome of a Chernoff-bound optimization over the exponent t."""

    t_star: float
    bound: float
    variant: str
    at_boundary: bool


@dataclass(frozen=True)
class BoundKind:
    """Selector for a single bound: family, enhanced/traditional, parameters.

    family is one of "markov", "moment", "chernoff". Moment kinds carry the
    order k; Chernoff kinds carry the exponent t.
    """

    family: str
    enhanced: bool
    k: int = 1
    t: float | None = None

    def __post_init__(self) -> None:
        if self.family not in ("markov", "moment", "chernoff"):
            raise InvalidInput(f"unknown bound family {self.family!r}")
        _check_order(self.k)
        if self.family == "chernoff":
            if self.t is None:
                raise InvalidInput("chernoff bound kinds require an exponent t")
            if _check_exponent(self.t) < 0.0:
                raise DomainError(f"chernoff exponent must be >= 0, got {self.t!r}")


def moment_bounds(dist: Distribution, nu: float, k: int = 1) -> ComparisonRow:
    """Tail, enhanced, and traditional moment bounds of order k at nu."""
    nu = _check_threshold(nu)
    k = _check_order(k)
    scale = nu**k
    enhanced = dist.restricted_moment(nu, k) / scale
    traditional = dist.restricted_moment(0.0, k) / scale
    return ComparisonRow(nu, dist.tail(nu), enhanced, traditional)


def markov_bounds(dist: Distribution, nu: float) -> ComparisonRow:
    """First-moment bounds; identical code path to moment_bounds with k=1."""
    return moment_bounds(dist, nu, 1)


def chernoff_bounds(dist: Distribution, nu: float, t: float) -> ComparisonRow:
    """Exponential-family bounds at a fixed exponent t >= 0.

    At t = 0 the enhanced bound degenerates to the tail itself and the
    traditional bound to 1.
    """
    nu = _check_threshold(nu)
    t = _check_exponent(t)
    if t < 0.0:
        raise DomainError(f"chernoff exponent must be >= 0, got {t!r}")
    damping = math.exp(-t * nu)
    enhanced = dist.restricted_mgf(nu, t) * damping
    traditional = dist.restricted_mgf(0.0, t) * damping
    return ComparisonRow(nu, dist.tail(nu), enhanced, traditional)


def optimize_chernoff(
    dist: Distribution,
    nu: float,
    variant: str = "enhanced",
    t_max: float | None = None,
    tol: float = 1e-9,
) -> ChernoffResult:
    """Minimize the chosen Chernoff bound over t in [0, t_max].

    For exponential distributions the bracket stops just short of the rate
    (the MGF blows up there); otherwise t_max defaults to 50/nu. Exponents
    where the integrand overflows evaluate as +inf, which keeps the search
    well-defined; the minimizer of a log-convex objective never sits there.
    A boundary optimum (commonly t* = 0 for the enhanced variant) is reported
    via at_boundary.
    """
    nu = _check_threshold(nu)
    if variant not in ("enhanced", "traditional"):
        raise InvalidInput(f"variant must be 'enhanced' or 'traditional', got {variant!r}")
    if isinstance(dist, Exponential):
        hi = dist.rate * (1.0 - _EXP_BRACKET_MARGIN)
        if t_max is not None:
            hi = min(hi, float(t_max))
    else:
        hi = float(t_max) if t_max is not None else _DEFAULT_T_MAX_SCALE / nu
    if not (math.isfinite(hi) and hi > 0.0):
        raise InvalidInput(f"t_max must give a positive bracket, got {hi!r}")

    restricted_from = nu if variant == "enhanced" else 0.0

    def objective(t: float) -> float:
        try:
            return dist.restricted_mgf(restricted_from, t) * math.exp(-t * nu)
        except (InvalidInput, NonConvergence, DomainError, OverflowError):
            return math.inf

    t_star, bound = minimize_unimodal(objective, 0.0, hi, tol)
    if math.isinf(bound):
        raise NonConvergence(f"chernoff objective not finite anywhere on [0, {hi}]")
    at_boundary = (t_star - 0.0) <= 2.0 * tol or (hi - t_star) <= 2.0 * tol
    return ChernoffResult(t_star, bound, variant, at_boundary)


def evaluate_bound(dist: Distribution, nu: float, kind: BoundKind) -> float:
    """Value of a single bound selected by kind."""
    nu = _check_threshold(nu)
    if kind.family in ("markov", "moment"):
        k = 1 if kind.family == "markov" else kind.k
        start = nu if kind.enhanced else 0.0
        return dist.restricted_moment(start, k) / nu**k
    start = nu if kind.enhanced else 0.0
    return dist.restricted_mgf(start, kind.t) * math.exp(-kind.t * nu)
