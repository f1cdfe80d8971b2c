"""Nonnegative distributions with tail, restricted-moment, and restricted-MGF machinery.

A restricted moment is the contribution of the upper tail to a raw moment:
E[X^k; X > nu] for a threshold nu >= 0. Restricted MGFs are the analogous
quantity for exp(t*X). Closed forms are used where they exist; everything else
goes through the shared semi-infinite quadrature in `numerics`.
"""

from __future__ import annotations

import math
import operator
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import erfinv

from .errors import DomainError, InvalidInput, NonConvergence
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    find_root_monotone,
    integrate_semi_infinite,
)

__all__ = [
    "Distribution",
    "Exponential",
    "HalfNormal",
    "Generic",
    "parse_distribution",
]

_SQRT_2 = math.sqrt(2.0)
_NORMALIZATION_TOL = 1e-6
_MEAN_HINT_REL_TOL = 1e-3
_QUANTILE_BRACKET_CAP = 2.0**60


def _check_point(name: str, x: float) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float, np.floating, np.integer)):
        raise InvalidInput(f"{name} must be a real number, got {x!r}")
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise InvalidInput(f"{name} must be finite and nonnegative, got {x!r}")
    return x


def _check_order(k: int) -> int:
    if isinstance(k, bool):
        raise InvalidInput(f"moment order must be an integer >= 1, got {k!r}")
    try:
        k = operator.index(k)
    except TypeError:
        raise InvalidInput(f"moment order must be an integer >= 1, got {k!r}") from None
    if k < 1:
        raise InvalidInput(f"moment order must be an integer >= 1, got {k!r}")
    return k


def _check_exponent(t: float) -> float:
    if isinstance(t, bool) or not isinstance(t, (int, float, np.floating, np.integer)):
        raise InvalidInput(f"MGF exponent must be a real number, got {t!r}")
    t = float(t)
    if not math.isfinite(t):
        raise InvalidInput(f"MGF exponent must be finite, got {t!r}")
    return t


class Distribution(ABC):
    """A continuous distribution supported on [0, inf).

    Subclasses provide the density and tail; quantiles, quadrature-backed
    moments, and MGFs are shared. Instances are immutable and safe to share
    across threads.
    """

    config: QuadratureConfig

    @abstractmethod
    def pdf(self, x):
        """Density at x; accepts scalars or numpy arrays elementwise."""

    @abstractmethod
    def tail(self, x: float) -> float:
        """P(X > x) for scalar x >= 0."""

    @abstractmethod
    def cdf(self, x: float) -> float:
        """P(X <= x) for scalar x >= 0."""

    @abstractmethod
    def restricted_moment(self, nu: float, k: int = 1) -> float:
        """E[X^k; X > nu]."""

    @abstractmethod
    def restricted_mgf(self, nu: float, t: float) -> float:
        """E[exp(t X); X > nu] for t in the MGF domain."""

    def mean(self) -> float:
        return self.restricted_moment(0.0, 1)

    def quantile(self, p: float) -> float:
        """Inverse CDF via bisection; p must lie strictly inside (0, 1).

        The bracket starts at [0, 1] and the upper end doubles until it
        covers p.
        """
        if isinstance(p, bool) or not isinstance(p, (int, float, np.floating)):
            raise InvalidInput(f"probability must be a real number, got {p!r}")
        p = float(p)
        if not (0.0 < p < 1.0):  # NaN fails this chain too
            raise InvalidInput(f"probability must lie strictly inside (0, 1), got {p!r}")
        hi = 1.0
        while self.cdf(hi) < p:
            hi *= 2.0
            if hi > _QUANTILE_BRACKET_CAP:
                raise NonConvergence(f"could not bracket the {p} quantile")
        return find_root_monotone(lambda x: self.cdf(x) - p, 0.0, hi, tol=1e-12)

    def _mgf_integrand(self, t: float) -> Callable[[np.ndarray], np.ndarray]:
        # exp(t x) alone can overflow at sample points far beyond where the
        # density has any mass; combining the factors in log space keeps the
        # product finite whenever the true value is, and maps zero density to
        # an exact zero.
        pdf = self.pdf

        def integrand(x: np.ndarray) -> np.ndarray:
            density = np.asarray(pdf(x), dtype=float)
            with np.errstate(divide="ignore"):
                return np.exp(t * x + np.log(density))

        return integrand

    def restricted_moment_quadrature(
        self, nu: float, k: int = 1, config: QuadratureConfig | None = None
    ) -> float:
        """E[X^k; X > nu] computed by quadrature regardless of closed forms."""
        nu = _check_point("threshold", nu)
        k = _check_order(k)
        pdf = self.pdf
        return integrate_semi_infinite(
            lambda x: x**k * pdf(x), nu, config or self.config
        )

    def restricted_mgf_quadrature(
        self, nu: float, t: float, config: QuadratureConfig | None = None
    ) -> float:
        """E[exp(t X); X > nu] computed by quadrature regardless of closed forms."""
        nu = _check_point("threshold", nu)
        t = _check_exponent(t)
        return integrate_semi_infinite(self._mgf_integrand(t), nu, config or self.config)

    def _quantile_batch(self, u: np.ndarray) -> np.ndarray:
        """Inverse CDF applied to an array of probabilities in [0, 1)."""
        return np.array([self.quantile(float(p)) if p > 0.0 else 0.0 for p in u])


@dataclass(frozen=True)
class Exponential(Distribution):
    """Exponential distribution with the given rate (mean = 1/rate)."""

    rate: float
    config: QuadratureConfig = DEFAULT_QUADRATURE

    def __post_init__(self) -> None:
        if not (isinstance(self.rate, (int, float)) and math.isfinite(self.rate) and self.rate > 0):
            raise InvalidInput(f"rate must be finite and positive, got {self.rate!r}")
        object.__setattr__(self, "rate", float(self.rate))

    def pdf(self, x):
        return self.rate * np.exp(-self.rate * x)

    def tail(self, x: float) -> float:
        x = _check_point("x", x)
        return math.exp(-self.rate * x)

    def cdf(self, x: float) -> float:
        x = _check_point("x", x)
        return -math.expm1(-self.rate * x)

    def restricted_moment(self, nu: float, k: int = 1) -> float:
        # Reduce to the unit-rate case: E[X^k; X > nu] with rate r equals
        # r**-k * k! * exp(-m) * sum_{j<=k} m^j / j! at m = r * nu.
        nu = _check_point("threshold", nu)
        k = _check_order(k)
        m = self.rate * nu
        term = 1.0
        total = 1.0
        for j in range(1, k + 1):
            term *= m / j
            total += term
        return math.factorial(k) * math.exp(-m) * total / self.rate**k

    def _mgf_integrand(self, t: float) -> Callable[[np.ndarray], np.ndarray]:
        # Fusing exp(t x) with the density avoids inf * 0 as t approaches the
        # rate; the combined exponent is negative on the MGF domain.
        rate = self.rate
        return lambda x: rate * np.exp((t - rate) * x)

    def restricted_mgf(self, nu: float, t: float) -> float:
        nu = _check_point("threshold", nu)
        t = _check_exponent(t)
        if t == 0.0:
            return self.tail(nu)
        if t >= self.rate:
            raise DomainError(
                f"exponential(rate={self.rate}) has no MGF at t={t}: requires t < rate"
            )
        return self.rate * math.exp(-(self.rate - t) * nu) / (self.rate - t)

    def _quantile_batch(self, u: np.ndarray) -> np.ndarray:
        return -np.log1p(-u) / self.rate


@dataclass(frozen=True)
class HalfNormal(Distribution):
    """Absolute value of a centered normal with scale sigma (mean = sigma*sqrt(2/pi))."""

    sigma: float
    config: QuadratureConfig = DEFAULT_QUADRATURE

    def __post_init__(self) -> None:
        if not (
            isinstance(self.sigma, (int, float)) and math.isfinite(self.sigma) and self.sigma > 0
        ):
            raise InvalidInput(f"sigma must be finite and positive, got {self.sigma!r}")
        object.__setattr__(self, "sigma", float(self.sigma))

    def pdf(self, x):
        coef = math.sqrt(2.0 / math.pi) / self.sigma
        return coef * np.exp(-np.square(x) / (2.0 * self.sigma**2))

    def tail(self, x: float) -> float:
        # erfc keeps full relative accuracy deep in the tail where 1 - cdf
        # would cancel.
        x = _check_point("x", x)
        return math.erfc(x / (self.sigma * _SQRT_2))

    def cdf(self, x: float) -> float:
        x = _check_point("x", x)
        return math.erf(x / (self.sigma * _SQRT_2))

    def restricted_moment(self, nu: float, k: int = 1) -> float:
        nu = _check_point("threshold", nu)
        k = _check_order(k)
        if k == 1:
            return self.sigma * math.sqrt(2.0 / math.pi) * math.exp(
                -(nu**2) / (2.0 * self.sigma**2)
            )
        return self.restricted_moment_quadrature(nu, k)

    def _mgf_integrand(self, t: float) -> Callable[[np.ndarray], np.ndarray]:
        # Fusing exp(t x) with the Gaussian factor avoids inf * 0 at large x.
        coef = math.sqrt(2.0 / math.pi) / self.sigma
        two_var = 2.0 * self.sigma**2
        return lambda x: coef * np.exp(t * x - np.square(x) / two_var)

    def restricted_mgf(self, nu: float, t: float) -> float:
        nu = _check_point("threshold", nu)
        t = _check_exponent(t)
        if t == 0.0:
            return self.tail(nu)
        return self.restricted_mgf_quadrature(nu, t)

    def _quantile_batch(self, u: np.ndarray) -> np.ndarray:
        return self.sigma * _SQRT_2 * erfinv(u)


def _as_vectorized(density: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Accept densities written for scalars or for arrays."""
    probe = np.array([0.25, 1.0, 4.0])
    try:
        out = np.asarray(density(probe), dtype=float)
        if out.shape == probe.shape:
            return density
    except Exception:
        pass
    vectorized = np.vectorize(lambda x: float(density(float(x))), otypes=[float])
    return lambda x: vectorized(x)


class Generic(Distribution):
    """Distribution defined by a user-supplied density on [0, inf).

    The density may be written for scalars or numpy arrays. Construction
    checks that it integrates to 1 (tolerance 1e-6) and, when mean_hint is
    given, that the computed mean agrees with it to 0.1% relative. All
    quantities are computed by quadrature; the hint is never used in math.
    """

    def __init__(
        self,
        density: Callable,
        mean_hint: float | None = None,
        config: QuadratureConfig = DEFAULT_QUADRATURE,
    ) -> None:
        if not callable(density):
            raise InvalidInput("density must be callable")
        self.config = config
        self._density = _as_vectorized(density)
        probe = np.asarray(self._density(np.array([0.25, 1.0, 4.0])), dtype=float)
        if not np.all(np.isfinite(probe)) or np.any(probe < 0.0):
            raise InvalidInput("density must be finite and nonnegative")
        total = integrate_semi_infinite(self._density, 0.0, config)
        if abs(total - 1.0) > _NORMALIZATION_TOL:
            raise InvalidInput(
                f"density integrates to {total!r}, not 1 (tolerance {_NORMALIZATION_TOL})"
            )
        self.mean_hint = None if mean_hint is None else float(mean_hint)
        if self.mean_hint is not None:
            computed = self.restricted_moment(0.0, 1)
            if abs(computed - self.mean_hint) > _MEAN_HINT_REL_TOL * max(1.0, abs(self.mean_hint)):
                raise InvalidInput(
                    f"computed mean {computed!r} disagrees with mean_hint {self.mean_hint!r}"
                )

    def pdf(self, x):
        return self._density(x)

    def tail(self, x: float) -> float:
        # Integrating the density upward from x keeps far-tail values accurate;
        # it equals 1 - cdf(x) because the density is normalized.
        x = _check_point("x", x)
        return integrate_semi_infinite(self._density, x, self.config)

    def cdf(self, x: float) -> float:
        x = _check_point("x", x)
        return 1.0 - self.tail(x)

    def restricted_moment(self, nu: float, k: int = 1) -> float:
        return self.restricted_moment_quadrature(nu, k)

    def restricted_mgf(self, nu: float, t: float) -> float:
        nu = _check_point("threshold", nu)
        t = _check_exponent(t)
        if t == 0.0:
            return self.tail(nu)
        return self.restricted_mgf_quadrature(nu, t)


def _positive_param(spec: str, key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise InvalidInput(f"bad distribution spec {spec!r}: {key} must be a number") from None
    if not (math.isfinite(value) and value > 0):
        raise InvalidInput(f"bad distribution spec {spec!r}: {key} must be finite and positive")
    return value


def parse_distribution(spec: str, config: QuadratureConfig = DEFAULT_QUADRATURE) -> Distribution:
    """Build a distribution from a spec string.

    Accepted forms: exponential:rate=<r>, exponential:mean=<m>,
    halfnormal:sigma=<s>, halfnormal:mean=<m>.
    """
    if not isinstance(spec, str):
        raise InvalidInput(f"distribution spec must be a string, got {spec!r}")
    name, sep, rest = spec.strip().partition(":")
    key, sep2, raw = rest.partition("=")
    if not sep or not sep2 or not key or not raw:
        raise InvalidInput(
            f"bad distribution spec {spec!r}: expected <name>:<param>=<value>"
        )
    name = name.strip().lower()
    key = key.strip().lower()
    value = _positive_param(spec, key, raw.strip())
    if name == "exponential":
        if key == "rate":
            return Exponential(value, config)
        if key == "mean":
            return Exponential(1.0 / value, config)
        raise InvalidInput(f"bad distribution spec {spec!r}: exponential takes rate= or mean=")
    if name == "halfnormal":
        if key == "sigma":
            return HalfNormal(value, config)
        if key == "mean":
            # mean = sigma * sqrt(2/pi), so sigma = mean * sqrt(pi/2)
            return HalfNormal(value * math.sqrt(math.pi / 2.0), config)
        raise InvalidInput(f"bad distribution spec {spec!r}: halfnormal takes sigma= or mean=")
    raise InvalidInput(f"bad distribution spec {spec!r}: unknown distribution {name!r}")
