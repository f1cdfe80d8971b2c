"""Plug-in estimators from samples and Monte Carlo verification of the bounds.

The empirical sandwich is pointwise: each retained draw satisfies x > nu, so
sum-based estimators inherit the ordering with zero tolerance. Sample data is
stored sorted with cached suffix sums, making a whole threshold grid cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import ComparisonRow, _check_threshold
from .distributions import Distribution, _check_order, _check_point
from .errors import InvalidInput

__all__ = [
    "Sample",
    "VerificationRow",
    "VerificationReport",
    "verify_sample",
    "monte_carlo_verify",
]


class Sample:
    """An immutable nonnegative sample, sorted ascending.

    Suffix sums of powers are cached per order, so evaluating estimators over
    a grid of thresholds costs one binary search per threshold. Strictness
    matters: estimators count draws with x > nu, never x == nu.
    """

    __slots__ = ("_values", "_suffix")

    def __init__(self, values) -> None:
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1:
            raise InvalidInput("sample must be one-dimensional")
        if arr.size < 1:
            raise InvalidInput("sample must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("sample values must be finite")
        if np.any(arr < 0.0):
            raise InvalidInput("sample values must be nonnegative")
        arr = np.sort(arr)
        arr.flags.writeable = False
        self._values = arr
        self._suffix: dict[int, np.ndarray] = {}

    @classmethod
    def from_file(cls, path) -> "Sample":
        """Read one nonnegative decimal per line; blank and '#' lines skipped."""
        values: list[float] = []
        with open(path, "r", encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                try:
                    value = float(text)
                except ValueError:
                    raise InvalidInput(
                        f"{path}: line {line_number}: not a number: {text!r}"
                    ) from None
                if not math.isfinite(value) or value < 0.0:
                    raise InvalidInput(
                        f"{path}: line {line_number}: values must be finite and nonnegative"
                    )
                values.append(value)
        if not values:
            raise InvalidInput(f"{path}: no sample values found")
        return cls(values)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def n(self) -> int:
        return int(self._values.size)

    def _suffix_sums(self, k: int) -> np.ndarray:
        # suffix[i] = sum of values[i:]**k, with a trailing 0 for the empty
        # suffix. Accumulating in extended precision keeps the pointwise
        # sandwich intact after the final rounding to double.
        cached = self._suffix.get(k)
        if cached is None:
            powered = self._values.astype(np.longdouble) ** k
            core = np.cumsum(powered[::-1])[::-1]
            cached = np.append(core, np.longdouble(0.0)).astype(float)
            self._suffix[k] = cached
        return cached

    def _cut(self, nu: float) -> int:
        """Index of the first value strictly greater than nu."""
        return int(np.searchsorted(self._values, nu, side="right"))

    def restricted_moment(self, nu: float, k: int = 1) -> float:
        """(1/n) * sum of x**k over draws with x > nu."""
        nu = _check_point("threshold", nu)
        k = _check_order(k)
        return float(self._suffix_sums(k)[self._cut(nu)]) / self.n

    def tail(self, nu: float) -> float:
        """Fraction of draws strictly above nu."""
        nu = _check_point("threshold", nu)
        return (self.n - self._cut(nu)) / self.n

    def mean(self) -> float:
        return float(self._suffix_sums(1)[0]) / self.n

    def markov_bounds(self, nu: float) -> ComparisonRow:
        """Empirical tail with enhanced and traditional first-moment bounds."""
        nu = _check_threshold(nu)
        idx = self._cut(nu)
        suffix = self._suffix_sums(1)
        tail = (self.n - idx) / self.n
        # Same operation order for both ratios so the suffix-sum ordering
        # survives rounding.
        enhanced = (float(suffix[idx]) / nu) / self.n
        traditional = (float(suffix[0]) / nu) / self.n
        return ComparisonRow(nu, tail, enhanced, traditional)


@dataclass(frozen=True)
class VerificationRow:
    """Empirical bounds at one threshold plus the count of ordering failures."""

    nu: float
    empirical_tail: float
    empirical_enhanced: float
    empirical_traditional: float
    violations: int


@dataclass(frozen=True)
class VerificationReport:
    """Result of checking the empirical sandwich over a threshold grid.

    max_violation is the largest (signed) ordering excess seen, 0.0 when the
    sandwich holds everywhere. max_tail_deviation compares empirical against
    analytic tails and is None when no distribution was involved (file mode).
    """

    n: int
    seed: int | None
    rows: tuple[VerificationRow, ...]
    max_violation: float
    max_tail_deviation: float | None = None

    @property
    def passed(self) -> bool:
        return all(row.violations == 0 for row in self.rows)

    def to_csv(self) -> str:
        lines = ["nu,empirical_tail,empirical_enhanced,empirical_traditional,violations"]
        for row in self.rows:
            lines.append(
                f"{row.nu:g},{row.empirical_tail!r},{row.empirical_enhanced!r},"
                f"{row.empirical_traditional!r},{row.violations}"
            )
        return "\n".join(lines)


def _verification_rows(sample: Sample, nu_grid) -> tuple[tuple[VerificationRow, ...], float]:
    rows = []
    max_violation = 0.0
    for nu in nu_grid:
        bounds = sample.markov_bounds(nu)
        gap_tail = bounds.tail - bounds.enhanced
        gap_bounds = bounds.enhanced - bounds.traditional
        violations = int(gap_tail > 0.0) + int(gap_bounds > 0.0)
        max_violation = max(max_violation, gap_tail, gap_bounds, 0.0)
        rows.append(
            VerificationRow(bounds.nu, bounds.tail, bounds.enhanced, bounds.traditional, violations)
        )
    return tuple(rows), max_violation


def verify_sample(sample: Sample, nu_grid) -> VerificationReport:
    """Check the empirical sandwich for an existing sample (no simulation)."""
    grid = [_check_threshold(nu) for nu in nu_grid]
    if not grid:
        raise InvalidInput("threshold grid must be nonempty")
    rows, max_violation = _verification_rows(sample, grid)
    return VerificationReport(sample.n, None, rows, max_violation)


def monte_carlo_verify(dist: Distribution, n: int, seed: int, nu_grid) -> VerificationReport:
    """Draw n inverse-CDF samples with a seeded PCG64 stream and verify.

    The same seed always reproduces the same draws, so reports compare
    byte-for-byte across runs and platforms.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidInput(f"n must be a positive integer, got {n!r}")
    if isinstance(seed, bool) or not isinstance(seed, int) or not (0 <= seed < 2**64):
        raise InvalidInput(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    grid = [_check_threshold(nu) for nu in nu_grid]
    if not grid:
        raise InvalidInput("threshold grid must be nonempty")
    rng = np.random.default_rng(seed)
    sample = Sample(dist._quantile_batch(rng.random(n)))
    rows, max_violation = _verification_rows(sample, grid)
    max_tail_deviation = max(
        abs(row.empirical_tail - dist.tail(row.nu)) for row in rows
    )
    return VerificationReport(n, seed, rows, max_violation, max_tail_deviation)
