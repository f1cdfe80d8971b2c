"""Numerical kernels: semi-infinite quadrature, bisection, golden-section search.

The quadrature routine maps [a, inf) onto [0, 1) via x = a + u/(1-u) and
integrates the transformed function with adaptive Gauss-Kronrod 7/15 panels.
Integrands must accept 1-D numpy arrays and evaluate elementwise; panels are
evaluated in single vectorized calls so tight grids stay cheap.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidBracket, InvalidInput, NonConvergence

__all__ = [
    "QuadratureConfig",
    "DEFAULT_QUADRATURE",
    "integrate_semi_infinite",
    "find_root_monotone",
    "minimize_unimodal",
]

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]. The 15 Kronrod nodes are
# ordered ascending; the embedded 7-point Gauss rule uses the odd indices.
_GK_POS = np.array([
    0.99145537112081264, 0.94910791234275852, 0.86486442335976907,
    0.74153118559939444, 0.58608723546769113, 0.40584515137739717,
    0.20778495500789847,
])
_GK_WPOS = np.array([
    0.022935322010529225, 0.063092092629978553, 0.10479001032225018,
    0.14065325971552592, 0.16900472663926790, 0.19035057806478541,
    0.20443294007529889,
])
_NODES = np.concatenate([-_GK_POS, [0.0], _GK_POS[::-1]])
_WEIGHTS_K = np.concatenate([_GK_WPOS, [0.20948214108472783], _GK_WPOS[::-1]])
_G_WPOS = np.array([0.12948496616886969, 0.27970539148927664, 0.38183005050511894])
_WEIGHTS_G = np.concatenate([_G_WPOS, [0.41795918367346939], _G_WPOS[::-1]])

# Initial breakpoints in u-space. Geometric spacing toward u = 1 keeps far-out
# structure (x grows like 1/(1-u)) visible to the first error estimates.
_INITIAL_BREAKS = (0.0, 0.5, 0.75, 0.875, 0.9375, 0.96875, 0.984375, 1.0)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budget for adaptive quadrature.

    Refinement stops once the estimated error is below
    max(abs_tol, rel_tol * |integral|); the tolerances may not both be zero.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        for name in ("abs_tol", "rel_tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
                raise InvalidInput(f"{name} must be a finite nonnegative number, got {value!r}")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise InvalidInput("abs_tol and rel_tol may not both be zero")
        if not (isinstance(self.max_subdivisions, int) and self.max_subdivisions >= 1):
            raise InvalidInput(
                f"max_subdivisions must be a positive integer, got {self.max_subdivisions!r}"
            )


DEFAULT_QUADRATURE = QuadratureConfig()


def _eval_panels(
    g: Callable[[np.ndarray], np.ndarray],
    lows: np.ndarray,
    highs: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Apply the 7/15 pair to each panel; returns (integrals, error estimates)."""
    centers = 0.5 * (lows + highs)
    half = 0.5 * (highs - lows)
    points = centers[:, None] + half[:, None] * _NODES[None, :]
    values = np.asarray(g(points.ravel()), dtype=float)
    if values.shape != (points.size,):
        raise InvalidInput("integrand must return one value per evaluation point")
    if not np.all(np.isfinite(values)):
        raise InvalidInput("integrand returned a non-finite value")
    values = values.reshape(points.shape)
    kronrod = half * (values @ _WEIGHTS_K)
    gauss = half * (values[:, 1::2] @ _WEIGHTS_G)
    return kronrod, np.abs(kronrod - gauss)


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """Integrate f over [a, inf).

    f must accept a 1-D numpy array of abscissae and return values elementwise;
    it must also decay fast enough for the integral to exist. Raises
    InvalidInput if f produces a non-finite value and NonConvergence if the
    subdivision budget runs out before the tolerances are met.
    """
    if not (isinstance(a, (int, float)) and math.isfinite(a)):
        raise InvalidInput(f"lower limit must be finite, got {a!r}")

    def transformed(u: np.ndarray) -> np.ndarray:
        w = 1.0 - u
        x = a + u / w
        return np.asarray(f(x), dtype=float) / (w * w)

    lows = np.array(_INITIAL_BREAKS[:-1])
    highs = np.array(_INITIAL_BREAKS[1:])
    vals, errs = _eval_panels(transformed, lows, highs)

    heap: list[tuple[float, int, float, float, float]] = []
    seq = 0
    panel_vals: dict[int, float] = {}
    panel_errs: dict[int, float] = {}
    for lo, hi, v, e in zip(lows, highs, vals, errs):
        heapq.heappush(heap, (-e, seq, lo, hi, v))
        panel_vals[seq] = v
        panel_errs[seq] = e
        seq += 1

    splits = 0
    while True:
        total = math.fsum(panel_vals.values())
        err_total = math.fsum(panel_errs.values())
        if err_total <= max(config.abs_tol, config.rel_tol * abs(total)):
            return total
        if splits >= config.max_subdivisions:
            raise NonConvergence(
                f"quadrature needed more than {config.max_subdivisions} subdivisions "
                f"(estimated error {err_total:.3e})"
            )
        _, key, lo, hi, _ = heapq.heappop(heap)
        del panel_vals[key], panel_errs[key]
        mid = 0.5 * (lo + hi)
        sub_vals, sub_errs = _eval_panels(
            transformed, np.array([lo, mid]), np.array([mid, hi])
        )
        for new_lo, new_hi, v, e in zip((lo, mid), (mid, hi), sub_vals, sub_errs):
            heapq.heappush(heap, (-e, seq, new_lo, new_hi, v))
            panel_vals[seq] = v
            panel_errs[seq] = e
            seq += 1
        splits += 1


def _checked_scalar(g: Callable[[float], float], x: float, allow_inf: bool = False) -> float:
    value = float(g(x))
    if math.isnan(value) or (not allow_inf and math.isinf(value)):
        raise InvalidInput(f"function returned a non-finite value at {x!r}")
    return value


def find_root_monotone(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
) -> float:
    """Locate the root of a monotone function by bisection.

    The caller supplies a bracket [lo, hi] with a sign change (endpoint zeros
    are accepted); raises InvalidBracket otherwise. Returns the bracket
    midpoint once the width is at most tol.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise InvalidInput(f"bracket endpoints must be finite with lo < hi, got [{lo!r}, {hi!r}]")
    if not (tol > 0 and math.isfinite(tol)):
        raise InvalidInput(f"tol must be a positive finite number, got {tol!r}")
    f_lo = _checked_scalar(g, lo)
    f_hi = _checked_scalar(g, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise InvalidBracket(f"no sign change on [{lo}, {hi}]: g gives {f_lo} and {f_hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break  # bracket narrower than float resolution
        f_mid = _checked_scalar(g, mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def minimize_unimodal(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-9,
) -> tuple[float, float]:
    """Minimize a unimodal function on [lo, hi] by golden-section search.

    Returns (argmin, minimum). Boundary minima are legal: after the interior
    search converges, the endpoint values are compared against the interior
    candidate and an endpoint wins when it is at least as small. The function
    may return +inf (treated as a very bad value) but not NaN.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidInput(f"bracket endpoints must be finite, got [{lo!r}, {hi!r}]")
    if not lo < hi:
        raise InvalidBracket(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if not (tol > 0 and math.isfinite(tol)):
        raise InvalidInput(f"tol must be a positive finite number, got {tol!r}")

    a, b = lo, hi
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1 = _checked_scalar(g, x1, allow_inf=True)
    f2 = _checked_scalar(g, x2, allow_inf=True)
    while b - a > tol and x1 < x2:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = _checked_scalar(g, x1, allow_inf=True)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = _checked_scalar(g, x2, allow_inf=True)

    interior = 0.5 * (a + b)
    candidates = (
        (interior, _checked_scalar(g, interior, allow_inf=True)),
        (lo, _checked_scalar(g, lo, allow_inf=True)),
        (hi, _checked_scalar(g, hi, allow_inf=True)),
    )
    best_x, best_f = candidates[0]
    for x, fx in candidates[1:]:
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x, best_f
