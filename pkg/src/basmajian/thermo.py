"""Thermodynamic-formalism estimators for Hausdorff dimension.

Three independent routes to dimension information:
  * level-sum growth rate (lambda-1 classifier),
  * periodic-point pressure and its Bowen root,
  * Falconer cut-out bounds from gap-length decay.
The pressure route uses the periodic-point sum directly; fixed points of
branch compositions are cheap contraction iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .errors import NoConvergence, NoSignChange
from .report import lambda1_from_level_sums
from .symbolic import shift_words

#: dead band around 1 inside which the level-sum classifier refuses to decide
CLASSIFIER_DEAD_BAND = 0.02

_FIXED_POINT_TOL = 1e-13
_FIXED_POINT_MAX_ITER = 300


@dataclass(frozen=True)
class DimEstimate:
    """A dimension value with its method, bracket and evaluation depth."""

    value: float
    method: str  # "levelsum" | "pressure" | "cutout"
    bracket: Tuple[float, float]
    depth: int

    def __post_init__(self):
        lo, hi = self.bracket
        if not (lo <= self.value <= hi):
            raise ValueError("bracket must contain the value")

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "bracket": [self.bracket[0], self.bracket[1]],
            "depth": self.depth,
        }


@dataclass(frozen=True)
class PressureCurve:
    """Samples (t, pressure, depth); strictly decreasing in t at fixed depth."""

    samples: Tuple[Tuple[float, float, int], ...]

    def __post_init__(self):
        by_depth = {}
        for t, p, n in self.samples:
            by_depth.setdefault(n, []).append((t, p))
        for n, pts in by_depth.items():
            pts.sort()
            for (t1, p1), (t2, p2) in zip(pts, pts[1:]):
                if t1 < t2 and not p1 > p2:
                    raise ValueError(
                        f"pressure not strictly decreasing at depth {n}: "
                        f"P({t1})={p1} vs P({t2})={p2}"
                    )


@dataclass(frozen=True)
class GapSequence:
    """Gap lengths a_1 >= a_2 >= ... > 0."""

    lengths: Tuple[float, ...]

    def __post_init__(self):
        arr = np.asarray(self.lengths, dtype=float)
        if arr.size == 0 or (arr <= 0).any():
            raise ValueError("gap lengths must be positive")
        if (np.diff(arr) > 0).any():
            raise ValueError("gap lengths must be sorted descending")


def level_lambda1(level_sums: Sequence[float],
                  dead_band: float = CLASSIFIER_DEAD_BAND) -> Tuple[float, str]:
    """Growth-rate estimate from level sums plus a three-way classification.

    Returns (lambda1_hat, cls) with cls one of "dim<1", "dim>=1",
    "inconclusive"; the estimate is the geometric mean of the last five
    level-sum ratios.  Needs at least six levels.
    """
    lam = lambda1_from_level_sums(level_sums)
    if not math.isfinite(lam):
        return lam, "inconclusive"
    if lam < 1.0 - dead_band:
        return lam, "dim<1"
    if lam > 1.0 + dead_band:
        return lam, "dim>=1"
    return lam, "inconclusive"


def _branch_apply(ifs, letters_at_k: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    for s in range(1, ifs.branch_count + 1):
        mask = letters_at_k == s
        if mask.any():
            out[mask] = ifs.branch(s, z[mask])
    return out


def _branch_derivative_apply(ifs, letters_at_k, z):
    out = np.empty_like(z)
    for s in range(1, ifs.branch_count + 1):
        mask = letters_at_k == s
        if mask.any():
            out[mask] = ifs.branch_derivative(s, z[mask])
    return out


def periodic_points(ifs, n: int) -> List[Tuple[complex, complex]]:
    """Period-n points of the expanding map with their cycle multipliers.

    For each admissible length-n symbol word w, the unique fixed point of the
    branch composition T_w (contraction iteration from the seed midpoint) and
    the derivative of the n-th iterate of the expanding map there, computed
    as 1 / T_w'(x) by the chain rule along the cycle.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    words = list(shift_words(ifs.coding, n))
    letters = np.array(words, dtype=np.int8)
    lo, hi = ifs.seed_interval
    z = np.full(len(words), 0.5 * (lo + hi), dtype=complex)
    for _ in range(_FIXED_POINT_MAX_ITER):
        z_new = z
        for k in range(n - 1, -1, -1):
            z_new = _branch_apply(ifs, letters[:, k], z_new)
        delta = np.abs(z_new - z).max()
        z = z_new
        if delta < _FIXED_POINT_TOL:
            break
    else:
        raise NoConvergence(
            f"branch-composition fixed points did not converge at depth {n}"
        )
    # chain rule: T_w'(x) multiplies branch derivatives along the composition
    deriv = np.ones(len(words), dtype=complex)
    v = z.copy()
    for k in range(n - 1, -1, -1):
        deriv *= _branch_derivative_apply(ifs, letters[:, k], v)
        v = _branch_apply(ifs, letters[:, k], v)
    multipliers = 1.0 / deriv
    return list(zip(map(complex, z), map(complex, multipliers)))


@lru_cache(maxsize=64)
def _abs_multipliers(ifs, n: int) -> np.ndarray:
    return np.array([abs(m) for _, m in periodic_points(ifs, n)])


def pressure(ifs, t: float, n: int) -> float:
    """(1/n) log sum over period-n points of |multiplier|^(-t)."""
    am = _abs_multipliers(ifs, n)
    return float(np.log(np.sum(am ** (-t))) / n)


def pressure_curve(ifs, ts: Sequence[float], n: int) -> PressureCurve:
    return PressureCurve(tuple((float(t), pressure(ifs, t, n), n) for t in ts))


_BOWEN_BRACKET = (0.01, 1.99)


def bowen_dimension(ifs, n: int, tol: float) -> DimEstimate:
    """Bisection root of t -> pressure(t) on (0.01, 1.99)."""
    lo, hi = _BOWEN_BRACKET
    p_lo = pressure(ifs, lo, n)
    p_hi = pressure(ifs, hi, n)
    if not (p_lo > 0.0 > p_hi):
        raise NoSignChange(
            f"pressure has no sign change on {_BOWEN_BRACKET}: "
            f"P({lo})={p_lo:.4f}, P({hi})={p_hi:.4f}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pressure(ifs, mid, n) > 0.0:
            lo = mid
        else:
            hi = mid
    return DimEstimate(value=0.5 * (lo + hi), method="pressure",
                       bracket=(lo, hi), depth=n)


def cutout_bounds(gaps: "GapSequence | Sequence[float]") -> Tuple[float, float]:
    """Falconer box-dimension bounds from gap decay: (1/a, 1/b).

    a and b estimate -liminf and -limsup of log(a_n)/log(n) via slopes of
    window means of (log n, log a_n) over dyadic windows; degenerate slopes
    clamp the bound to 2.
    """
    lengths = gaps.lengths if isinstance(gaps, GapSequence) else GapSequence(
        tuple(float(g) for g in gaps)).lengths
    arr = np.asarray(lengths, dtype=float)
    if arr.size < 1000:
        raise ValueError("need at least 1000 gaps")
    ns = np.arange(1, arr.size + 1, dtype=float)
    log_n = np.log(ns)
    log_a = np.log(arr)
    xs, ys = [], []
    k = 0
    while 2 ** (k + 1) - 1 <= arr.size:
        window = slice(2 ** k - 1, 2 ** (k + 1) - 1)
        xs.append(log_n[window].mean())
        ys.append(log_a[window].mean())
        k += 1
    slopes = np.diff(ys) / np.diff(xs)
    tail = slopes[len(slopes) // 2:]
    a_est = -tail.min()
    b_est = -tail.max()

    def bound(decay):
        if decay <= 1e-12:
            return 2.0  # degenerate (non-decaying) gaps: clamp
        return min(1.0 / decay, 2.0)

    return bound(a_est), bound(b_est)


def distortion_ratio(ifs, n: int, basepoints: Sequence[complex]) -> float:
    """max over length-n words of (max/min over basepoints of |T_w'|)."""
    words = list(shift_words(ifs.coding, n))
    letters = np.array(words, dtype=np.int8)
    mags = []
    for x in basepoints:
        deriv = np.ones(len(words), dtype=complex)
        v = np.full(len(words), complex(x))
        for k in range(n - 1, -1, -1):
            deriv *= _branch_derivative_apply(ifs, letters[:, k], v)
            v = _branch_apply(ifs, letters[:, k], v)
        mags.append(np.abs(deriv))
    stacked = np.vstack(mags)  # (n_basepoints, n_words)
    ratios = stacked.max(axis=0) / stacked.min(axis=0)
    return float(ratios.max())
