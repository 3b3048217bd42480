"""Holomorphic contracting IFS instances and their gap-series identities.

Two instances: the inverse branches of z -> z^2 + c on a Cantor Julia set,
and a pair of planar similarities.  Both are coded by the full binary shift;
a word acts with its first letter outermost, so the gap of word w nests
inside the symbolic piece of w's first letter.

The quadratic branches use the principal square root for direct evaluation.
This agrees with analytic continuation from the real locus c < -2 wherever
Re(sqrt(1-4c)) > 1; absolute-value quantities (everything the convergence
classifier uses) are branch-independent because relabeling permutes terms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterator, List, Tuple

import numpy as np

from . import kernels
from .errors import BasmajianError, BranchAmbiguity, Diverging, LostTrack
from .report import SeriesReport, TailRule
from .symbolic import FULL_SHIFT_2

_BRANCH_POINT_EPS = 1e-14
#: per-step endpoint motion must stay below this fraction of the distance
#: between the two square-root candidates during continuation
_STEP_FRACTION = 0.25


def julia_fixed_points(c: complex) -> Tuple[complex, complex]:
    """Fixed points z1, z2 of the two inverse branches of z^2 + c.

    z1 = (1 + sqrt(1 - 4c))/2 with the principal square root, which is the
    continuation from real c < -2 (where z1 > 0) off the ray c in (1/4, oo);
    z2 = 1 - z1.  Rejects the degenerate parameter c = 1/4.
    """
    c = complex(c)
    if abs(1 - 4 * c) < 1e-12:
        raise ValueError("degenerate parameter c = 1/4 (coincident fixed points)")
    z1 = (1 + cmath.sqrt(1 - 4 * c)) / 2
    return z1, 1 - z1


@dataclass(frozen=True)
class QuadraticIFS:
    """Inverse branches T1 = +sqrt(z - c), T2 = -sqrt(z - c) of z^2 + c.

    T1 fixes z1 for every parameter (principal conventions give Re z1 >= 1/2);
    T2 fixes z2 on the region Re(sqrt(1 - 4c)) > 1, which contains the whole
    locus this artifact evaluates identities on.
    """

    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        z1, z2 = julia_fixed_points(self.c)  # also rejects c = 1/4
        object.__setattr__(self, "_z1", z1)
        object.__setattr__(self, "_z2", z2)

    branch_count = 2
    coding = FULL_SHIFT_2

    @property
    def z1(self) -> complex:
        return self._z1

    @property
    def z2(self) -> complex:
        return self._z2

    @property
    def seed_interval(self) -> Tuple[complex, complex]:
        return (-self.z1, self.z1)

    @property
    def primary_gap(self) -> Tuple[complex, complex]:
        """Endpoints (T2(-z1), T1(-z1)) of the largest gap."""
        r = np.sqrt(complex(-self.z1 - self.c))
        return (-r, r)

    def branch(self, j: int, z):
        """T_j(z); numpy-vectorized, principal square root."""
        root = np.sqrt(z - self.c)
        return root if j == 1 else -root

    def branch_derivative(self, j: int, z):
        """T_j'(z) = 1 / (2 T_j(z))."""
        return 1.0 / (2.0 * self.branch(j, z))


@dataclass(frozen=True)
class SimilarityIFS:
    """The pair of similarities f(z) = c z and g(z) = c(z - 1) + 1."""

    c: complex

    def __post_init__(self):
        c = complex(self.c)
        if not (0 < abs(c) < 1):
            raise ValueError("similarity ratio must satisfy 0 < |c| < 1")
        object.__setattr__(self, "c", c)

    branch_count = 2
    coding = FULL_SHIFT_2

    #: fixed points of the two branches
    z1 = 0.0 + 0.0j
    z2 = 1.0 + 0.0j

    @property
    def seed_interval(self) -> Tuple[complex, complex]:
        return (0.0 + 0.0j, 1.0 + 0.0j)

    @property
    def primary_gap(self) -> Tuple[complex, complex]:
        """Endpoints (f(1), g(0)) = (c, 1 - c) of the middle gap."""
        return (self.c, 1.0 - self.c)

    def branch(self, j: int, z):
        if j == 1:
            return self.c * z
        return self.c * (z - 1.0) + 1.0

    def branch_derivative(self, j: int, z):
        return self.c * np.ones_like(np.asarray(z, dtype=complex))


def _check_branch_points(ifs: QuadraticIFS, values: np.ndarray):
    if np.abs(values - ifs.c).min(initial=np.inf) < _BRANCH_POINT_EPS:
        raise BranchAmbiguity(
            f"square-root branch point hit at c={ifs.c!r} during word evaluation"
        )


def apply_word(ifs, word: Tuple[int, ...], z):
    """w(z) with the first letter of w outermost."""
    for j in reversed(word):
        if isinstance(ifs, QuadraticIFS):
            _check_branch_points(ifs, np.atleast_1d(np.asarray(z, dtype=complex)))
        z = ifs.branch(j, z)
    return z


def gap_image(ifs: QuadraticIFS, word: Tuple[int, ...]) -> Tuple[complex, complex]:
    """(w(T1(-z1)), w(T2(-z1))): the endpoints of the gap indexed by w."""
    lo, hi = ifs.primary_gap
    return complex(apply_word(ifs, word, hi)), complex(apply_word(ifs, word, lo))


def gap_tree_levels(ifs, seed_a, seed_b, n_levels: int,
                    flip_letter: int = 0) -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Per-level arrays (w(seed_a), w(seed_b), signs) over the full binary tree.

    Level n holds all 2^n words of length n in lexicographic order; signs are
    (-1)^(count of flip_letter in w).  Generic over any binary-full-shift IFS;
    the compiled kernel path in `gap_level_sums` supersedes this for sums.
    """
    if ifs.coding.transition_matrix != FULL_SHIFT_2.transition_matrix:
        raise ValueError("gap trees are defined over the full binary shift")
    a = np.array([seed_a], dtype=complex)
    b = np.array([seed_b], dtype=complex)
    sign = np.array([1.0])
    for n in range(n_levels + 1):
        yield a, b, sign
        if n == n_levels:
            break
        if isinstance(ifs, QuadraticIFS):
            _check_branch_points(ifs, a)
            _check_branch_points(ifs, b)
        a1, b1 = ifs.branch(1, a), ifs.branch(1, b)
        a2, b2 = ifs.branch(2, a), ifs.branch(2, b)
        a = np.concatenate([a1, a2])
        b = np.concatenate([b1, b2])
        s1 = -sign if flip_letter == 1 else sign
        s2 = -sign if flip_letter == 2 else sign
        sign = np.concatenate([s1, s2])


def gap_level_sums(ifs, n_levels: int, swapped: bool = False):
    """(abs_sums, signed_sums) arrays for the gap series, levels 0..n_levels."""
    seed_a, seed_b, flip = _identity_seeds(ifs, swapped)
    if isinstance(ifs, QuadraticIFS):
        return kernels.quad_gap_level_sums(ifs.c, seed_a, seed_b, flip, n_levels)
    abs_sums = np.empty(n_levels + 1)
    signed_sums = np.empty(n_levels + 1, dtype=complex)
    for n, (a, b, sign) in enumerate(gap_tree_levels(ifs, seed_a, seed_b, n_levels, flip)):
        d = a - b
        abs_sums[n] = np.abs(d).sum()
        signed_sums[n] = (sign * d).sum()
    return abs_sums, signed_sums


def _identity_seeds(ifs, swapped: bool):
    if isinstance(ifs, QuadraticIFS):
        if swapped:
            # terms w(T2(-z2)) - w(T1(-z2)), sign flips on T1
            return ifs.branch(2, -ifs.z2), ifs.branch(1, -ifs.z2), 1
        lo, hi = ifs.primary_gap
        return hi, lo, 2
    if swapped:
        raise ValueError("the swapped identity is specific to the quadratic family")
    lo, hi = ifs.primary_gap
    return hi, lo, 0


def _run_tail_rule(abs_sums, signed_sums, eps: float, lhs: complex,
                   first_length: int = 0) -> SeriesReport:
    rule = TailRule(eps=eps)
    stopped = False
    for n in range(len(abs_sums)):
        if rule.push(abs_sums[n], signed_sums[n]):
            stopped = True
            break
    return rule.report(lhs=lhs, first_length=first_length, converged=stopped)


def julia_identity(ifs: QuadraticIFS, eps: float, max_len: int) -> SeriesReport:
    """Signed gap series against the closed-form length 2*z1.

    Sums (-1)^eta (w(T1(-z1)) - w(T2(-z1))) by word length, eta the number of
    T2's in w; stops by the geometric tail rule or at max_len.  Raises
    Diverging when level sums fail to decay (dimension >= 1).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    abs_sums, signed_sums = gap_level_sums(ifs, max_len)
    report = _run_tail_rule(abs_sums, signed_sums, eps, lhs=2 * ifs.z1)
    return report


def swapped_identity(ifs: QuadraticIFS, eps: float, max_len: int) -> SeriesReport:
    """Label-swapped gap series against 2*z2 (the monodromy image identity)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    abs_sums, signed_sums = gap_level_sums(ifs, max_len, swapped=True)
    return _run_tail_rule(abs_sums, signed_sums, eps, lhs=2 * ifs.z2)


_SIMILARITY_CHECK_DEPTH = 10
_SIMILARITY_EPS = 1e-13
_SIMILARITY_MAX_LEN = 100_000


def similarity_identity(ifs: SimilarityIFS) -> SeriesReport:
    """The geometric series 1 = sum (2c)^n (1 - 2c), with a word-form cross-check.

    Level sums are exact: the 2^n length-n words are similarities of ratio
    c^n, so each level contributes (2c)^n (1 - 2c).  The first few levels are
    also evaluated term by term through the branch maps and must agree with
    the closed form to 1e-12.  Raises Diverging when |2c| >= 1.
    """
    two_c = 2 * ifs.c
    factor = 1 - two_c
    if abs(two_c) >= 1.0:
        raise Diverging(f"|2c| = {abs(two_c):.6f} >= 1: geometric series diverges",
                        level_sums=[abs(factor) * abs(two_c) ** n for n in range(6)])

    check_depth = _SIMILARITY_CHECK_DEPTH
    lo, hi = ifs.primary_gap
    for n, (a, b, _) in enumerate(gap_tree_levels(ifs, hi, lo, check_depth)):
        closed = two_c ** n * factor
        termwise = (a - b).sum()
        if abs(termwise - closed) > 1e-12 * max(1.0, abs(closed)):
            raise BasmajianError(
                f"similarity word-form sum {termwise!r} disagrees with the "
                f"closed form {closed!r} at length {n}"
            )

    rule = TailRule(eps=_SIMILARITY_EPS)
    stopped = False
    for n in range(_SIMILARITY_MAX_LEN):
        level_abs = abs(factor) * abs(two_c) ** n
        level_signed = factor * two_c ** n
        if rule.push(level_abs, level_signed):
            stopped = True
            break
    return rule.report(lhs=1.0 + 0.0j, first_length=0, converged=stopped)


@dataclass
class ContinuationResult:
    """Outcome of continuing the gap system around a parameter path."""

    outcome: str                  # "identity" or "label-swap"
    z1_initial: complex
    z1_final: complex
    steps_used: int


def continue_in_c(path: Callable[[float], complex], track_len: int = 6,
                  base_steps: int = 64, max_depth: int = 40) -> ContinuationResult:
    """Continue z1 and all tracked gap endpoints along a closed parameter path.

    Every square root is continued by nearest-candidate matching; a step is
    halved until each endpoint moves less than a quarter of the distance
    between the two candidate roots.  For a closed loop the terminal state
    either matches the initial one ("identity") or the label-swapped one
    ("label-swap", the Z/2Z symbolic automorphism).
    """
    c0 = complex(path(0.0))
    c1 = complex(path(1.0))
    if abs(c0 - c1) > 1e-9 * (1 + abs(c0)):
        raise ValueError("path is not closed")

    z1_0, z2_0 = julia_fixed_points(c0)

    def tree_at(c, z1):
        """levels[m] holds u(-z1) for all 2^(m+1) words u of length m+1, lex order."""
        r0 = np.array([cmath.sqrt(-z1 - c)], dtype=complex)
        levels = [np.concatenate([r0, -r0])]
        for _ in range(track_len - 1):
            r = np.sqrt(levels[-1] - c)
            levels.append(np.concatenate([r, -r]))
        return levels

    def matched(candidate, prev):
        """Pick +/-candidate nearest prev elementwise; None if the step is too coarse."""
        d_plus = np.abs(candidate - prev)
        d_minus = np.abs(candidate + prev)
        pick = np.where(d_plus <= d_minus, candidate, -candidate)
        motion = np.minimum(d_plus, d_minus)
        if (motion >= _STEP_FRACTION * 2 * np.abs(candidate)).any():
            return None
        return pick

    # state: discriminant root sqrt(1-4c), z1, per-level endpoint values
    disc = cmath.sqrt(1 - 4 * c0)
    z1 = z1_0
    levels = tree_at(c0, z1_0)
    steps_used = 0

    def advance(t_from, t_to, depth):
        nonlocal disc, z1, levels, steps_used
        if depth > max_depth:
            raise LostTrack("continuation step size underflow (branch point?)")
        c_new = complex(path(t_to))
        new_levels = None
        disc_pick = matched(np.array([cmath.sqrt(1 - 4 * c_new)]), np.array([disc]))
        if disc_pick is not None:
            z1_new = (1 + complex(disc_pick[0])) / 2
            new_levels = []
            parent = np.array([-z1_new], dtype=complex)
            for old in levels:
                root = np.sqrt(parent - c_new)
                # children of each parent come as a +/- pair; matching fixes signs
                picked = matched(np.concatenate([root, root]), old)
                if picked is None:
                    new_levels = None
                    break
                new_levels.append(picked)
                parent = picked
        if new_levels is None:
            mid = 0.5 * (t_from + t_to)
            advance(t_from, mid, depth + 1)
            advance(mid, t_to, depth + 1)
            return
        disc = complex(disc_pick[0])
        z1 = (1 + disc) / 2
        levels = new_levels
        steps_used += 1

    ts = np.linspace(0.0, 1.0, base_steps + 1)
    for k in range(1, len(ts)):
        advance(ts[k - 1], ts[k], 0)

    tol = 1e-6 * (1 + abs(z1_0))
    if abs(z1 - z1_0) < tol:
        outcome = "identity"
    elif abs(z1 - z2_0) < tol:
        outcome = "label-swap"
    else:
        raise LostTrack(
            f"terminal z1 {z1!r} matches neither the initial state nor its label swap"
        )
    return ContinuationResult(outcome=outcome, z1_initial=z1_0, z1_final=z1,
                              steps_used=steps_used)
