"""Complexified boundary-length identity for rank-2 Schottky groups.

A MarkedRep assigns generator matrices to the positive letters of the
language alphabet; the identity sums principal logs of cross ratios
log [a+, a-; w a+, w a-] over the boundary-coset language, by word length.
Monodromy along parameter loops is tracked per word by accumulating log
increments, each kept in (-pi/2, pi/2) imaginary part by adaptive step
subdivision.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import (DegenerateConfiguration, LostTrack, NonLoxodromic,
                     ParabolicOrElliptic)
from .moebius import INFINITY, FixedPair, MoebiusMap, cross_ratio, is_infinite
from .report import SeriesReport, TailRule
from .symbolic import Automaton, LanguageSpec, TORUS_SPEC, compile_spec

_MATCH_EPS = 1e-9
_MAX_SUBDIVISION_DEPTH = 40


@dataclass(frozen=True)
class MarkedRep:
    """Generator matrices plus boundary words and the coset language."""

    generators: Tuple[MoebiusMap, ...]
    boundary_words: Tuple[str, ...]
    language: LanguageSpec

    def __post_init__(self):
        positives = self.language.alphabet.positive_letters()
        if len(positives) != len(self.generators):
            raise ValueError(
                f"{len(self.generators)} generators for {len(positives)} positive letters"
            )
        for m in self.generators + self.boundary_matrices():
            try:
                m.complex_length()
            except ParabolicOrElliptic as exc:
                raise NonLoxodromic(f"non-loxodromic marking: {exc}") from exc

    def letter_matrices(self) -> Dict[str, MoebiusMap]:
        positives = self.language.alphabet.positive_letters()
        out = {}
        for letter, gen in zip(positives, self.generators):
            out[letter] = gen
            out[self.language.alphabet.inverse(letter)] = gen.inverse()
        return out

    def word_matrix(self, word: str) -> MoebiusMap:
        mats = self.letter_matrices()
        m = MoebiusMap.identity()
        for letter in word:
            m = m @ mats[letter]
        return m

    def boundary_matrices(self) -> Tuple[MoebiusMap, ...]:
        return tuple(self.word_matrix(w) for w in self.boundary_words)

    def to_json(self) -> str:
        return json.dumps({
            "generators": [g.as_json() for g in self.generators],
            "boundary_words": list(self.boundary_words),
            "language": json.loads(self.language.to_json()),
        })

    @classmethod
    def from_json(cls, text) -> "MarkedRep":
        data = json.loads(text) if isinstance(text, str) else text
        return cls(
            generators=tuple(MoebiusMap.from_json(g) for g in data["generators"]),
            boundary_words=tuple(data["boundary_words"]),
            language=LanguageSpec.from_json(data["language"]),
        )


@dataclass
class TrackedTerm:
    """A series term with its word, current log value and accumulated winding."""

    word: str
    value: complex
    winding: int


@dataclass
class LoopSpec:
    """A closed path of representations t in [0, 1] -> MarkedRep."""

    path: Callable[[float], MarkedRep]
    steps: int = 512
    adaptive: bool = True


def term(rep: MarkedRep, p: int, q: int, word: str) -> complex:
    """Principal log [a_p+, a_p-; w a_q+, w a_q-] for one coset word."""
    boundary = rep.boundary_matrices()
    fp = boundary[p].fixed_points()
    fq = boundary[q].fixed_points() if q != p else fp
    m = rep.word_matrix(word)
    value = cross_ratio(fp.attracting, fp.repelling,
                        m(fq.attracting), m(fq.repelling))
    return cmath.log(value)


# --- vectorized word-tree machinery -----------------------------------------

class _WordTree:
    """Breadth-first prefix tree of an automaton's language.

    Level n stores, for each reachable word of length n: the automaton state,
    the parent index at level n-1, the letter index appended, and whether the
    word is accepted (emits a series term).  Levels are in lexicographic
    order by construction.
    """

    def __init__(self, automaton: Automaton):
        self.automaton = automaton
        self.letters = automaton.letters
        # level 0: the empty word at the start state
        self.states = [np.array([automaton.start], dtype=np.int32)]
        self.parents: List[np.ndarray] = [np.array([-1], dtype=np.int64)]
        self.letter_idx: List[np.ndarray] = [np.array([-1], dtype=np.int8)]
        self.accept_masks: List[np.ndarray] = [np.array([False])]
        self._words: List[Optional[List[str]]] = [[""]]
        n_states = automaton.n_states
        n_letters = len(self.letters)
        table = np.full((n_states, n_letters), -1, dtype=np.int32)
        for (state, letter), target in automaton.transitions.items():
            table[state, self.letters.index(letter)] = target
        self._table = table
        self._accept = np.zeros(n_states, dtype=bool)
        for s in automaton.accept:
            self._accept[s] = True

    def extend(self):
        """Append one level; np.nonzero row-major order keeps levels lexicographic."""
        prev = self.states[-1]
        targets = self._table[prev]              # (N, n_letters)
        parent_idx, letter_idx = np.nonzero(targets >= 0)
        letter_idx = letter_idx.astype(np.int8)
        states = targets[parent_idx, letter_idx].astype(np.int32)
        self.states.append(states)
        self.parents.append(parent_idx)
        self.letter_idx.append(letter_idx)
        self.accept_masks.append(self._accept[states])
        self._words.append(None)  # materialized on demand

    def ensure_depth(self, n: int):
        while len(self.states) <= n:
            self.extend()

    def words_at(self, n: int) -> List[str]:
        self.ensure_depth(n)
        for lvl in range(1, n + 1):
            if self._words[lvl] is None:
                prev = self._words[lvl - 1]
                self._words[lvl] = [
                    prev[p] + self.letters[l]
                    for p, l in zip(self.parents[lvl], self.letter_idx[lvl])
                ]
        return self._words[n]

    def level_matrices(self, prev_mats: np.ndarray, lvl: int,
                       gen_mats: np.ndarray) -> np.ndarray:
        """Matrices for level lvl from the previous level's matrices."""
        parents = self.parents[lvl]
        letters = self.letter_idx[lvl]
        return np.matmul(prev_mats[parents], gen_mats[letters])


def _gen_matrix_array(rep: MarkedRep) -> np.ndarray:
    mats = rep.letter_matrices()
    letters = rep.language.alphabet.letters
    out = np.empty((len(letters), 2, 2), dtype=complex)
    for i, letter in enumerate(letters):
        m = mats[letter]
        out[i] = [[m.a, m.b], [m.c, m.d]]
    return out


def _apply_matrices(mats: np.ndarray, z) -> np.ndarray:
    if is_infinite(z):
        return mats[:, 0, 0] / mats[:, 1, 0]
    return (mats[:, 0, 0] * z + mats[:, 0, 1]) / (mats[:, 1, 0] * z + mats[:, 1, 1])


def _cross_vector(z1, z2, w3: np.ndarray, w4: np.ndarray) -> np.ndarray:
    """[z1, z2; w3, w4] with possibly-infinite scalar first pair."""
    if is_infinite(z1):
        return (z2 - w4) / (z2 - w3)
    if is_infinite(z2):
        return (z1 - w3) / (z1 - w4)
    return (z1 - w3) * (z2 - w4) / ((z1 - w4) * (z2 - w3))


def _check_finite_nonzero(values: np.ndarray, what: str):
    bad = ~np.isfinite(values) | (values == 0)
    if bad.any():
        raise DegenerateConfiguration(f"{what}: {int(bad.sum())} degenerate values")


def evaluate_identity(rep: MarkedRep, eps: float, max_len: int) -> SeriesReport:
    """Sum the cross-ratio series by word length against the boundary length.

    Stops by the geometric tail rule (estimated growth rate from the last
    five level-sum ratios) or at max_len; raises Diverging when level sums
    fail to decay for five consecutive lengths.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if len(rep.boundary_words) != 1:
        raise ValueError("series evaluation supports single-boundary markings")
    boundary = rep.boundary_matrices()[0]
    lhs = boundary.complex_length()
    fixed = boundary.fixed_points()
    tree = _WordTree(compile_spec(rep.language))
    gen_mats = _gen_matrix_array(rep)

    rule = TailRule(eps=eps)
    mats = np.broadcast_to(np.eye(2, dtype=complex), (1, 2, 2))
    converged = False
    for lvl in range(1, max_len + 1):
        tree.ensure_depth(lvl)
        mats = tree.level_matrices(mats, lvl, gen_mats)
        mask = tree.accept_masks[lvl]
        emit = mats[mask]
        w_plus = _apply_matrices(emit, fixed.attracting)
        w_minus = _apply_matrices(emit, fixed.repelling)
        values = _cross_vector(fixed.attracting, fixed.repelling, w_plus, w_minus)
        _check_finite_nonzero(values, f"cross ratios at length {lvl}")
        logs = np.log(values)
        if rule.push(float(np.abs(logs).sum()), complex(logs.sum())):
            converged = True
            break
    return rule.report(lhs=lhs, first_length=1, converged=converged)


def continue_along(loop: LoopSpec, max_len: int) -> List[TrackedTerm]:
    """Monodromy integers for every coset word up to max_len along a loop.

    Boundary fixed points are continued by nearest-root matching; per-word
    log increments use the principal log of consecutive cross-ratio values,
    with steps subdivided until every increment has |Im| < pi/2.  Raises
    LostTrack on ambiguous matching and NonLoxodromic if the boundary word
    degenerates along the path.
    """
    rep0 = loop.path(0.0)
    if len(rep0.boundary_words) != 1:
        raise ValueError("monodromy tracking supports single-boundary markings")
    rep1 = loop.path(1.0)
    for g0, g1 in zip(rep0.generators, rep1.generators):
        if not g0.projectively_equal(g1, tol=1e-8):
            raise ValueError("loop is not closed (path(0) != path(1))")

    tree = _WordTree(compile_spec(rep0.language))
    tree.ensure_depth(max_len)
    words: List[str] = []
    for lvl in range(1, max_len + 1):
        lvl_words = tree.words_at(lvl)
        words.extend(w for w, ok in zip(lvl_words, tree.accept_masks[lvl]) if ok)

    boundary_word = rep0.boundary_words[0]

    def boundary_fixed_candidates(rep: MarkedRep) -> Tuple[complex, complex]:
        m = rep.word_matrix(boundary_word)
        if abs(m.c) < 1e-30:
            raise NonLoxodromic("boundary word has a fixed point at infinity")
        disc = cmath.sqrt((m.d - m.a) ** 2 + 4 * m.b * m.c)
        if abs(disc) < 1e-12:
            raise NonLoxodromic("boundary word degenerated (coincident fixed points)")
        r1 = ((m.a - m.d) + disc) / (2 * m.c)
        r2 = ((m.a - m.d) - disc) / (2 * m.c)
        return r1, r2

    def all_values(rep: MarkedRep, plus: complex, minus: complex) -> np.ndarray:
        gen_mats = _gen_matrix_array(rep)
        mats = np.broadcast_to(np.eye(2, dtype=complex), (1, 2, 2))
        chunks = []
        for lvl in range(1, max_len + 1):
            mats = tree.level_matrices(mats, lvl, gen_mats)
            emit = mats[tree.accept_masks[lvl]]
            w_plus = _apply_matrices(emit, plus)
            w_minus = _apply_matrices(emit, minus)
            chunks.append(_cross_vector(plus, minus, w_plus, w_minus))
        values = np.concatenate(chunks)
        _check_finite_nonzero(values, "cross ratios along path")
        return values

    fixed0 = rep0.word_matrix(boundary_word).fixed_points()
    if is_infinite(fixed0.attracting) or is_infinite(fixed0.repelling):
        raise NonLoxodromic("boundary fixed point at infinity is not supported here")
    plus, minus = fixed0.attracting, fixed0.repelling
    values = all_values(rep0, plus, minus)
    initial_values = values.copy()
    acc = np.zeros(values.size, dtype=complex)

    def advance(t_from: float, t_to: float, depth: int):
        nonlocal plus, minus, values, acc
        if depth > _MAX_SUBDIVISION_DEPTH:
            raise LostTrack("step subdivision underflow while tracking terms")
        rep = loop.path(t_to)
        r1, r2 = boundary_fixed_candidates(rep)
        d1, d2 = abs(r1 - plus), abs(r2 - plus)
        if abs(d1 - d2) < _MATCH_EPS:
            raise LostTrack(
                f"ambiguous fixed-point match at t={t_to} (distances {d1:.3e}, {d2:.3e})"
            )
        new_plus, new_minus = (r1, r2) if d1 < d2 else (r2, r1)
        new_values = all_values(rep, new_plus, new_minus)
        inc = np.log(new_values / values)
        if np.abs(inc.imag).max() >= math.pi / 2:
            mid = 0.5 * (t_from + t_to)
            advance(t_from, mid, depth + 1)
            advance(mid, t_to, depth + 1)
            return
        acc += inc
        plus, minus, values = new_plus, new_minus, new_values

    ts = np.linspace(0.0, 1.0, loop.steps + 1)
    for k in range(1, len(ts)):
        advance(float(ts[k - 1]), float(ts[k]), 0 if loop.adaptive else _MAX_SUBDIVISION_DEPTH)

    windings = np.round(acc.imag / (2 * math.pi)).astype(int)
    residual = np.abs(acc.imag - 2 * math.pi * windings).max()
    if residual > 0.5:
        raise LostTrack(f"winding residual {residual:.3f} after closing the loop")
    final_logs = np.log(initial_values) + acc
    return [TrackedTerm(word=w, value=complex(v), winding=int(m))
            for w, v, m in zip(words, final_logs, windings)]


# --- presets ------------------------------------------------------------------

_PRESET_NAMES = ("gamma", "gamma-prime")
_PRESET_L0 = 5.0
_X_CONTINUATION_STEPS = 64


def _x_of_t(t: float, root: str = "large") -> complex:
    """Root of x^2 + L x + 1 = 0 along L = 5 e^(2 pi i t), continued from t=0.

    At t = 0 the larger-modulus root is taken by default; "small" selects
    the other branch.
    """
    def roots_at(tt: float) -> Tuple[complex, complex]:
        L = _PRESET_L0 * cmath.exp(2j * math.pi * tt)
        disc = cmath.sqrt(L * L - 4.0)
        return (-L + disc) / 2, (-L - disc) / 2

    r1, r2 = roots_at(0.0)
    x = max(r1, r2, key=abs) if root == "large" else min(r1, r2, key=abs)
    if t == 0.0:
        return x
    n = max(16, int(math.ceil(_X_CONTINUATION_STEPS * abs(t))))
    for k in range(1, n + 1):
        r1, r2 = roots_at(t * k / n)
        x = r1 if abs(r1 - x) <= abs(r2 - x) else r2
    return x


def preset(name: str, t: float, root: str = "large") -> MarkedRep:
    """The torus markings behind the two monodromy loops.

    gamma: generators (X, Y); gamma-prime: (X^2, X Y^3); both with
    X = [[L, 1], [-1, 0]], Y = [[0, x], [-1/x, L]], L = 5 e^(2 pi i t) and
    x + 1/x = -L continued from the larger-modulus root at t = 0.
    """
    if name not in _PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; use one of {_PRESET_NAMES}")
    L = _PRESET_L0 * cmath.exp(2j * math.pi * t)
    x = _x_of_t(t, root=root)
    X = MoebiusMap(L, 1.0, -1.0, 0.0)
    Y = MoebiusMap(0.0, x, -1.0 / x, L)
    if name == "gamma":
        gens = (X, Y)
    else:
        gens = (X @ X, X @ Y @ Y @ Y)
    return MarkedRep(generators=gens, boundary_words=("abAB",), language=TORUS_SPEC)


def preset_loop(name: str, steps: int = 512, root: str = "large") -> LoopSpec:
    return LoopSpec(path=lambda t: preset(name, t, root=root), steps=steps,
                    adaptive=True)
