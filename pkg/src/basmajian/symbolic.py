"""Words, regular languages and subshift codings.

The central object is a ``LanguageSpec``: a symmetric ordered alphabet plus
filter rules (reducedness, forbidden prefixes, forbidden suffixes).  The
boundary-coset language for the one-holed torus ships as ``TORUS_SPEC``.
Words over a group alphabet are plain strings; subshift symbol strings are
tuples of 1-based integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

import numpy as np


@dataclass(frozen=True)
class Alphabet:
    """Ordered letters with an involution marking inverses.

    The letter order is the enumeration order: ``letters[0]`` sorts first.
    """

    letters: Tuple[str, ...]
    inverses: Dict[str, str] = field(hash=False)

    def __post_init__(self):
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("duplicate letters")
        for l, inv in self.inverses.items():
            if l not in self.letters or inv not in self.letters:
                raise ValueError(f"involution letter {l!r}/{inv!r} not in alphabet")
            if inv == l:
                raise ValueError(f"involution must be fixed-point-free, got {l!r}")
            if self.inverses.get(inv) != l:
                raise ValueError("inverse marking is not an involution")

    @classmethod
    def symmetric(cls, letters: str) -> "Alphabet":
        """Build from a string like "abAB", pairing case partners as inverses."""
        inverses = {}
        for l in letters:
            partner = l.swapcase()
            if partner not in letters:
                raise ValueError(f"no inverse letter for {l!r}")
            inverses[l] = partner
        return cls(tuple(letters), inverses)

    def inverse(self, letter: str) -> str:
        return self.inverses[letter]

    def rank(self, letter: str) -> int:
        return self.letters.index(letter)

    def positive_letters(self) -> Tuple[str, ...]:
        """Letters that precede their own inverse in the order."""
        return tuple(
            l for l in self.letters
            if self.letters.index(l) < self.letters.index(self.inverses[l])
        )


@dataclass(frozen=True)
class LanguageSpec:
    """A reduced-word language cut down by prefix and suffix filters."""

    alphabet: Alphabet
    reduced: bool = True
    forbidden_prefixes: Tuple[str, ...] = ()
    forbidden_suffixes: Tuple[str, ...] = ()

    def __post_init__(self):
        for w in self.forbidden_prefixes + self.forbidden_suffixes:
            if any(l not in self.alphabet.letters for l in w):
                raise ValueError(f"forbidden word {w!r} uses unknown letters")

    def accepts(self, word: str) -> bool:
        """Direct filter check; the brute-force reference for the automaton."""
        if len(word) == 0:
            return False
        if self.reduced:
            for x, y in zip(word, word[1:]):
                if self.alphabet.inverse(x) == y:
                    return False
        if any(word.startswith(p) for p in self.forbidden_prefixes):
            return False
        if any(word.endswith(s) for s in self.forbidden_suffixes):
            return False
        return True

    def to_json(self) -> str:
        return json.dumps({
            "alphabet": "".join(self.alphabet.letters),
            "order": ">".join(self.alphabet.letters),
            "reduced": self.reduced,
            "forbidden_prefixes": list(self.forbidden_prefixes),
            "forbidden_suffixes": list(self.forbidden_suffixes),
        })

    @classmethod
    def from_json(cls, text: str) -> "LanguageSpec":
        data = json.loads(text) if isinstance(text, str) else text
        alphabet = Alphabet.symmetric(data["alphabet"])
        order = data.get("order")
        if order is not None and tuple(order.split(">")) != alphabet.letters:
            raise ValueError("order field disagrees with alphabet field")
        return cls(
            alphabet=alphabet,
            reduced=bool(data.get("reduced", True)),
            forbidden_prefixes=tuple(data.get("forbidden_prefixes", ())),
            forbidden_suffixes=tuple(data.get("forbidden_suffixes", ())),
        )


#: Boundary double-coset representatives for the one-holed torus,
#: alphabet ordered a > b > A > B.
TORUS_SPEC = LanguageSpec(
    alphabet=Alphabet.symmetric("abAB"),
    reduced=True,
    forbidden_prefixes=("abA", "ba"),
    forbidden_suffixes=("BA", "bAB"),
)


def words_of_length(spec: LanguageSpec, n: int) -> Iterator[str]:
    """All accepted words of exactly length n, lexicographic by alphabet order.

    Depth-first extension with prefix pruning: memory O(n).
    """
    alphabet = spec.alphabet

    def extend(w: str) -> Iterator[str]:
        if len(w) == n:
            if not any(w.endswith(s) for s in spec.forbidden_suffixes):
                yield w
            return
        for letter in alphabet.letters:
            if spec.reduced and w and alphabet.inverse(w[-1]) == letter:
                continue
            w2 = w + letter
            if any(w2.startswith(p) for p in spec.forbidden_prefixes):
                continue
            yield from extend(w2)

    if n >= 1:
        yield from extend("")


def enumerate_words(spec: LanguageSpec, max_len: int) -> Iterator[str]:
    """Nontrivial accepted words, grouped by length then lexicographic."""
    for n in range(1, max_len + 1):
        yield from words_of_length(spec, n)


@dataclass(frozen=True)
class Automaton:
    """Deterministic partial automaton: at most one edge per (state, letter)."""

    letters: Tuple[str, ...]
    start: int
    n_states: int
    transitions: Dict[Tuple[int, str], int] = field(hash=False)
    accept: frozenset

    def __post_init__(self):
        for (state, letter), target in self.transitions.items():
            if not (0 <= state < self.n_states and 0 <= target < self.n_states):
                raise ValueError("transition references unknown state")
            if letter not in self.letters:
                raise ValueError(f"transition on unknown letter {letter!r}")

    def step(self, state: int, letter: str):
        return self.transitions.get((state, letter))

    def accepts(self, word: str) -> bool:
        state = self.start
        for letter in word:
            state = self.step(state, letter)
            if state is None:
                return False
        return state in self.accept

    def words_of_length(self, n: int) -> Iterator[str]:
        def walk(state: int, w: str) -> Iterator[str]:
            if len(w) == n:
                if state in self.accept:
                    yield w
                return
            for letter in self.letters:
                nxt = self.step(state, letter)
                if nxt is not None:
                    yield from walk(nxt, w + letter)

        if n >= 1:
            yield from walk(self.start, "")

    def count_of_length(self, n: int) -> int:
        """Number of accepted words of length n (dynamic programming)."""
        counts = {self.start: 1}
        for _ in range(n):
            nxt: Dict[int, int] = {}
            for state, k in counts.items():
                for letter in self.letters:
                    target = self.step(state, letter)
                    if target is not None:
                        nxt[target] = nxt.get(target, 0) + k
            counts = nxt
        return sum(k for state, k in counts.items() if state in self.accept)


def compile_spec(spec: LanguageSpec) -> Automaton:
    """Compile filter rules into a deterministic automaton.

    States track (a) progress through the forbidden-prefix tree while the
    word could still start with one, and (b) the last few letters, enough to
    test reducedness and forbidden suffixes.  Words that hit a forbidden
    prefix get no outgoing path at all; suffix violations are non-accepting
    but continuable.
    """
    alphabet = spec.alphabet
    suffix_window = max((len(s) for s in spec.forbidden_suffixes), default=0)
    if spec.reduced:
        suffix_window = max(suffix_window, 1)
    prefixes = spec.forbidden_prefixes

    def prefix_advance(progress, letter):
        """progress is the word read so far while it is still a prefix of some
        forbidden prefix; None once the start diverged (safe forever)."""
        if progress is None:
            return None, False
        w2 = progress + letter
        for p in prefixes:
            if w2 == p:
                return None, True  # hit: dead
        if any(p.startswith(w2) for p in prefixes):
            return w2, False
        return None, False

    start_key = ("", "")
    index = {start_key: 0}
    states = [start_key]
    transitions: Dict[Tuple[int, str], int] = {}
    todo = [start_key]
    while todo:
        key = todo.pop()
        progress, tail = key
        for letter in alphabet.letters:
            if spec.reduced and tail and alphabet.inverse(tail[-1]) == letter:
                continue
            new_progress, dead = prefix_advance(progress, letter)
            if dead:
                continue
            new_tail = (tail + letter)[-suffix_window:] if suffix_window else ""
            new_key = (new_progress, new_tail)
            if new_key not in index:
                index[new_key] = len(states)
                states.append(new_key)
                todo.append(new_key)
            transitions[(index[key], letter)] = index[new_key]

    accept = frozenset(
        i for i, (progress, tail) in enumerate(states)
        if i != 0 and not any(
            tail.endswith(s) if len(s) <= len(tail) else False
            for s in spec.forbidden_suffixes
        )
    )
    return Automaton(
        letters=alphabet.letters,
        start=0,
        n_states=len(states),
        transitions=transitions,
        accept=accept,
    )


@dataclass(frozen=True)
class ShiftCoding:
    """Subshift of finite type over symbols 1..symbol_count."""

    symbol_count: int
    transition_matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        m = self.symbol_count
        rows = self.transition_matrix
        if len(rows) != m or any(len(r) != m for r in rows):
            raise ValueError("transition matrix must be square of size symbol_count")
        if any(v not in (0, 1) for r in rows for v in r):
            raise ValueError("transition matrix entries must be 0/1")
        if not _aperiodic(np.array(rows, dtype=np.int64)):
            raise ValueError("transition matrix is not aperiodic")

    def admissible(self, word: Tuple[int, ...]) -> bool:
        rows = self.transition_matrix
        return all(rows[i - 1][j - 1] == 1 for i, j in zip(word, word[1:]))


def _aperiodic(a: np.ndarray) -> bool:
    """Some power of a has all entries positive."""
    m = a.shape[0]
    power = a.copy()
    for _ in range(m * m + 1):
        if (power > 0).all():
            return True
        power = np.minimum(power @ a, 1)
    return False


#: Full binary shift (quadratic Julia coding).
FULL_SHIFT_2 = ShiftCoding(2, ((1, 1), (1, 1)))

#: Reduced words over a rank-2 symmetric alphabet ordered (a, b, A, B):
#: zero exactly at the cancelling pairs.
RANK2_REDUCED_CODING = ShiftCoding(4, (
    (1, 1, 0, 1),
    (1, 1, 1, 0),
    (0, 1, 1, 1),
    (1, 0, 1, 1),
))


def shift_words(coding: ShiftCoding, n: int) -> Iterator[Tuple[int, ...]]:
    """Admissible length-n symbol strings, lexicographic in symbol order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rows = coding.transition_matrix
    symbols = range(1, coding.symbol_count + 1)

    def extend(word: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
        if len(word) == n:
            yield word
            return
        for s in symbols:
            if word and rows[word[-1] - 1][s - 1] == 0:
                continue
            yield from extend(word + (s,))

    yield from extend(())


def swap_labels(word: Tuple[int, ...]) -> Tuple[int, ...]:
    """The label-swap involution 1 <-> 2 on binary symbol strings."""
    if any(s not in (1, 2) for s in word):
        raise ValueError("label swap is defined for binary symbol strings")
    return tuple(3 - s for s in word)
