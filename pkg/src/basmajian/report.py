"""Series evaluation reports and the shared tail-rule bookkeeping.

Both identity engines (Schottky cross-ratio series and quadratic gap series)
sum terms by word length and stop when the geometric tail bound
S_N * lam / (1 - lam) drops below eps, with lam the geometric mean of the
last five level-sum ratios.  Five consecutive non-decreasing level sums
signal divergence (dimension >= 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

from .errors import Diverging

#: ratios entering the growth-rate estimate
LAMBDA_WINDOW = 5
#: consecutive non-decreasing level sums before declaring divergence
DIVERGENCE_RUN = 5


@dataclass
class SeriesReport:
    """Outcome of evaluating one series identity.

    level_sums[k] is the sum of |term| over the words of the k-th computed
    length (starting at ``first_length``); partial_sum sums the signed terms
    of those levels.
    """

    level_sums: List[float]
    partial_sum: complex
    lhs: complex
    lambda1_estimate: float
    tail_bound: float
    depth: int
    first_length: int = 0
    converged: bool = True

    def gap_mod_2pi(self) -> float:
        """|partial_sum - lhs| with the imaginary part reduced into (-pi, pi]."""
        g = self.partial_sum - self.lhs
        im = math.remainder(g.imag, 2 * math.pi)
        if im <= -math.pi:
            im += 2 * math.pi
        return abs(complex(g.real, im))


def lambda1_from_level_sums(level_sums) -> float:
    """Geometric mean of the last LAMBDA_WINDOW level-sum ratios.

    Needs at least LAMBDA_WINDOW + 1 levels; returns nan on non-positive sums.
    """
    if len(level_sums) < LAMBDA_WINDOW + 1:
        raise ValueError(f"need at least {LAMBDA_WINDOW + 1} level sums")
    window = list(level_sums)[-(LAMBDA_WINDOW + 1):]
    if any(s <= 0.0 or not math.isfinite(s) for s in window):
        return math.nan
    # geometric mean of ratios telescopes to the endpoints
    return (window[-1] / window[0]) ** (1.0 / LAMBDA_WINDOW)


@dataclass
class TailRule:
    """Incremental stopping/divergence logic over a stream of level sums."""

    eps: float
    abs_sums: List[float] = field(default_factory=list)
    signed_sums: List[complex] = field(default_factory=list)
    _nondecreasing_run: int = 0

    def push(self, abs_sum: float, signed_sum: complex) -> bool:
        """Record one level; returns True when the tail rule says stop."""
        if self.abs_sums:
            if abs_sum >= self.abs_sums[-1]:
                self._nondecreasing_run += 1
            else:
                self._nondecreasing_run = 0
        self.abs_sums.append(float(abs_sum))
        self.signed_sums.append(complex(signed_sum))
        if self._nondecreasing_run >= DIVERGENCE_RUN:
            raise Diverging(
                f"level sums non-decreasing for {DIVERGENCE_RUN} consecutive lengths",
                level_sums=self.abs_sums,
            )
        if len(self.abs_sums) >= LAMBDA_WINDOW + 1:
            lam = lambda1_from_level_sums(self.abs_sums)
            if math.isfinite(lam) and lam < 1.0:
                if self.tail_bound() < self.eps:
                    return True
        return False

    def lambda1(self) -> float:
        if len(self.abs_sums) < LAMBDA_WINDOW + 1:
            return math.nan
        return lambda1_from_level_sums(self.abs_sums)

    def tail_bound(self) -> float:
        lam = self.lambda1()
        if not math.isfinite(lam):
            return math.inf
        if lam >= 1.0:
            return math.inf
        return self.abs_sums[-1] * lam / (1.0 - lam)

    def partial_sum(self) -> complex:
        return complex(
            math.fsum(s.real for s in self.signed_sums),
            math.fsum(s.imag for s in self.signed_sums),
        )

    def report(self, lhs: complex, first_length: int, converged: bool) -> SeriesReport:
        bound = self.tail_bound()
        return SeriesReport(
            level_sums=list(self.abs_sums),
            partial_sum=self.partial_sum(),
            lhs=complex(lhs),
            lambda1_estimate=self.lambda1(),
            tail_bound=bound if math.isfinite(bound) else math.inf,
            depth=first_length + len(self.abs_sums) - 1,
            first_length=first_length,
            converged=converged,
        )
