"""Moebius transformations on the Riemann sphere.

Maps are stored as determinant-1 representatives of PSL(2, C) matrices; all
derived quantities (fixed points, complex length, cross ratios) are invariant
under the residual sign ambiguity.  Points on the sphere are python complex
numbers plus the module-level ``INFINITY`` sentinel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

from .errors import DegenerateConfiguration, ParabolicOrElliptic

_POLE_EPS = 1e-300
_CLASSIFY_EPS = 1e-10


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

#: A point on the Riemann sphere: a finite complex number or INFINITY.
SpherePoint = Union[complex, _Infinity]


def is_infinite(z) -> bool:
    return isinstance(z, _Infinity)


def _require_finite(value: complex, what: str) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{what} must have finite components, got {value!r}")
    return value


@dataclass(frozen=True)
class MoebiusMap:
    """A determinant-1 matrix [[a, b], [c, d]] acting by z -> (az+b)/(cz+d)."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a = _require_finite(self.a, "matrix entry")
        b = _require_finite(self.b, "matrix entry")
        c = _require_finite(self.c, "matrix entry")
        d = _require_finite(self.d, "matrix entry")
        det = a * d - b * c
        if abs(det) < 1e-30:
            raise ValueError("matrix is singular")
        s = cmath.sqrt(det)
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)
        object.__setattr__(self, "c", c / s)
        object.__setattr__(self, "d", d / s)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1, 0, 0, 1)

    @property
    def trace(self) -> complex:
        return self.a + self.d

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "MoebiusMap":
        # det 1, so the adjugate is the inverse
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __matmul__ = compose

    def __call__(self, z):
        return apply(self, z)

    def projectively_equal(self, other: "MoebiusMap", tol: float = 1e-9) -> bool:
        """Equality in PSL(2, C): entrywise up to a global sign."""
        same = max(
            abs(self.a - other.a), abs(self.b - other.b),
            abs(self.c - other.c), abs(self.d - other.d),
        )
        flip = max(
            abs(self.a + other.a), abs(self.b + other.b),
            abs(self.c + other.c), abs(self.d + other.d),
        )
        return min(same, flip) < tol

    def derivative(self, z: complex) -> complex:
        """m'(z) = 1/(cz+d)^2 for a determinant-1 matrix."""
        return 1.0 / (self.c * z + self.d) ** 2

    def fixed_points(self) -> "FixedPair":
        return fixed_points(self)

    def complex_length(self) -> complex:
        return complex_length(self)

    def as_json(self):
        """Row-major nested [[re, im], ...] pairs."""
        return [
            [[self.a.real, self.a.imag], [self.b.real, self.b.imag]],
            [[self.c.real, self.c.imag], [self.d.real, self.d.imag]],
        ]

    @classmethod
    def from_json(cls, data) -> "MoebiusMap":
        (aa, bb), (cc, dd) = data
        return cls(
            complex(aa[0], aa[1]), complex(bb[0], bb[1]),
            complex(cc[0], cc[1]), complex(dd[0], dd[1]),
        )


@dataclass(frozen=True)
class FixedPair:
    """Attracting and repelling fixed points of a loxodromic map."""

    attracting: SpherePoint
    repelling: SpherePoint


def apply(m: MoebiusMap, z):
    """Apply m to a sphere point, with projective conventions at poles and oo."""
    if is_infinite(z):
        if abs(m.c) < _POLE_EPS:
            return INFINITY
        return m.a / m.c
    denom = m.c * z + m.d
    if abs(denom) < _POLE_EPS:
        return INFINITY
    return (m.a * z + m.b) / denom


def compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    return m1.compose(m2)


def fixed_points(m: MoebiusMap) -> FixedPair:
    """Solve c z^2 + (d - a) z - b = 0 and classify by derivative modulus.

    Raises ParabolicOrElliptic when neither root has derivative modulus
    bounded away from 1.
    """
    if abs(m.c) < _POLE_EPS:
        # oo is fixed; the finite fixed point solves (d - a) z = b
        if abs(m.d - m.a) < _CLASSIFY_EPS * (abs(m.a) + abs(m.d)):
            raise ParabolicOrElliptic("translation or identity: single fixed point")
        zf = m.b / (m.d - m.a)
        mult = abs(m.a / m.d)  # multiplier at the finite fixed point
        if abs(mult - 1.0) < _CLASSIFY_EPS:
            raise ParabolicOrElliptic("derivative modulus 1 at both fixed points")
        if mult < 1.0:
            return FixedPair(attracting=zf, repelling=INFINITY)
        return FixedPair(attracting=INFINITY, repelling=zf)
    disc = cmath.sqrt((m.d - m.a) ** 2 + 4 * m.b * m.c)
    r1 = ((m.a - m.d) + disc) / (2 * m.c)
    r2 = ((m.a - m.d) - disc) / (2 * m.c)
    d1 = abs(m.derivative(r1))
    d2 = abs(m.derivative(r2))
    if abs(d1 - 1.0) < _CLASSIFY_EPS and abs(d2 - 1.0) < _CLASSIFY_EPS:
        raise ParabolicOrElliptic("derivative modulus 1 at both fixed points")
    if d1 < d2:
        return FixedPair(attracting=r1, repelling=r2)
    return FixedPair(attracting=r2, repelling=r1)


def complex_length(m: MoebiusMap) -> complex:
    """arccosh(tr(m^2)/2), principal branch with Re >= 0 and Im in (-pi, pi].

    tr(m^2) = (tr m)^2 - 2 for determinant-1 matrices (Cayley-Hamilton).
    Raises ParabolicOrElliptic when the real part vanishes.
    """
    tau = m.trace * m.trace - 2.0
    ell = cmath.acosh(tau / 2.0)
    if ell.imag <= -math.pi:
        ell = complex(ell.real, ell.imag + 2 * math.pi)
    if ell.real < _CLASSIFY_EPS:
        raise ParabolicOrElliptic(f"map is not loxodromic (complex length {ell!r})")
    return ell


def cross_ratio(z1, z2, z3, z4) -> complex:
    """[z1, z2; z3, z4] = (z1-z3)(z2-z4) / ((z1-z4)(z2-z3)).

    Each point appears in one numerator and one denominator factor, so an
    infinite point drops its two factors.  Raises DegenerateConfiguration
    when the result is 0, infinite or NaN.
    """
    # factor pairs (numerator, denominator) indexed by the points they contain
    num_factors = []
    den_factors = []
    inf1, inf2, inf3, inf4 = (is_infinite(z) for z in (z1, z2, z3, z4))
    if (inf1 and inf3) or (inf2 and inf4) or (inf1 and inf4) or (inf2 and inf3):
        raise DegenerateConfiguration("two infinite points share a factor")
    if not inf1 and not inf3:
        num_factors.append(z1 - z3)
    if not inf2 and not inf4:
        num_factors.append(z2 - z4)
    if not inf1 and not inf4:
        den_factors.append(z1 - z4)
    if not inf2 and not inf3:
        den_factors.append(z2 - z3)
    num = 1.0 + 0.0j
    for f in num_factors:
        num *= f
    den = 1.0 + 0.0j
    for f in den_factors:
        den *= f
    if abs(den) == 0.0:
        raise DegenerateConfiguration("cross ratio has zero denominator")
    value = num / den
    if abs(value) == 0.0 or not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DegenerateConfiguration(f"cross ratio degenerate: {value!r}")
    return value
