"""Pure-numpy kernel: per-level gap sums for the quadratic inverse-branch tree.

Breadth-first doubling over all words of the full binary shift.  Words are
extended on the left (first letter outermost), so the children of value v are
sqrt(v - c) and -sqrt(v - c); level arrays stay in lexicographic word order.
"""

import numpy as np

BACKEND = "python"

_BRANCH_POINT_EPS2 = 1e-28


def quad_gap_level_sums(c, seed_a, seed_b, flip_letter, n_levels):
    """Level sums of gap terms w(seed_a) - w(seed_b) over the full binary tree.

    Returns (abs_sums, signed_sums, status): arrays of length n_levels + 1
    where entry n covers all 2^n words of length n; signed terms carry
    (-1)^(count of flip_letter in w), flip_letter in {0, 1, 2} with 0 meaning
    no sign flips.  status is 0, or 1 if a square-root branch point was hit
    (|value - c| < 1e-14), in which case the sums are not usable.
    """
    c = complex(c)
    a = np.array([seed_a], dtype=np.complex128)
    b = np.array([seed_b], dtype=np.complex128)
    sign = np.array([1.0])
    abs_sums = np.empty(n_levels + 1)
    signed_sums = np.empty(n_levels + 1, dtype=np.complex128)
    for n in range(n_levels + 1):
        d = a - b
        abs_sums[n] = np.abs(d).sum()
        signed_sums[n] = (sign * d).sum()
        if n == n_levels:
            break
        sa = a - c
        sb = b - c
        if min(np.abs(sa).min(initial=np.inf), np.abs(sb).min(initial=np.inf)) ** 2 < _BRANCH_POINT_EPS2:
            return abs_sums, signed_sums, 1
        ra = np.sqrt(sa)
        rb = np.sqrt(sb)
        a = np.concatenate([ra, -ra])
        b = np.concatenate([rb, -rb])
        if flip_letter == 1:
            sign = np.concatenate([-sign, sign])
        elif flip_letter == 2:
            sign = np.concatenate([sign, -sign])
        else:
            sign = np.concatenate([sign, sign])
    return abs_sums, signed_sums, 0
