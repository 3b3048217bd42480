"""Hot numerical kernels with backend selection at import time.

The compiled Cython kernel is preferred; the numpy implementation in
`_gapsums_py` is the fallback.  Set ``BASMAJIAN_PURE_PYTHON=1`` to force the
fallback (used by the benchmark and the kernel-equivalence tests).
"""

import os

from ..errors import BranchAmbiguity
from . import _gapsums_py

if os.environ.get("BASMAJIAN_PURE_PYTHON"):
    _impl = _gapsums_py
else:
    try:
        from . import _gapsums as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _gapsums_py

BACKEND = _impl.BACKEND


def quad_gap_level_sums(c, seed_a, seed_b, flip_letter, n_levels):
    """Per-level gap sums over the full binary branch tree of z -> +/-sqrt(z-c).

    Level n covers all 2^n words of length n, first letter outermost, in
    lexicographic order.  Entry n of ``signed`` is
    sum over |w|=n of (-1)^(count of flip_letter in w) * (w(seed_a) - w(seed_b))
    and entry n of ``abs`` is the corresponding sum of absolute values.
    flip_letter 0 disables the sign; raises BranchAmbiguity if the traversal
    hits a square-root branch point.
    """
    abs_sums, signed_sums, status = _impl.quad_gap_level_sums(
        complex(c), complex(seed_a), complex(seed_b), int(flip_letter), int(n_levels)
    )
    if status:
        raise BranchAmbiguity(
            f"square-root branch point hit while expanding the gap tree at c={c!r}"
        )
    return abs_sums, signed_sums


def available_backends():
    """Names of importable kernel backends, compiled one first if present."""
    names = []
    try:
        from . import _gapsums  # noqa: F401

        names.append("compiled")
    except ImportError:
        pass
    names.append("python")
    return names
