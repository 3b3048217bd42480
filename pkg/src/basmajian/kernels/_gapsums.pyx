# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: per-level gap sums for the quadratic inverse-branch tree.

Breadth-first over flat structure-of-arrays buffers with a branch-free
complex square root, Kahan-compensated per-level accumulators and signs
recovered from the word index bit pattern (letter 2 <-> set bit), so the
level arrays match the numpy fallback `_gapsums_py` elementwise.
"""

from libc.stdlib cimport free, malloc
from libc.math cimport copysign, fabs, sqrt

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define POPCOUNT64(x) __builtin_popcountll(x)
    #else
    static int POPCOUNT64(unsigned long long x) {
        int n = 0;
        while (x) { n += (int)(x & 1ULL); x >>= 1; }
        return n;
    }
    #endif
    """
    int POPCOUNT64(unsigned long long) nogil

BACKEND = "compiled"

DEF BRANCH_POINT_EPS2 = 1e-28
DEF MAX_LEVELS = 24  # 64 B per tree slot: caps the buffers at ~1 GiB


cdef struct Acc:
    double total
    double comp


cdef inline void _kadd(Acc *acc, double value) nogil:
    cdef double y = value - acc.comp
    cdef double t = acc.total + y
    acc.comp = (t - acc.total) - y
    acc.total = t


cdef inline void _sqrt_cplx(double re, double im, double *out_re, double *out_im) nogil:
    # principal branch with C99 signed-zero semantics; values here are O(1)
    # so the naive modulus cannot overflow
    cdef double r = sqrt(re * re + im * im)
    cdef double t = sqrt(0.5 * (r + fabs(re)))
    if t == 0.0:
        out_re[0] = 0.0
        out_im[0] = 0.0
        return
    if re >= 0.0:
        out_re[0] = t
        out_im[0] = im / (2.0 * t)
    else:
        out_re[0] = fabs(im) / (2.0 * t)
        out_im[0] = copysign(t, im)


def quad_gap_level_sums(c, seed_a, seed_b, flip_letter, n_levels):
    """Level sums of gap terms w(seed_a) - w(seed_b) over the full binary tree.

    Same contract as the numpy fallback `_gapsums_py.quad_gap_level_sums`:
    returns (abs_sums, signed_sums, status) with arrays of length
    n_levels + 1; status 1 flags a square-root branch-point hit.
    """
    import numpy as np

    cdef int depth = int(n_levels)
    cdef int flip = int(flip_letter)
    cdef double complex cc = complex(c)
    cdef double complex sa = complex(seed_a)
    cdef double complex sb = complex(seed_b)
    if depth < 0:
        raise ValueError("n_levels must be >= 0")
    if depth > MAX_LEVELS:
        raise ValueError(f"n_levels > {MAX_LEVELS} would need >1 GiB of buffers")

    abs_out = np.zeros(depth + 1, dtype=np.float64)
    sr_out = np.zeros(depth + 1, dtype=np.float64)
    si_out = np.zeros(depth + 1, dtype=np.float64)
    cdef double[::1] abs_v = abs_out
    cdef double[::1] sr_v = sr_out
    cdef double[::1] si_v = si_out

    cdef size_t cap = (<size_t> 1) << depth
    cdef double *buf = <double *> malloc(8 * cap * sizeof(double))
    if buf == NULL:
        raise MemoryError()

    cdef int status
    with nogil:
        status = _run(cc.real, cc.imag, sa.real, sa.imag, sb.real, sb.imag,
                      flip, depth, buf, cap, &abs_v[0], &sr_v[0], &si_v[0])
    free(buf)
    return abs_out, sr_out + 1j * si_out, status


cdef int _run(double cre, double cim,
              double sare, double saim, double sbre, double sbim,
              int flip, int depth, double *buf, size_t cap,
              double *abs_sums, double *signed_re, double *signed_im) nogil:
    # ping-pong SoA buffers: a_re, a_im, b_re, b_im for parents and children
    cdef double *pa_re = buf
    cdef double *pa_im = buf + cap
    cdef double *pb_re = buf + 2 * cap
    cdef double *pb_im = buf + 3 * cap
    cdef double *ca_re = buf + 4 * cap
    cdef double *ca_im = buf + 5 * cap
    cdef double *cb_re = buf + 6 * cap
    cdef double *cb_im = buf + 7 * cap
    cdef double *swp

    cdef size_t size = 1
    cdef size_t i
    cdef int level, sign_bits
    cdef double dre, dim, s, xre, xim, rre, rim
    cdef Acc a_acc, r_acc, i_acc

    pa_re[0] = sare
    pa_im[0] = saim
    pb_re[0] = sbre
    pb_im[0] = sbim

    for level in range(depth + 1):
        a_acc.total = 0.0; a_acc.comp = 0.0
        r_acc.total = 0.0; r_acc.comp = 0.0
        i_acc.total = 0.0; i_acc.comp = 0.0
        for i in range(size):
            dre = pa_re[i] - pb_re[i]
            dim = pa_im[i] - pb_im[i]
            _kadd(&a_acc, sqrt(dre * dre + dim * dim))
            if flip == 0:
                s = 1.0
            else:
                # letter 2 at a position <-> set bit in the word index
                sign_bits = POPCOUNT64(i)
                if flip == 1:
                    sign_bits = level - sign_bits
                s = -1.0 if (sign_bits & 1) else 1.0
            _kadd(&r_acc, s * dre)
            _kadd(&i_acc, s * dim)
        abs_sums[level] = a_acc.total
        signed_re[level] = r_acc.total
        signed_im[level] = i_acc.total

        if level == depth:
            break
        for i in range(size):
            xre = pa_re[i] - cre
            xim = pa_im[i] - cim
            if xre * xre + xim * xim < BRANCH_POINT_EPS2:
                return 1
            _sqrt_cplx(xre, xim, &rre, &rim)
            ca_re[i] = rre; ca_im[i] = rim
            ca_re[size + i] = -rre; ca_im[size + i] = -rim
            xre = pb_re[i] - cre
            xim = pb_im[i] - cim
            if xre * xre + xim * xim < BRANCH_POINT_EPS2:
                return 1
            _sqrt_cplx(xre, xim, &rre, &rim)
            cb_re[i] = rre; cb_im[i] = rim
            cb_re[size + i] = -rre; cb_im[size + i] = -rim
        swp = pa_re; pa_re = ca_re; ca_re = swp
        swp = pa_im; pa_im = ca_im; ca_im = swp
        swp = pb_re; pb_re = cb_re; cb_re = swp
        swp = pb_im; pb_im = cb_im; cb_im = swp
        size <<= 1
    return 0
