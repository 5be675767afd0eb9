# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.  Signatures mirror :mod:`gidlab._pykernels`."""
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport M_PI, ceil, exp, fabs, log, log1p, sin, sqrt
from libc.stdint cimport int64_t
from numpy.random cimport bitgen_t

import numpy as np

BACKEND = "cython"


cdef inline double _open_uniform(bitgen_t *bg) noexcept nogil:
    cdef double u = bg.next_double(bg.state)
    if u == 0.0:
        u = 5.551115123125783e-17  # 2**-54
    return u


cdef inline int64_t _geometric(bitgen_t *bg, double p, double log_q) noexcept nogil:
    cdef int64_t k
    cdef double x
    if p >= 1.0:
        return 1
    if p > 0.99:
        k = 1
        while bg.next_double(bg.state) >= p:
            k += 1
        return k
    x = ceil(log(_open_uniform(bg)) / log_q)
    if x < 1.0:
        return 1
    return <int64_t>x


cdef inline double _stable(bitgen_t *bg, double alpha) noexcept nogil:
    # S = (a/c) * (b / (c W))**((1-alpha)/alpha), a = sin(alpha th), b = sin((1-alpha) th), c = sin(th)
    cdef double theta = M_PI * _open_uniform(bg)
    cdef double w = -log(_open_uniform(bg))
    cdef double c = sin(theta)
    return sin(alpha * theta) / c * exp(
        (1.0 - alpha) / alpha * log(sin((1.0 - alpha) * theta) / (c * w))
    )


def empirical_lt(const double[::1] x, const double[::1] grid):
    """Mean and standard error of exp(-lambda * x) for every lambda in ``grid``."""
    cdef Py_ssize_t n = x.shape[0], m = grid.shape[0], i, j
    cdef double lam, shift, y, s1, s2, var
    mean = np.empty(m)
    se = np.empty(m)
    cdef double[::1] mv = mean, sv = se
    with nogil:
        for j in range(m):
            lam = grid[j]
            shift = exp(-lam * x[0])
            s1 = 0.0
            s2 = 0.0
            for i in range(n):
                y = exp(-lam * x[i]) - shift
                s1 += y
                s2 += y * y
            mv[j] = shift + s1 / n
            if n > 1:
                var = (s2 - s1 * s1 / n) / (n - 1)
                sv[j] = sqrt(var / n) if var > 0.0 else 0.0
            else:
                sv[j] = 0.0
    return mean, se


def ks_statistic(const double[::1] a, const double[::1] b):
    """Two-sample KS distance between two *sorted* samples."""
    cdef Py_ssize_t n1 = a.shape[0], n2 = b.shape[0], i = 0, j = 0
    cdef int64_t diff, d = 0
    cdef double v
    with nogil:
        while i < n1 and j < n2:
            v = a[i] if a[i] < b[j] else b[j]
            while i < n1 and a[i] <= v:
                i += 1
            while j < n2 and b[j] <= v:
                j += 1
            # integer numerator |i n2 - j n1|, one rounding at the end
            diff = <int64_t>i * n2 - <int64_t>j * n1
            if diff < 0:
                diff = -diff
            if diff > d:
                d = diff
    return <double>d / (<double>n1 * <double>n2)


def segment_sums(const double[::1] values, const int64_t[::1] counts):
    """Sum consecutive runs of ``values`` of the given lengths (zero-length runs give 0)."""
    cdef Py_ssize_t m = counts.shape[0], k, pos = 0
    cdef int64_t c, t
    cdef double s
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for k in range(m):
            c = counts[k]
            s = 0.0
            for t in range(c):
                s += values[pos]
                pos += 1
            o[k] = s
    return out


# summands evaluated per vectorized pass
cdef enum:
    _STABLE_BLOCK = 4096


cdef void _kanter_block(const double *ua, const double *ue, double *out, Py_ssize_t n, double alpha) noexcept nogil:
    # branch-free so the compiler can use vector sin/log/exp
    cdef Py_ssize_t i
    cdef double theta, c, r = (1.0 - alpha) / alpha
    for i in range(n):
        theta = M_PI * ua[i]
        c = sin(theta)
        out[i] = sin(alpha * theta) / c * exp(r * log(sin((1.0 - alpha) * theta) / (c * -log(ue[i]))))


def geometric_stable_sums(rng, Py_ssize_t m, double p, double alpha, double scale):
    """``m`` draws of scale * sum_{j <= N} S_j, N ~ Geometric(p), S_j positive alpha-stable.

    ``alpha == 1`` makes every summand equal to one.  Counts are drawn first;
    summands then come in fixed-size blocks whose uniforms are drawn before
    the block is transformed.
    """
    bit_generator = rng.bit_generator
    capsule = bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("invalid bit generator capsule")
    cdef bitgen_t *bg = <bitgen_t *>PyCapsule_GetPointer(capsule, "BitGenerator")
    cdef double log_q = log1p(-p) if p < 1.0 else 0.0
    cdef Py_ssize_t k, i, avail = 0, pos = 0
    cdef int64_t left
    cdef double s
    cdef double ua[_STABLE_BLOCK]
    cdef double ue[_STABLE_BLOCK]
    cdef double buf[_STABLE_BLOCK]
    counts_arr = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    out = np.empty(m)
    cdef double[::1] o = out
    with bit_generator.lock, nogil:
        for k in range(m):
            counts[k] = _geometric(bg, p, log_q)
        if alpha >= 1.0:
            for k in range(m):
                o[k] = scale * <double>counts[k]
        else:
            for k in range(m):
                left = counts[k]
                s = 0.0
                while left > 0:
                    if pos == avail:
                        for i in range(_STABLE_BLOCK):
                            ua[i] = _open_uniform(bg)
                        for i in range(_STABLE_BLOCK):
                            ue[i] = _open_uniform(bg)
                        _kanter_block(ua, ue, buf, _STABLE_BLOCK, alpha)
                        avail = _STABLE_BLOCK
                        pos = 0
                    s += buf[pos]
                    pos += 1
                    left -= 1
                o[k] = scale * s
    return out
