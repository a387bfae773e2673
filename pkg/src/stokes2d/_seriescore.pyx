# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the Hankel log-series engine.

Entry points and semantics match ``_seriespy`` exactly: the same eight
scaled sums, the same float64/extended-precision split, the same stopping
rule, and the same error types.  The per-point C loops terminate each point
individually, which is what makes this backend fast.
"""

import numpy as np

from .errors import SeriesNonConvergence
from ._seriespy import _build_tables

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex clog(double complex)
    long double creall(long double complex)
    long double cimagl(long double complex)
    long double complex clogl(long double complex)

cdef extern from "math.h" nogil:
    double fabs(double)
    long double fabsl(long double)


cdef inline double _mag1(double complex x) nogil:
    return fabs(creal(x)) + fabs(cimag(x))


cdef inline long double _mag1l(long double complex x) nogil:
    return fabsl(creall(x)) + fabsl(cimagl(x))

LMAX = 60
SERIES_RTOL = 1e-16
SERIES_HARD_LIMIT = 24.0
_EXTENDED_THRESHOLD = 4.0
BACKEND_NAME = "cython"

cdef int _LMAX_C = 60
cdef double _RTOL_C = 1e-16

_T64 = tuple(np.ascontiguousarray(t, dtype=np.float64) for t in _build_tables(np.float64))
_T80 = tuple(np.ascontiguousarray(t, dtype=np.longdouble) for t in _build_tables(np.longdouble))

cdef const double[::1] _A64 = _T64[0]
cdef const double[::1] _B64 = _T64[1]
cdef const double[::1] _C64 = _T64[2]
cdef const double[::1] _D64 = _T64[3]
cdef const double[::1] _CR64 = _T64[4]
cdef const double[::1] _CI64 = _T64[5]

cdef const long double[::1] _A80 = _T80[0]
cdef const long double[::1] _B80 = _T80[1]
cdef const long double[::1] _C80 = _T80[2]
cdef const long double[::1] _D80 = _T80[3]
cdef const long double[::1] _CR80 = _T80[4]
cdef const long double[::1] _CI80 = _T80[5]

cdef long double _PI_L = <long double> np.longdouble(
    "3.14159265358979323846264338327950288419716939937511")


cdef bint _sum_point_d(double complex w, double complex* s) nogil:
    """Eight normalized sums at one point in double precision.

    Returns True on convergence within the term cap.
    """
    cdef double complex w2 = w * w
    cdef double complex pw = 1.0
    cdef double complex C, t0C, t3
    cdef double mag, ref, t3mag
    cdef int l
    cdef bint ok = 0
    cdef int i
    for i in range(8):
        s[i] = 0.0
    for l in range(_LMAX_C + 1):
        C = _CR64[l] + 1j * _CI64[l]
        t0C = _A64[l] * C * pw
        s[0] += t0C
        s[1] += _A64[l] * pw
        t3mag = 0.0
        if l >= 1:
            s[2] += (_B64[l] * C + _A64[l]) * pw
            s[3] += _B64[l] * pw
            s[4] += (_C64[l] * C + _B64[l] + _A64[l] * (2 * l - 1)) * pw
            s[5] += _C64[l] * pw
            s[6] += _C64[l] * pw
        if l >= 2:
            t3 = (_D64[l] * C + _B64[l] * (2 * l - 2)
                  + _A64[l] * (2 * l - 1) * (2 * l - 2)) * pw
            s[6] += t3
            s[7] += _D64[l] * pw
            t3mag = _mag1(t3)
        mag = _mag1(t0C) + _mag1(_A64[l] * pw) + t3mag
        ref = 1.0 + _mag1(s[0]) + _mag1(s[6])
        if mag < _RTOL_C * ref:
            ok = 1
            break
        pw = pw * w2
    s[2] /= w
    s[3] /= w
    s[4] /= w2
    s[5] /= w2
    s[6] /= w2 * w
    s[7] /= w2 * w
    return ok


cdef bint _sum_point_l(long double complex w, long double complex* s) nogil:
    """Extended-precision twin of ``_sum_point_d``."""
    cdef long double complex w2 = w * w
    cdef long double complex pw = 1.0
    cdef long double complex C, t0C, t3
    cdef long double mag, ref, t3mag
    cdef int l
    cdef bint ok = 0
    cdef int i
    for i in range(8):
        s[i] = 0.0
    for l in range(_LMAX_C + 1):
        C = _CR80[l] + 1j * _CI80[l]
        t0C = _A80[l] * C * pw
        s[0] += t0C
        s[1] += _A80[l] * pw
        t3mag = 0.0
        if l >= 1:
            s[2] += (_B80[l] * C + _A80[l]) * pw
            s[3] += _B80[l] * pw
            s[4] += (_C80[l] * C + _B80[l] + _A80[l] * (2 * l - 1)) * pw
            s[5] += _C80[l] * pw
            s[6] += _C80[l] * pw
        if l >= 2:
            t3 = (_D80[l] * C + _B80[l] * (2 * l - 2)
                  + _A80[l] * (2 * l - 1) * (2 * l - 2)) * pw
            s[6] += t3
            s[7] += _D80[l] * pw
            t3mag = _mag1l(t3)
        mag = _mag1l(t0C) + _mag1l(_A80[l] * pw) + t3mag
        ref = 1.0 + _mag1l(s[0]) + _mag1l(s[6])
        if mag < _RTOL_C * ref:
            ok = 1
            break
        pw = pw * w2
    s[2] /= w
    s[3] /= w
    s[4] /= w2
    s[5] /= w2
    s[6] /= w2 * w
    s[7] /= w2 * w
    return ok


def _validated(w, zero_msg):
    w = np.ascontiguousarray(w, dtype=np.complex128).ravel()
    if w.size and np.any(w == 0):
        raise ValueError(zero_msg)
    return w


def base_sums(w):
    """Eight fundamental log-series sums for each point of ``w``.

    Same contract as the numpy backend: complex input away from zero with
    |w| below the usable series range, output (8, n) complex128.
    """
    w = _validated(w, "series sums undefined at w = 0")
    cdef Py_ssize_t n = w.shape[0]
    out = np.empty((8, n), dtype=np.complex128)
    if n == 0:
        return out
    absw = np.abs(w)
    if np.any(absw > SERIES_HARD_LIMIT):
        raise SeriesNonConvergence(
            f"|w| up to {absw.max():.3g} exceeds usable series range")
    cdef double complex[::1] wv = w
    cdef double complex[:, ::1] ov = out
    cdef double complex sd[8]
    cdef long double complex sl[8]
    cdef Py_ssize_t i
    cdef int j
    cdef double worst = -1.0
    cdef double aw
    with nogil:
        for i in range(n):
            aw = cabs(wv[i])
            if aw <= 4.0:
                if not _sum_point_d(wv[i], sd):
                    if aw > worst:
                        worst = aw
                for j in range(8):
                    ov[j, i] = sd[j]
            else:
                if not _sum_point_l(<long double complex> wv[i], sl):
                    if aw > worst:
                        worst = aw
                for j in range(8):
                    ov[j, i] = <double complex> sl[j]
    if worst >= 0.0:
        raise SeriesNonConvergence(
            f"series cap {LMAX} reached for |w| up to {worst:.3g}")
    return out


def h0_series_derivs(z):
    """H_0^(1)(z) and its first three derivatives by the log series.

    Same contract as the numpy backend; returns a (4, n) complex128 array.
    """
    z = _validated(z, "H0 series undefined at z = 0")
    cdef Py_ssize_t n = z.shape[0]
    out = np.empty((4, n), dtype=np.complex128)
    if n == 0:
        return out
    absz = np.abs(z)
    if np.any(absz > SERIES_HARD_LIMIT):
        raise SeriesNonConvergence(
            f"|z| up to {absz.max():.3g} exceeds usable series range")
    cdef double complex[::1] zv = z
    cdef double complex[:, ::1] ov = out
    cdef double complex sd[8]
    cdef long double complex sl[8]
    cdef double complex wd, logd, facd
    cdef long double complex wl, logl_, facl
    cdef Py_ssize_t i
    cdef double worst = -1.0
    cdef double aw
    facd = 2j / (<double> _PI_L)
    facl = <long double complex> 2j / _PI_L
    with nogil:
        for i in range(n):
            wd = zv[i]
            aw = cabs(wd)
            if aw <= 4.0:
                if not _sum_point_d(wd, sd):
                    if aw > worst:
                        worst = aw
                logd = clog(wd)
                ov[0, i] = (sd[0] + sd[1] * logd) * facd
                ov[1, i] = (sd[2] + sd[3] * logd + 1.0 / wd) * facd
                ov[2, i] = (sd[4] + sd[5] * logd - 1.0 / (wd * wd)) * facd
                ov[3, i] = (sd[6] + sd[7] * logd + 2.0 / (wd * wd * wd)) * facd
            else:
                wl = <long double complex> wd
                if not _sum_point_l(wl, sl):
                    if aw > worst:
                        worst = aw
                logl_ = clogl(wl)
                ov[0, i] = <double complex> ((sl[0] + sl[1] * logl_) * facl)
                ov[1, i] = <double complex> ((sl[2] + sl[3] * logl_ + 1.0 / wl) * facl)
                ov[2, i] = <double complex> ((sl[4] + sl[5] * logl_ - 1.0 / (wl * wl)) * facl)
                ov[3, i] = <double complex> ((sl[6] + sl[7] * logl_ + 2.0 / (wl * wl * wl)) * facl)
    if worst >= 0.0:
        raise SeriesNonConvergence(
            f"series cap {LMAX} reached for |w| up to {worst:.3g}")
    return out
