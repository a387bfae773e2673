"""Numpy implementation of the Hankel log-series engine.

This is the pure-python backend; ``_seriescore`` (Cython) provides the same
entry points with identical semantics.  Everything is expressed through the
scaled sums

    T_m(z) := (pi / 2i) * d^m/dz^m H_0^(1)(z),   m = 0..3,

each of which splits into a meromorphic tail plus two entire power sums (one
multiplying log z, one not).  Evaluating those eight sums once per point is
what the rest of the package builds every kernel out of.
"""

import numpy as np

from .errors import SeriesNonConvergence

LMAX = 60
SERIES_RTOL = 1e-16
# above this modulus the alternating sums lose too many digits even in
# extended precision; callers switch to the integral path well before
SERIES_HARD_LIMIT = 24.0
# extended precision kicks in here; below, float64 keeps full accuracy
_EXTENDED_THRESHOLD = 4.0

_EULER = "0.57721566490153286060651209008240243104215933593992"
_LOG2 = "0.69314718055994530941723212145817656807550013436026"
_PI = "3.14159265358979323846264338327950288419716939937511"


def _build_tables(dtype):
    """Coefficient tables a_l, b_l, c_l, d_l and the constants C_l.

    Built by forward recurrences so every entry is exact-to-dtype.  The sums
    they feed cancel heavily at moderate |z|, so the extended-precision path
    needs extended-precision tables, not upcast float64 ones.
    """
    one = dtype(1)
    ell = np.arange(LMAX + 1)
    a = np.zeros(LMAX + 1, dtype=dtype)
    a[0] = one
    for l in range(LMAX):
        a[l + 1] = -a[l] / dtype(4 * (l + 1) ** 2)
    b = a * ell.astype(dtype) * dtype(2)
    c = b * (2 * ell - 1).astype(dtype)
    d = c * (2 * ell - 2).astype(dtype)
    psi = np.zeros(LMAX + 1, dtype=dtype)
    psi[0] = -dtype(_EULER)
    for l in range(1, LMAX + 1):
        psi[l] = psi[l - 1] + one / dtype(l)
    c_real = -dtype(_LOG2) - psi
    c_imag = np.full(LMAX + 1, -dtype(_PI) / 2, dtype=dtype)
    return a, b, c, d, c_real, c_imag


_TAB64 = _build_tables(np.float64)
_TAB80 = _build_tables(np.longdouble)


def _sum_block(w, tables, cdtype):
    """Accumulate the eight base sums for a batch of points.

    Returns an (8, n) array ordered [s0C, s0L, s1C, s1L, s2C, s2L, s3C, s3L]
    with

      T0 = s0C + s0L log w
      T1 = s1C + s1L log w + 1/w
      T2 = s2C + s2L log w - 1/w^2
      T3 = s3C + s3L log w + 2/w^3
    """
    a, b, c, d, cr, ci = tables
    w = w.astype(cdtype)
    n = w.shape[0]
    w2 = w * w
    out = np.zeros((8, n), dtype=cdtype)
    pw = np.ones(n, dtype=cdtype)  # w^{2l}; shifted normalisations applied at the end
    done = np.zeros(n, dtype=bool)
    for l in range(LMAX + 1):
        C = cdtype(cr[l]) + cdtype(1j) * cdtype(ci[l])
        t0C = a[l] * C * pw
        t0L = a[l] * pw
        out[0] += t0C
        out[1] += t0L
        t3mag = 0.0
        if l >= 1:
            out[2] += (b[l] * C + a[l]) * pw
            out[3] += b[l] * pw
            out[4] += (c[l] * C + b[l] + a[l] * (2 * l - 1)) * pw
            out[5] += c[l] * pw
            out[6] += c[l] * pw  # the c-sum part of s3C starts at l=1
        if l >= 2:
            t3 = (d[l] * C + b[l] * (2 * l - 2) + a[l] * (2 * l - 1) * (2 * l - 2)) * pw
            out[6] += t3
            out[7] += d[l] * pw
            t3mag = np.abs(t3)
        # stopping rule: slowest pair (order 0) plus the fastest-growing
        # coefficient family (order 3) must both be negligible
        mag = np.abs(t0C) + np.abs(t0L) + t3mag
        ref = 1.0 + np.abs(out[0]) + np.abs(out[6])
        done |= mag < SERIES_RTOL * ref
        if done.all():
            break
        pw = pw * w2
    else:
        bad = np.abs(w[~done])
        raise SeriesNonConvergence(
            f"series cap {LMAX} reached for |w| up to {float(bad.max()):.3g}")
    out[2] /= w
    out[3] /= w
    out[4] /= w2
    out[5] /= w2
    out[6] /= w2 * w
    out[7] /= w2 * w
    return out


def base_sums(w):
    """Eight fundamental log-series sums for each point of ``w``.

    Parameters
    ----------
    w : complex array
        Nonzero points; callers guarantee |w| below the series switch.

    Returns
    -------
    (8, n) complex128 array [s0C, s0L, s1C, s1L, s2C, s2L, s3C, s3L].
    """
    w = np.ascontiguousarray(w, dtype=np.complex128).ravel()
    if w.size == 0:
        return np.zeros((8, 0), dtype=np.complex128)
    if np.any(w == 0):
        raise ValueError("series sums undefined at w = 0")
    absw = np.abs(w)
    if np.any(absw > SERIES_HARD_LIMIT):
        raise SeriesNonConvergence(
            f"|w| up to {absw.max():.3g} exceeds usable series range")
    out = np.empty((8, w.size), dtype=np.complex128)
    small = absw <= _EXTENDED_THRESHOLD
    if small.any():
        out[:, small] = _sum_block(w[small], _TAB64, np.complex128)
    big = ~small
    if big.any():
        out[:, big] = _sum_block(w[big], _TAB80, np.clongdouble).astype(np.complex128)
    return out


def h0_series_derivs(z):
    """H_0^(1)(z) and its first three derivatives by the log series.

    Returns a (4, n) complex128 array.  Accurate to ~1e-13 relative for
    0 < arg z < pi up to the series switch radius; the extended-precision
    branch absorbs the e^{2 Im z} cancellation near the imaginary axis.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    if z.size == 0:
        return np.zeros((4, 0), dtype=np.complex128)
    if np.any(z == 0):
        raise ValueError("H0 series undefined at z = 0")
    absz = np.abs(z)
    if np.any(absz > SERIES_HARD_LIMIT):
        raise SeriesNonConvergence(
            f"|z| up to {absz.max():.3g} exceeds usable series range")
    res = np.empty((4, z.size), dtype=np.complex128)
    small = absz <= _EXTENDED_THRESHOLD
    if small.any():
        zs = z[small]
        s = _sum_block(zs, _TAB64, np.complex128)
        logz = np.log(zs)
        res[0, small] = s[0] + s[1] * logz
        res[1, small] = s[2] + s[3] * logz + 1.0 / zs
        res[2, small] = s[4] + s[5] * logz - 1.0 / (zs * zs)
        res[3, small] = s[6] + s[7] * logz + 2.0 / (zs ** 3)
        res[:, small] *= 2j / np.pi
    big = ~small
    if big.any():
        zb = z[big].astype(np.clongdouble)
        s = _sum_block(z[big], _TAB80, np.clongdouble)
        logz = np.log(zb)
        pi80 = np.longdouble(_PI)
        fac = np.clongdouble(2j) / np.clongdouble(pi80)
        res[0, big] = ((s[0] + s[1] * logz) * fac).astype(np.complex128)
        res[1, big] = ((s[2] + s[3] * logz + 1.0 / zb) * fac).astype(np.complex128)
        res[2, big] = ((s[4] + s[5] * logz - 1.0 / (zb * zb)) * fac).astype(np.complex128)
        res[3, big] = ((s[6] + s[7] * logz + 2.0 / (zb ** 3)) * fac).astype(np.complex128)
    return res


BACKEND_NAME = "python"
