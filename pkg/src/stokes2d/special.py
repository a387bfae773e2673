"""Digamma, complex Hankel functions, and derivatives of H0 up to third order.

Arguments live in the open upper half-plane.  Small moduli go through the
log-power series engine (``backend``); large moduli use a rotated-ray
Gauss-Laguerre quadrature of the integral representation

    H_nu(z) = pref * int_0^inf e^{2izs} [s(1+s)]^(nu-1/2) ds,
    pref    = 2^(nu+1) z^nu e^{i(z - nu pi)} / (i sqrt(pi) Gamma(nu+1/2)),

valid for nu >= 1/2 and Im z > 0.  Integer orders at large modulus come from
integral anchors at nu = 1 and nu = 2 through the three-term recurrence and
the derivative identities H0' = -H1, H0'' = -H0 + H1/z,
H0''' = H1 + H0/z - 2 H1/z^2.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre

from . import backend
from .errors import QuadratureNonConvergence

__all__ = [
    "SWITCH_RADIUS",
    "SeriesCoefficients",
    "digamma",
    "series_coefficients",
    "hankel0_series",
    "hankel_integral",
    "hankel0_derivs",
    "hankel_low_orders",
]

# series below, integral above; both paths hold ~1e-11 or better in a wide
# annulus around this modulus
SWITCH_RADIUS = 8.0

_NODE_LADDER = (24, 32, 48, 64, 96)
_GAUSS_RTOL = 1e-13
_CHUNK = 32768


def digamma(n):
    """Digamma at a positive integer via the harmonic recurrence.

    Parameters
    ----------
    n : int
        Argument, n >= 1.

    Returns
    -------
    float
        psi(n) = -gamma_euler + sum_{j=1}^{n-1} 1/j.
    """
    if int(n) != n or n < 1:
        raise ValueError("digamma is defined here for positive integers only")
    return math.fsum(1.0 / j for j in range(1, int(n))) - np.euler_gamma


@dataclass(frozen=True)
class SeriesCoefficients:
    """One index of the log-series coefficient family.

    Attributes
    ----------
    ell : int
        Index.
    a, b, c, d : float
        a = (-1)^ell / ((ell!)^2 4^ell), b = 2*ell*a, c = (2*ell-1)*b,
        d = (2*ell-2)*c.
    C : complex
        -i pi/2 - log 2 - psi(ell+1).
    """

    ell: int
    a: float
    b: float
    c: float
    d: float
    C: complex


def series_coefficients(ell):
    """Log-series coefficients (a, b, c, d, C) at index ``ell``.

    Parameters
    ----------
    ell : int
        Nonnegative index.

    Returns
    -------
    SeriesCoefficients

    Notes
    -----
    ``a`` is built by the stable forward recurrence
    a_{l+1} = -a_l / (4 (l+1)^2).  Entries decay like 1/((l!)^2 4^l), reach
    float64 subnormals near l = 86 and saturate to exactly 0 a few indices
    later; every consumer in this package stops far earlier.
    """
    if int(ell) != ell or ell < 0:
        raise ValueError("coefficient index must be a nonnegative integer")
    ell = int(ell)
    a = 1.0
    for l in range(ell):
        a = -a / (4.0 * (l + 1) ** 2)
    b = a * 2.0 * ell
    c = b * (2.0 * ell - 1.0)
    d = c * (2.0 * ell - 2.0)
    big_c = complex(-math.log(2.0) - digamma(ell + 1), -0.5 * math.pi)
    return SeriesCoefficients(ell, a, b, c, d, big_c)


def hankel0_series(z, max_order=3):
    """H0 of the first kind and derivatives up to ``max_order`` by series.

    Parameters
    ----------
    z : complex
        Point with 0 < arg z < pi.
    max_order : int
        Highest derivative order, in 0..3.

    Returns
    -------
    list of complex
        [H0(z), H0'(z), ...] up to ``max_order``.

    Raises
    ------
    ValueError
        If z = 0, z lies outside the open upper half-plane, or
        ``max_order`` is outside 0..3.
    SeriesNonConvergence
        If the term cap is reached before the stopping rule fires.
    """
    if max_order not in (0, 1, 2, 3):
        raise ValueError("max_order must be in 0..3")
    zc = complex(z)
    if zc == 0:
        raise ValueError("series undefined at z = 0")
    if zc.imag <= 0:
        raise ValueError("argument must satisfy 0 < arg z < pi")
    vals = backend.h0_series_derivs(np.array([zc]))
    return [complex(vals[m, 0]) for m in range(max_order + 1)]


@lru_cache(maxsize=64)
def _laguerre_rule(n, alpha):
    x, w = roots_genlaguerre(n, alpha)
    return x, w


def _gauss_eval(nu, z, n):
    """Fixed-node rotated-ray quadrature of the integral representation."""
    u, w = _laguerre_rule(n, nu - 0.5)
    absz = np.abs(z)
    phi = 0.5 * np.pi - np.angle(z)
    rot = np.exp(1j * phi)
    base = 1.0 + (rot / (2.0 * absz))[:, None] * u[None, :]
    series = (base ** (nu - 0.5)) @ w
    pref = (2.0 ** (nu + 1.0)) * np.exp(1j * (z - nu * np.pi)) * z ** nu \
        / (1j * math.sqrt(math.pi) * math.gamma(nu + 0.5))
    scale = np.exp(1j * phi * (nu + 0.5)) * (2.0 * absz) ** (-(nu + 0.5))
    return pref * scale * series


def _integral_batch(nu, z):
    """Node-ladder adaptive evaluation over a flat complex array."""
    out = np.empty(z.shape, dtype=np.complex128)
    for lo in range(0, z.size, _CHUNK):
        part = z[lo:lo + _CHUNK]
        vals = _gauss_eval(nu, part, _NODE_LADDER[0])
        conv = np.zeros(part.shape, dtype=bool)
        for n in _NODE_LADDER[1:]:
            idx = np.flatnonzero(~conv)
            new = _gauss_eval(nu, part[idx], n)
            ref = np.maximum(np.abs(new), 1e-280)
            conv[idx] = np.abs(new - vals[idx]) <= _GAUSS_RTOL * ref
            vals[idx] = new
            if conv.all():
                break
        if not conv.all():
            raise QuadratureNonConvergence(
                "node ladder exhausted for nu=%g at %d points"
                % (nu, int(np.count_nonzero(~conv))))
        out[lo:lo + _CHUNK] = vals
    return out


def hankel_integral(nu, z):
    """H_nu of the first kind by adaptive quadrature of the integral form.

    Parameters
    ----------
    nu : float
        Order, nu >= 1/2.
    z : complex
        Point with Im z > 0.

    Returns
    -------
    complex

    Raises
    ------
    ValueError
        If nu < 1/2 or Im z <= 0.
    QuadratureNonConvergence
        If the node ladder is exhausted without two consecutive rungs
        agreeing to relative tolerance.
    """
    if nu < 0.5:
        raise ValueError("integral path requires nu >= 1/2")
    zc = complex(z)
    if zc.imag <= 0:
        raise ValueError("argument must satisfy Im z > 0")
    return complex(_integral_batch(float(nu), np.array([zc]))[0])


def hankel0_derivs(z):
    """H0 of the first kind and first three derivatives, path chosen per point.

    Parameters
    ----------
    z : array_like of complex
        Points with 0 < arg z < pi.

    Returns
    -------
    (4, n) complex128 ndarray
        Rows are H0, H0', H0'', H0'''.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    if np.any(z.imag <= 0):
        raise ValueError("arguments must satisfy 0 < arg z < pi")
    out = np.empty((4, z.size), dtype=np.complex128)
    small = np.abs(z) <= SWITCH_RADIUS
    if small.any():
        out[:, small] = backend.h0_series_derivs(z[small])
    big = ~small
    if big.any():
        zb = z[big]
        h1 = _integral_batch(1.0, zb)
        h2 = _integral_batch(2.0, zb)
        h0 = (2.0 / zb) * h1 - h2
        out[0, big] = h0
        out[1, big] = -h1
        out[2, big] = -h0 + h1 / zb
        out[3, big] = h1 + h0 / zb - 2.0 * h1 / (zb * zb)
    return out


def hankel_low_orders(z):
    """H_nu of the first kind for nu = 0..3 as a (4, n) array.

    Post-processing of ``hankel0_derivs`` through the three-term recurrence,
    so the result is path-consistent on both sides of the switch radius.
    """
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    v = hankel0_derivs(z)
    h0 = v[0]
    h1 = -v[1]
    h2 = (2.0 / z) * h1 - h0
    h3 = (4.0 / z) * h2 - h1
    return np.stack([h0, h1, h2, h3])
