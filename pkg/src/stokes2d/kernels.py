"""Fundamental solutions of the planar Stokes resolvent system.

Evaluates the Helmholtz kernel G(x;lambda) = (i/4) H0(k|x|), the Laplace
kernel G(x;0) = -(1/2 pi) log|x|, the velocity kernels Gamma(x;lambda) and
Gamma(x;0), the pressure kernel Phi, and the derivative tensors the layer
potentials need.  Differences such as Gamma(lambda) - Gamma(0) collapse
catastrophically when |lambda||x|^2 is small; in that regime (threshold 1/2)
the evaluators switch to series forms in which the mutually cancelling terms
have been removed analytically.

Array-valued batch functions (suffix ``_batch``) operate on (n, 2)
displacement arrays and are the building blocks for quadrature assembly;
the per-point operations wrap them and report which path was taken.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import special
from .backend import base_sums

__all__ = [
    "ResolventParameter",
    "KernelBlock",
    "SweepSpec",
    "DecayRow",
    "make_resolvent_parameter",
    "laplace_green",
    "helmholtz_green",
    "helmholtz_diff_third",
    "stokeslet",
    "stokeslet_stationary",
    "pressure_kernel",
    "grad_stokeslet_difference",
    "verify_decay_suite",
]

SAFE_REGIME = 0.5
_I4 = 0.25j
_TWO_PI = 2.0 * math.pi
_EYE = np.eye(2)

# index-1 series constants entering the removed problematic terms
_A1 = -0.25
_B1 = -0.5
_C1 = -0.5
_BIGC1 = complex(-math.log(2.0) - (1.0 - np.euler_gamma), -0.5 * math.pi)
_E2 = _C1 * _BIGC1 + _B1 + _A1
_E1 = _B1 * _BIGC1 + _A1


@dataclass(frozen=True)
class ResolventParameter:
    """Validated resolvent parameter lambda with its wavenumber.

    Attributes
    ----------
    lam : complex
        Resolvent parameter, nonzero, inside the sector |arg| < pi - theta.
    theta : float
        Sector opening parameter in (0, pi/2).
    r : float
        Modulus of lam.
    tau : float
        Argument of lam.
    k : complex
        sqrt(r) e^{i (pi + tau)/2}; satisfies k^2 = -lam and Im k > 0.
    """

    lam: complex
    theta: float
    r: float
    tau: float
    k: complex


def make_resolvent_parameter(lam, theta=math.pi / 4):
    """Validate lambda against the sector and attach the wavenumber.

    Parameters
    ----------
    lam : complex
        Nonzero resolvent parameter with |arg lam| < pi - theta.
    theta : float
        Sector parameter in (0, pi/2).

    Returns
    -------
    ResolventParameter

    Raises
    ------
    ValueError
        If lam = 0, lam lies outside the sector, or theta is out of range.
    """
    lam = complex(lam)
    theta = float(theta)
    if not 0.0 < theta < math.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    if lam == 0:
        raise ValueError("resolvent parameter must be nonzero")
    r = abs(lam)
    tau = cmath.phase(lam)
    if abs(tau) >= math.pi - theta:
        raise ValueError(
            f"lambda with argument {tau:.6g} lies outside the sector "
            f"|arg| < {math.pi - theta:.6g}")
    k = math.sqrt(r) * cmath.exp(0.5j * (math.pi + tau))
    return ResolventParameter(lam, theta, r, tau, k)


@dataclass(frozen=True)
class KernelBlock:
    """Kernel evaluation result with the path taken.

    Attributes
    ----------
    value : ndarray or scalar
        Kernel value; tensor rank matches the requested derivative order.
    path : str
        "direct" or "cancellation_safe".
    regime : float
        |lambda| |x|^2 at the evaluation point (0 for lambda-free kernels).
    """

    value: object
    path: str
    regime: float


def _as_displacements(dx):
    dx = np.atleast_2d(np.asarray(dx, dtype=np.float64))
    if dx.shape[-1] != 2:
        raise ValueError("displacements must have two components")
    rho = np.hypot(dx[:, 0], dx[:, 1])
    if np.any(rho == 0.0):
        raise ValueError("kernel evaluation requires |x| > 0")
    return dx, rho


def _unit_tensors(dx, rho):
    """Unit displacement x̂ and the dimensionless tensors built from it."""
    xh = dx / rho[:, None]
    bb = xh[:, :, None] * xh[:, None, :]
    c3 = bb[:, :, :, None] * xh[:, None, None, :]
    tt = (_EYE[None, None, :, :] * xh[:, :, None, None]
          + _EYE[None, :, None, :] * xh[:, None, :, None]
          + _EYE[None, :, :, None] * xh[:, None, None, :])
    return xh, bb, c3, tt


# ----------------------------------------------------------------------
# lambda-free kernels (closed forms)

def laplace_batch(dx, order=0):
    """Laplace fundamental solution or a derivative tensor, batched."""
    dx, rho = _as_displacements(dx)
    if order == 0:
        return -np.log(rho) / _TWO_PI
    xh, bb, c3, tt = _unit_tensors(dx, rho)
    if order == 1:
        return -xh / (_TWO_PI * rho[:, None])
    if order == 2:
        return (-_EYE[None] + 2.0 * bb) / (_TWO_PI * rho[:, None, None] ** 2)
    if order == 3:
        return (tt - 4.0 * c3) / (math.pi * rho[:, None, None, None] ** 3)
    raise ValueError("derivative order must be in 0..3")


def stationary_batch(dx, order=0):
    """Stationary Stokeslet Gamma(x;0) or its gradient, batched."""
    dx, rho = _as_displacements(dx)
    xh, bb, c3, tt = _unit_tensors(dx, rho)
    if order == 0:
        return (-_EYE[None] * np.log(rho)[:, None, None] + bb) / (4.0 * math.pi)
    if order == 1:
        sym = (_EYE[None, None, :, :] * xh[:, :, None, None]
               + _EYE[None, :, None, :] * xh[:, None, :, None]
               - _EYE[None, :, :, None] * xh[:, None, None, :])
        # note sym = tt - 2 delta_{ab} xhat_g, written out for clarity
        return (sym - 2.0 * c3) / (4.0 * math.pi * rho[:, None, None, None])
    raise ValueError("derivative order must be 0 or 1")


def pressure_batch(dx, order=0):
    """Pressure kernel Phi(x) or its gradient, batched."""
    dx, rho = _as_displacements(dx)
    if order == 0:
        return dx / (_TWO_PI * rho[:, None] ** 2)
    if order == 1:
        xh, bb, _, _ = _unit_tensors(dx, rho)
        return (_EYE[None] - 2.0 * bb) / (_TWO_PI * rho[:, None, None] ** 2)
    raise ValueError("derivative order must be 0 or 1")


# ----------------------------------------------------------------------
# Helmholtz kernel via Hankel evaluators

def helmholtz_batch(dx, p, order=0):
    """Helmholtz kernel G(x;lambda) or a derivative tensor, batched."""
    dx, rho = _as_displacements(dx)
    w = p.k * rho
    h = special.hankel0_derivs(w)
    if order == 0:
        return _I4 * h[0]
    xh, bb, c3, tt = _unit_tensors(dx, rho)
    k = p.k
    if order == 1:
        return _I4 * k * xh * h[1][:, None]
    if order == 2:
        aa = (_EYE[None] - bb) / rho[:, None, None]
        return _I4 * (k * aa * h[1][:, None, None]
                      + k * k * bb * h[2][:, None, None])
    if order == 3:
        u2 = (tt - 3.0 * c3) / rho[:, None, None, None]
        return _I4 * (k ** 3 * c3 * h[3][:, None, None, None]
                      + k * k * u2 * h[2][:, None, None, None]
                      - k * (u2 / rho[:, None, None, None]) * h[1][:, None, None, None])
    raise ValueError("derivative order must be in 0..3")


# ----------------------------------------------------------------------
# cancellation-safe series forms in the regime |lambda||x|^2 <= 1/2
#
# With w = k|x|, L = log w, and the eight base sums s0C..s3L, the scaled
# derivatives are T_m = (pi/2i) H0^(m), so (i/4) H0^(m) = -(1/2 pi) T_m.
# Removing the parts that cancel against the stationary tables leaves the
# series remainders used below.

def _safe_sums(w):
    s = base_sums(w)
    return s, np.log(w)


def first_difference_batch(dx, p):
    """grad{G(lambda) - G(0)} by the safe series, (n, 2)."""
    dx, rho = _as_displacements(dx)
    w = p.k * rho
    s, ell = _safe_sums(w)
    coef = -(p.k / _TWO_PI) * (s[2] + s[3] * ell)
    return dx / rho[:, None] * coef[:, None]


def second_difference_batch(dx, p, force_direct=False):
    """Hessian of G(lambda) - G(0), safe or direct per point, (n, 2, 2)."""
    dx, rho = _as_displacements(dx)
    regime = p.r * rho ** 2
    out = np.empty((dx.shape[0], 2, 2), dtype=np.complex128)
    safe = np.zeros(dx.shape[0], bool) if force_direct else regime <= SAFE_REGIME
    if safe.any():
        d, r = dx[safe], rho[safe]
        xh, bb, _, _ = _unit_tensors(d, r)
        aa = (_EYE[None] - bb) / r[:, None, None]
        s, ell = _safe_sums(p.k * r)
        p1 = -(p.k / _TWO_PI) * aa
        p2 = -(p.k * p.k / _TWO_PI) * bb
        out[safe] = (p1 * (s[2] + s[3] * ell)[:, None, None]
                     + p2 * (s[4] + s[5] * ell)[:, None, None])
    rest = ~safe
    if rest.any():
        out[rest] = helmholtz_batch(dx[rest], p, 2) - laplace_batch(dx[rest], 2)
    return out


def third_difference_batch(dx, p, force_direct=False):
    """Third derivative tensor of G(lambda) - G(0), (n, 2, 2, 2)."""
    dx, rho = _as_displacements(dx)
    regime = p.r * rho ** 2
    out = np.empty((dx.shape[0], 2, 2, 2), dtype=np.complex128)
    safe = np.zeros(dx.shape[0], bool) if force_direct else regime <= SAFE_REGIME
    if safe.any():
        d, r = dx[safe], rho[safe]
        _, _, c3, tt = _unit_tensors(d, r)
        w = p.k * r
        s, ell = _safe_sums(w)
        pre3 = -(p.k ** 3 / _TWO_PI) * c3
        pre2 = -(p.k * p.k / _TWO_PI) * (tt - 3.0 * c3) / r[:, None, None, None]
        pre1 = (p.k / _TWO_PI) * (tt - 3.0 * c3) / r[:, None, None, None] ** 2
        u3 = s[6] + s[7] * ell
        u2 = s[4] + (s[5] - _C1) * ell
        u1 = s[2] + (s[3] - _B1 * w) * ell
        out[safe] = (pre3 * u3[:, None, None, None]
                     + pre2 * u2[:, None, None, None]
                     + pre1 * u1[:, None, None, None])
    rest = ~safe
    if rest.any():
        out[rest] = helmholtz_batch(dx[rest], p, 3) - laplace_batch(dx[rest], 3)
    return out


def gradient_difference_batch(dx, p, force_direct=False):
    """grad{Gamma(lambda) - Gamma(0)}, (n, 2, 2, 2) indexed [i, a, b, g].

    Entry [i, a, b, g] is the g-derivative of the (a, b) velocity component
    at displacement row i.
    """
    dx, rho = _as_displacements(dx)
    regime = p.r * rho ** 2
    out = np.empty((dx.shape[0], 2, 2, 2), dtype=np.complex128)
    safe = np.zeros(dx.shape[0], bool) if force_direct else regime <= SAFE_REGIME
    if safe.any():
        d, r = dx[safe], rho[safe]
        xh, _, c3, tt = _unit_tensors(d, r)
        w = p.k * r
        s, ell = _safe_sums(w)
        d1 = _EYE[None, :, :, None] * xh[:, None, None, :]
        pre3 = -(p.k ** 3 / _TWO_PI) * c3
        pre2 = -(p.k * p.k / _TWO_PI) * (tt - 3.0 * c3) / r[:, None, None, None]
        pre1 = (p.k / _TWO_PI) * (tt - 3.0 * c3) / r[:, None, None, None] ** 2
        v3 = (s[6] - _C1 / w) + s[7] * ell
        v2 = (s[4] - _E2) + (s[5] - _C1) * ell
        v1 = (s[2] - _E1 * w) + (s[3] - _B1 * w) * ell
        ksq = p.k * p.k
        out[safe] = (-(p.k / _TWO_PI) * d1 * (s[2] + s[3] * ell)[:, None, None, None]
                     + (pre3 * v3[:, None, None, None]
                        + pre2 * v2[:, None, None, None]
                        + pre1 * v1[:, None, None, None]) / ksq)
    rest = ~safe
    if rest.any():
        d = dx[rest]
        g1 = helmholtz_batch(d, p, 1)
        t3 = third_difference_batch(d, p, force_direct=True)
        out[rest] = (_EYE[None, :, :, None] * g1[:, None, None, :]
                     + t3 / (p.k * p.k)
                     - stationary_batch(d, 1))
    return out


def stokeslet_batch(dx, p, force_direct=False):
    """Velocity fundamental solution Gamma(x;lambda), (n, 2, 2)."""
    dx, rho = _as_displacements(dx)
    g = helmholtz_batch(dx, p, 0)
    h2 = second_difference_batch(dx, p, force_direct=force_direct)
    return _EYE[None] * g[:, None, None] + h2 / (p.k * p.k)


def stokeslet_grad_batch(dx, p):
    """Gradient of Gamma(x;lambda), (n, 2, 2, 2) indexed [i, a, b, g]."""
    return gradient_difference_batch(dx, p) + stationary_batch(dx, 1)


# ----------------------------------------------------------------------
# smooth + log splits for product quadrature
#
# Each safe series term is (entire in w) + (entire in w) * log w and
# log w = log k + log|x|, so the lambda-dependent kernel parts split into
# an analytic factor plus an analytic factor times log|x|.  Same-panel
# quadrature integrates the two factors with separate rules.

def stokeslet_log_split(dx, p):
    """Gamma(lambda) as (smooth, logcoef) with value = smooth + logcoef*log|x|.

    Valid in the safe regime only; raises otherwise.
    """
    dx, rho = _as_displacements(dx)
    regime = p.r * rho ** 2
    if np.any(regime > SAFE_REGIME):
        raise ValueError("log split requires |lambda||x|^2 <= 1/2 on all points")
    xh, bb, _, _ = _unit_tensors(dx, rho)
    aa = (_EYE[None] - bb) / rho[:, None, None]
    s, _ = _safe_sums(p.k * rho)
    lk = cmath.log(p.k)
    ksq = p.k * p.k
    # Helmholtz part
    sm_g = -(s[0] + s[1] * lk) / _TWO_PI
    lg_g = -s[1] / _TWO_PI
    # Hessian-difference part
    p1 = -(p.k / _TWO_PI) * aa
    p2 = -(ksq / _TWO_PI) * bb
    sm_h = p1 * (s[2] + s[3] * lk)[:, None, None] + p2 * (s[4] + s[5] * lk)[:, None, None]
    lg_h = p1 * s[3][:, None, None] + p2 * s[5][:, None, None]
    smooth = _EYE[None] * sm_g[:, None, None] + sm_h / ksq
    logcoef = _EYE[None] * lg_g[:, None, None] + lg_h / ksq
    return smooth, logcoef


def gradient_difference_log_split(dx, p):
    """grad{Gamma(lambda)-Gamma(0)} as (smooth, logcoef) factors.

    value = smooth + logcoef * log|x|; valid in the safe regime only.
    """
    dx, rho = _as_displacements(dx)
    regime = p.r * rho ** 2
    if np.any(regime > SAFE_REGIME):
        raise ValueError("log split requires |lambda||x|^2 <= 1/2 on all points")
    xh, _, c3, tt = _unit_tensors(dx, rho)
    w = p.k * rho
    s, _ = _safe_sums(w)
    lk = cmath.log(p.k)
    ksq = p.k * p.k
    d1 = _EYE[None, :, :, None] * xh[:, None, None, :]
    pre3 = -(p.k ** 3 / _TWO_PI) * c3
    pre2 = -(ksq / _TWO_PI) * (tt - 3.0 * c3) / rho[:, None, None, None]
    pre1 = (p.k / _TWO_PI) * (tt - 3.0 * c3) / rho[:, None, None, None] ** 2
    sm3 = (s[6] - _C1 / w) + s[7] * lk
    sm2 = (s[4] - _E2) + (s[5] - _C1) * lk
    sm1 = (s[2] - _E1 * w) + (s[3] - _B1 * w) * lk
    lg3 = s[7]
    lg2 = s[5] - _C1
    lg1 = s[3] - _B1 * w
    b1s = -(p.k / _TWO_PI) * d1
    smooth = (b1s * (s[2] + s[3] * lk)[:, None, None, None]
              + (pre3 * sm3[:, None, None, None]
                 + pre2 * sm2[:, None, None, None]
                 + pre1 * sm1[:, None, None, None]) / ksq)
    logcoef = (b1s * s[3][:, None, None, None]
               + (pre3 * lg3[:, None, None, None]
                  + pre2 * lg2[:, None, None, None]
                  + pre1 * lg1[:, None, None, None]) / ksq)
    return smooth, logcoef


# ----------------------------------------------------------------------
# problematic-term builders (verification surface for the cancellations)

def cancellation_terms_third(x, p):
    """The removed third-derivative terms P1, P2, P3 and the Laplace table.

    Returns a dict of (2, 2, 2) arrays; P1 + P2 + P3 - table vanishes
    analytically, which the acceptance suite checks numerically.
    """
    dx, rho = _as_displacements(x)
    _, _, c3, tt = _unit_tensors(dx, rho)
    w = p.k * rho
    ell = np.log(w)
    pre3 = -(p.k ** 3 / _TWO_PI) * c3
    pre2 = -(p.k * p.k / _TWO_PI) * (tt - 3.0 * c3) / rho[:, None, None, None]
    pre1 = (p.k / _TWO_PI) * (tt - 3.0 * c3) / rho[:, None, None, None] ** 2
    p1 = pre3 * (2.0 / w ** 3)[:, None, None, None]
    p2 = pre2 * (_C1 * ell - 1.0 / w ** 2)[:, None, None, None]
    p3 = pre1 * (_B1 * w * ell + 1.0 / w)[:, None, None, None]
    return {"P1": p1, "P2": p2, "P3": p3, "table": laplace_batch(dx, 3)}


def cancellation_terms_grad(x, p):
    """The removed Stokeslet-gradient terms Q1, Q2, Q3, Q4, Q3' and B3.

    Returns a dict of (2, 2, 2) arrays indexed [a, b, g]; the sum
    Q1 + Q2 + Q3 + Q4 + B3 vanishes analytically, with Q3' = Q3 + Q4 the
    merged constant term.
    """
    dx, rho = _as_displacements(x)
    xh, _, c3, tt = _unit_tensors(dx, rho)
    d1 = _EYE[None, :, :, None] * xh[:, None, None, :]
    ut = (tt - 3.0 * c3) / rho[:, None, None, None]
    q1 = -d1 / (_TWO_PI * rho[:, None, None, None])
    q2 = -(_C1 / _TWO_PI) * c3 / rho[:, None, None, None]
    q3 = -(1.0 / _TWO_PI) * ut * _E2
    q4 = (1.0 / _TWO_PI) * ut * _E1
    q3p = ut / (4.0 * math.pi)
    b3 = -stationary_batch(dx, 1).astype(np.complex128)
    return {"Q1": q1.astype(np.complex128), "Q2": q2 + 0j, "Q3": q3, "Q4": q4,
            "Q3prime": q3p + 0j, "B3": b3}


# ----------------------------------------------------------------------
# per-point operations

def _single(x):
    x = np.asarray(x, dtype=np.float64).reshape(1, 2)
    return x


def laplace_green(x, order=0):
    """Laplace fundamental solution G(x;0) or a derivative tensor.

    Parameters
    ----------
    x : length-2 real vector
        Nonzero displacement.
    order : int
        Derivative order in 0..3; the result is a tensor of that rank.

    Returns
    -------
    KernelBlock
    """
    val = laplace_batch(_single(x), order)[0]
    return KernelBlock(val, "direct", 0.0)


def helmholtz_green(x, p, order=0):
    """Helmholtz fundamental solution G(x;lambda) or a derivative tensor.

    Parameters
    ----------
    x : length-2 real vector
    p : ResolventParameter
    order : int
        Derivative order in 0..3.

    Returns
    -------
    KernelBlock
    """
    xx = _single(x)
    val = helmholtz_batch(xx, p, order)[0]
    regime = p.r * float(xx[0, 0] ** 2 + xx[0, 1] ** 2)
    return KernelBlock(val, "direct", regime)


def helmholtz_diff_third(x, p):
    """Third derivative tensor of G(x;lambda) - G(x;0).

    Uses the cancellation-safe series when |lambda||x|^2 <= 1/2 and direct
    subtraction otherwise.

    Returns
    -------
    KernelBlock
        value has shape (2, 2, 2).
    """
    xx = _single(x)
    regime = p.r * float(xx[0, 0] ** 2 + xx[0, 1] ** 2)
    val = third_difference_batch(xx, p)[0]
    path = "cancellation_safe" if regime <= SAFE_REGIME else "direct"
    return KernelBlock(val, path, regime)


def stokeslet(x, p):
    """Velocity fundamental solution Gamma(x;lambda), a 2x2 matrix.

    The Hessian-difference part switches to the cancellation-safe series in
    the small regime so the 1/lambda prefactor does not amplify roundoff.

    Returns
    -------
    KernelBlock
    """
    xx = _single(x)
    regime = p.r * float(xx[0, 0] ** 2 + xx[0, 1] ** 2)
    val = stokeslet_batch(xx, p)[0]
    path = "cancellation_safe" if regime <= SAFE_REGIME else "direct"
    return KernelBlock(val, path, regime)


def stokeslet_stationary(x, order=0):
    """Stationary Stokeslet Gamma(x;0) or its gradient.

    Parameters
    ----------
    x : length-2 real vector
    order : int
        0 for the 2x2 matrix, 1 for the (2, 2, 2) gradient [a, b, g].

    Returns
    -------
    KernelBlock
    """
    val = stationary_batch(_single(x), order)[0]
    return KernelBlock(val, "direct", 0.0)


def pressure_kernel(x, order=0):
    """Pressure kernel Phi(x) or its gradient.

    Parameters
    ----------
    x : length-2 real vector
    order : int
        0 for the 2-vector, 1 for the (2, 2) gradient.

    Returns
    -------
    KernelBlock
    """
    val = pressure_batch(_single(x), order)[0]
    return KernelBlock(val, "direct", 0.0)


def grad_stokeslet_difference(x, p):
    """Gradient of Gamma(x;lambda) - Gamma(x;0), shape (2, 2, 2).

    In the regime |lambda||x|^2 <= 1/2 the problematic terms are removed
    analytically; outside it the two gradients are subtracted directly.

    Returns
    -------
    KernelBlock
    """
    xx = _single(x)
    regime = p.r * float(xx[0, 0] ** 2 + xx[0, 1] ** 2)
    val = gradient_difference_batch(xx, p)[0]
    path = "cancellation_safe" if regime <= SAFE_REGIME else "direct"
    return KernelBlock(val, path, regime)


# ----------------------------------------------------------------------
# decay-envelope verification sweep

@dataclass(frozen=True)
class SweepSpec:
    """Log-uniform sweep over the regime variable |lambda||x|^2."""

    regime_min: float = 1e-4
    regime_max: float = 1e4
    n_regime: int = 48
    n_tau: int = 7


@dataclass(frozen=True)
class DecayRow:
    """One decay-envelope measurement."""

    estimate_id: str
    ell: int
    theta: float
    regime_min: float
    regime_max: float
    measured_sup: float
    refinement_delta: float
    passed: bool


def _sweep_sup(quantity, envelope, theta, regimes, taus):
    """Max of |quantity|/envelope over a (regime, tau) grid at |x| = 1.

    Kernel/envelope ratios depend on (lambda, x) only through |lambda||x|^2
    and arg lambda, because G(sx; lambda/s^2) = G(x; lambda); fixing |x| = 1
    therefore loses nothing.
    """
    sup = 0.0
    x = np.array([[math.cos(0.37), math.sin(0.37)]])
    for tau in taus:
        for m in regimes:
            lam = m * cmath.exp(1j * tau)
            p = make_resolvent_parameter(lam, theta)
            q = np.max(np.abs(quantity(x, p)))
            sup = max(sup, q / envelope(m, p))
    return sup


_DECAY_CASES = {
    0: [
        ("helmholtz_decay", 0,
         lambda x, p: helmholtz_batch(x, p, 0),
         lambda m, p: math.exp(-0.5 * math.sin(p.theta / 2) * math.sqrt(m)),
         "large"),
    ],
    1: [
        ("helmholtz_decay", 1,
         lambda x, p: helmholtz_batch(x, p, 1),
         lambda m, p: math.exp(-0.5 * math.sin(p.theta / 2) * math.sqrt(m)),
         "all"),
        ("gamma_gradient", 1,
         lambda x, p: stokeslet_grad_batch(x, p),
         lambda m, p: 1.0 / (1.0 + m),
         "all"),
        ("helmholtz_diff_log", 1,
         lambda x, p: first_difference_batch(x, p),
         lambda m, p: m * (abs(math.log(m)) + 1.0),
         "small"),
        ("gamma_comparison", 1,
         lambda x, p: gradient_difference_batch(x, p),
         lambda m, p: m * abs(math.log(m)),
         "small"),
    ],
    2: [
        ("helmholtz_decay", 2,
         lambda x, p: helmholtz_batch(x, p, 2),
         lambda m, p: math.exp(-0.5 * math.sin(p.theta / 2) * math.sqrt(m)),
         "all"),
        ("helmholtz_diff_log", 2,
         lambda x, p: second_difference_batch(x, p),
         lambda m, p: m * (abs(math.log(m)) + 1.0),
         "small"),
    ],
    3: [
        ("helmholtz_decay", 3,
         lambda x, p: helmholtz_batch(x, p, 3),
         lambda m, p: math.exp(-0.5 * math.sin(p.theta / 2) * math.sqrt(m)),
         "all"),
        ("helmholtz_diff", 3,
         lambda x, p: third_difference_batch(x, p),
         lambda m, p: m,
         "small"),
    ],
}


def verify_decay_suite(ell, theta=math.pi / 4, sweep=None):
    """Measure kernel decay-envelope constants over a sector sweep.

    For each envelope estimate available at derivative order ``ell``, sweeps
    |lambda||x|^2 log-uniformly and arg(lambda) across the sector, records
    the sup of quantity/envelope, re-measures on a doubled grid, and passes
    when the sup is finite and drifts by less than 10%.

    Parameters
    ----------
    ell : int
        Derivative order in 0..3.
    theta : float
        Sector parameter.
    sweep : SweepSpec, optional

    Returns
    -------
    list of DecayRow
    """
    if ell not in _DECAY_CASES:
        raise ValueError("derivative order must be in 0..3")
    sweep = sweep or SweepSpec()
    rows = []
    for est_id, order, quantity, envelope, window in _DECAY_CASES[ell]:
        lo, hi = sweep.regime_min, sweep.regime_max
        if window == "small":
            hi = min(hi, SAFE_REGIME)
        elif window == "large":
            lo = max(lo, 1.0)
        sups = []
        for factor in (1, 2):
            regimes = np.geomspace(lo, hi, factor * sweep.n_regime)
            margin = (math.pi - theta) * 0.95
            taus = np.linspace(-margin, margin, factor * sweep.n_tau)
            sups.append(_sweep_sup(quantity, envelope, theta, regimes, taus))
        delta = abs(sups[1] - sups[0]) / sups[0]
        passed = bool(np.isfinite(sups[1]) and delta < 0.10)
        rows.append(DecayRow(est_id, order, theta, lo, hi,
                             sups[1], delta, passed))
    return rows
