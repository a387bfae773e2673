"""Per-panel quadrature rules: plain Gauss, product rules for log and
principal-value Cauchy factors, barycentric interpolation, and adaptive
subdivision toward near-singular targets.

Product rules integrate the Legendre interpolant of the smooth factor
exactly against the singular weight, using closed-form Legendre moments:
Q_m is the on-cut Legendre function of the second kind, and

    p.v. int P_m(u)/(u - u0) du = -2 Q_m(u0)
    int  P_m(u) log|u - u0| du  =  2 (Q_{m+1} - Q_{m-1})/(2m + 1)

for u0 strictly inside (-1, 1).
"""

import math
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss, legvander

from .errors import QuadratureNonConvergence

__all__ = [
    "gauss_rule",
    "legendre_q",
    "cauchy_moments",
    "log_moments",
    "product_weights",
    "node_product_weights",
    "interp_matrix",
    "collect_subpanels",
]


@lru_cache(maxsize=32)
def gauss_rule(q):
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = leggauss(q)
    return x, w


def legendre_q(u0, count):
    """On-cut Legendre Q_m(u0) for m = 0..count-1, |u0| < 1."""
    if not -1.0 < u0 < 1.0:
        raise ValueError("u0 must lie strictly inside (-1, 1)")
    q = np.empty(count)
    q[0] = 0.5 * math.log((1.0 + u0) / (1.0 - u0))
    if count > 1:
        q[1] = u0 * q[0] - 1.0
    for m in range(1, count - 1):
        q[m + 1] = ((2 * m + 1) * u0 * q[m] - m * q[m - 1]) / (m + 1)
    return q


def cauchy_moments(u0, q):
    """p.v. integrals of P_m(u)/(u - u0) over [-1, 1], m < q."""
    return -2.0 * legendre_q(u0, q)


def log_moments(u0, q):
    """Integrals of P_m(u) log|u - u0| over [-1, 1], m < q."""
    qq = legendre_q(u0, q + 1)
    r = np.empty(q)
    r[0] = ((1.0 - u0) * math.log1p(-u0) + (1.0 + u0) * math.log1p(u0)
            - 2.0)
    for m in range(1, q):
        r[m] = 2.0 * (qq[m + 1] - qq[m - 1]) / (2 * m + 1)
    return r


@lru_cache(maxsize=64)
def _legvander_solve(q):
    x, _ = gauss_rule(q)
    v = legvander(x, q - 1)
    return np.linalg.inv(v.T)


def product_weights(u0, q):
    """Row weights (w_log, w_cauchy) at the q Gauss nodes for target u0.

    Applying w to smooth-factor values at the nodes integrates the factor's
    interpolant against log|u - u0| and 1/(u - u0) respectively.
    """
    vinv_t = _legvander_solve(q)
    return vinv_t @ log_moments(u0, q), vinv_t @ cauchy_moments(u0, q)


@lru_cache(maxsize=32)
def node_product_weights(q):
    """Product-rule weights for u0 at each Gauss node: two (q, q) arrays."""
    x, _ = gauss_rule(q)
    wlog = np.empty((q, q))
    wcau = np.empty((q, q))
    for i, u0 in enumerate(x):
        wlog[i], wcau[i] = product_weights(u0, q)
    return wlog, wcau


@lru_cache(maxsize=32)
def _bary_weights(q):
    x, _ = gauss_rule(q)
    w = np.ones(q)
    for j in range(q):
        w[j] = 1.0 / np.prod(x[j] - np.delete(x, j))
    return x, w


def interp_matrix(q, u):
    """Barycentric Lagrange matrix from q Gauss nodes to points u."""
    x, w = _bary_weights(q)
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    out = np.zeros((u.shape[0], q))
    diff = u[:, None] - x[None, :]
    exact = np.isclose(diff, 0.0, atol=1e-15)
    hit = exact.any(axis=1)
    safe = ~hit
    if safe.any():
        terms = w[None, :] / diff[safe]
        out[safe] = terms / terms.sum(axis=1)[:, None]
    if hit.any():
        out[hit] = exact[hit].astype(np.float64)
    return out


def collect_subpanels(curve, a, b, x, q, factor=3.0, max_depth=52):
    """Adaptive bisection of panel [a, b] away from a nearby target x.

    Returns (t, jac, lengths_done) where t are Gauss parameter nodes over
    the accepted subpanels and jac their arc-length quadrature weights.
    Subpanels are accepted once the target-to-subpanel distance is at
    least ``factor`` times the subpanel arc length.

    Raises
    ------
    QuadratureNonConvergence
        If the bisection does not terminate (target on the panel).
    """
    gx, gw = gauss_rule(q)
    ts, js = [], []
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        h = hi - lo
        t = lo + 0.5 * h * (gx + 1.0)
        vel = curve.velocity(t)
        speed = np.hypot(vel[:, 0], vel[:, 1])
        jac = 0.5 * h * gw * speed
        pts = curve.point(t)
        dist = np.min(np.hypot(pts[:, 0] - x[0], pts[:, 1] - x[1]))
        arclen = jac.sum()
        if dist >= factor * arclen or arclen == 0.0:
            ts.append(t)
            js.append(jac)
            continue
        if depth >= max_depth:
            raise QuadratureNonConvergence(
                "panel subdivision did not separate from the target; "
                "the point lies on or touches the boundary")
        mid = lo + 0.5 * h
        stack.append((lo, mid, depth + 1))
        stack.append((mid, hi, depth + 1))
    return np.concatenate(ts), np.concatenate(js)
