"""Semigroup and fractional-power calculus built on resolvent solves.

e^{-tA} is realized as a quadrature of e^{t lam} (lam + A)^{-1} f along a
two-ray sectorial contour, and A^{-theta} as a quadrature of
t^{-theta} (t + A)^{-1} f over the positive real axis.  Every quadrature
node delegates to solver.solve_resolvent; solves are cached by
(lambda, force fingerprint) so t-sweeps, compositions, and nested-grid
error estimates share work.  For real forces the lower contour ray is the
conjugate of the upper one, so only the upper ray is ever solved.
"""

import cmath
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from . import solver
from .errors import WindowDetectionError

__all__ = [
    "ContourSpec",
    "OperatorFunctionResult",
    "SlopeReport",
    "contour_nodes",
    "fractional_nodes",
    "semigroup_apply",
    "fractional_inverse_power",
    "apply_inverse",
    "smoothing_slope",
    "grid_gradient",
    "grid_divergence",
]

_EXP_FLOOR = 16.0 * math.log(10.0)
_LAM_FLOOR = 1e-8
_LAM_CEIL = 1e10


@dataclass(frozen=True)
class ContourSpec:
    """Two-ray integration contour for the semigroup quadrature.

    The contour runs from infinity down the ray offset + s e^{-i vartheta},
    through the real vertex at ``offset``, and back out along
    offset + s e^{+i vartheta}, counterclockwise around the spectrum of -A.
    Nodes are placed geometrically in the ray parameter s with
    ``nodes_per_decade`` nodes per decade between ``r_min`` and ``r_max``
    (trapezoid rule in log s).

    Attributes
    ----------
    vartheta : float
        Ray half-angle, strictly between pi/2 (so e^{t lam} decays along
        the rays) and pi - theta (so every node stays inside the sector
        of valid resolvent parameters).
    r_min : float
        Inner truncation of the ray parameter.  The integrand tends to a
        finite limit at the vertex, so the discarded mass is of order
        r_min times the inverse-operator scale.
    r_max : float or None
        Outer truncation; None selects per t the radius where
        |e^{t lam}| falls below 1e-16.
    nodes_per_decade : int
        Trapezoid density in log10 s.  The quadrature error decays
        exponentially in this number.
    offset : float or None
        Real vertex of the contour; None selects min(0.1, 1/(10 t)).
    theta : float
        Sector opening parameter of the underlying resolvent family.
    """

    vartheta: float = math.pi - math.pi / 4.0 - math.pi / 16.0
    r_min: float = 1e-8
    r_max: float = None
    nodes_per_decade: int = 12
    offset: float = None
    theta: float = math.pi / 4.0

    def __post_init__(self):
        if not 0.0 < self.theta < 0.5 * math.pi:
            raise ValueError("theta must lie in (0, pi/2)")
        if not 0.5 * math.pi < self.vartheta < math.pi - self.theta:
            raise ValueError(
                "vartheta must lie strictly between pi/2 and pi - theta")
        if self.r_min <= 0.0:
            raise ValueError("r_min must be positive")
        if self.r_max is not None and self.r_max <= self.r_min:
            raise ValueError("r_max must exceed r_min")
        if int(self.nodes_per_decade) < 2:
            raise ValueError("nodes_per_decade must be at least 2")
        if self.offset is not None and self.offset <= 0.0:
            raise ValueError("offset must be positive")


@dataclass(frozen=True)
class OperatorFunctionResult:
    """Field produced by an operator-function quadrature.

    Attributes
    ----------
    values : ndarray (n_points, 2)
        Velocity samples on the volume grid; real for real forces.
    error_estimate : float
        Discrete L2 difference against the embedded half-density rule
        (every other quadrature node), an a posteriori dominant bound on
        the quadrature error.
    lambdas : ndarray
        Resolvent parameters actually solved.
    n_solves : int
        Fresh resolvent solves performed for this result.
    n_cached : int
        Solves served from the cache.
    """

    values: np.ndarray
    error_estimate: float
    lambdas: np.ndarray
    n_solves: int
    n_cached: int


@dataclass(frozen=True)
class SlopeReport:
    """Least-squares decay-rate fit of log norm against log t.

    ``window`` is the inclusive index range of the fitted samples, the
    largest contiguous window whose linear fit reaches r_squared >= 0.98.
    ``passed`` records slope >= bound - margin.
    """

    p_in: float
    q_out: float
    gradient: bool
    t_values: np.ndarray
    norms: np.ndarray
    window: tuple
    slope: float
    intercept: float
    r_squared: float
    bound: float
    margin: float
    passed: bool


# ----------------------------------------------------------------------
# quadrature node sets

def contour_nodes(spec, t):
    """Nodes and coefficients of the semigroup contour quadrature at time t.

    Returns (lam, coeff, s, j): complex resolvent parameters on the upper
    ray, complex coefficients such that e^{-tA} f = Im(sum coeff_j R_j f)
    for real f, the ray parameters s, and their integer ladder indices
    (node j sits at s = 10^(j / nodes_per_decade), so node sets for
    different t or nodes_per_decade doublings overlap exactly).
    """
    if t <= 0.0:
        raise ValueError("time t must be positive")
    npd = int(spec.nodes_per_decade)
    delta = spec.offset if spec.offset is not None else min(0.1, 0.1 / t)
    vth = spec.vartheta
    decay = -math.cos(vth)
    r_max = spec.r_max
    if r_max is None:
        r_max = (_EXP_FLOOR + t * delta) / (t * decay)
    j_min = int(math.ceil(npd * math.log10(spec.r_min)))
    j_max = int(math.ceil(npd * math.log10(r_max)))
    if j_max <= j_min:
        raise ValueError("contour truncation leaves no quadrature nodes")
    j = np.arange(j_min, j_max + 1)
    s = 10.0 ** (j / npd)
    ray = cmath.exp(1j * vth)
    lam = delta + s * ray
    w = (math.log(10.0) / npd) * s
    coeff = w * np.exp(t * lam) * ray / math.pi
    return lam, coeff, s, j


def fractional_nodes(theta_pow, n_nodes):
    """Real-axis quadrature data for the A^{-theta_pow} integral.

    The Balakrishnan integral (sin(pi theta)/pi) int_0^inf
    t^{-theta} (t + A)^{-1} dt is transformed by lam = exp(sinh v) and
    discretized by the trapezoid rule on an asymmetric v-interval sized so
    both tails are below 1e-17 relative.  Returns (lam, coeff, v) with
    positive coefficients absorbing the full weight; nodes outside
    [1e-8, 1e10] are meant to be collapsed onto an inverse surrogate or
    the identity tail by the caller.
    """
    if not 0.0 < theta_pow < 1.0:
        raise ValueError("fractional power must lie in (0, 1)")
    if n_nodes < 8:
        raise ValueError("fractional quadrature needs at least 8 nodes")
    v_lo = -math.asinh(40.0 / (1.0 - theta_pow))
    v_hi = math.asinh(40.0 / theta_pow)
    v = np.linspace(v_lo, v_hi, int(n_nodes))
    h = (v_hi - v_lo) / (int(n_nodes) - 1)
    sh = np.sinh(v)
    front = math.sin(math.pi * theta_pow) / math.pi
    # weight = front * h * cosh(v) * lam^{1-theta}; kept in log form until
    # the magnitude is known to be representable
    log_c = np.log(front * h * np.cosh(v)) + (1.0 - theta_pow) * sh
    with np.errstate(over="ignore"):
        lam = np.exp(sh)
    coeff = np.exp(np.minimum(log_c, 700.0))
    return lam, coeff, v


# ----------------------------------------------------------------------
# cached resolvent application

def _force_token(f_samples):
    if callable(f_samples):
        return ("fn", id(f_samples))
    arr = np.ascontiguousarray(f_samples)
    digest = hashlib.sha1(arr.tobytes()).hexdigest()
    return ("arr", arr.shape, arr.dtype.str, digest)


def _cached_velocity(mesh, grid, lam, f_samples, token, theta, opts, cache,
                     tally):
    key = (complex(lam), token)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            tally[1] += 1
            return hit
    p = kernels.make_resolvent_parameter(lam, theta)
    sol = solver.solve_resolvent(mesh, grid, p, f_samples, **opts)
    tally[0] += 1
    if cache is not None:
        cache[key] = sol.grid_velocity
    return sol.grid_velocity


def _force_is_real(f_samples, grid):
    arr = f_samples(grid.points) if callable(f_samples) else f_samples
    arr = np.asarray(arr)
    return not np.iscomplexobj(arr) or not np.any(arr.imag)


def _split_force(f_samples, part):
    if callable(f_samples):
        return lambda pts: getattr(np.asarray(f_samples(pts)), part) + 0.0j
    return getattr(np.asarray(f_samples), part).copy()


def _complex_by_parts(apply_real, f_samples):
    re = apply_real(_split_force(f_samples, "real"))
    im = apply_real(_split_force(f_samples, "imag"))
    return OperatorFunctionResult(
        re.values + 1j * im.values,
        re.error_estimate + im.error_estimate,
        re.lambdas,
        re.n_solves + im.n_solves,
        re.n_cached + im.n_cached)


def _check_finite(values, what):
    if not np.all(np.isfinite(values)):
        raise FloatingPointError(f"{what} produced non-finite field values")


# ----------------------------------------------------------------------
# operator functions

def semigroup_apply(mesh, grid, t, f_samples, contour=None, *,
                    solver_opts=None, cache=None, tol=None):
    """Apply the Stokes semigroup e^{-tA} to a body force.

    Parameters
    ----------
    mesh, grid : boundary mesh and volume grid of the domain.
    t : float
        Positive time.
    f_samples : array (n_points, 2) or callable
        Body force as grid samples or a field callable.
    contour : ContourSpec, optional
        Integration contour; defaults resolve the offset and outer
        truncation from t.
    solver_opts : dict, optional
        Keyword arguments forwarded to solve_resolvent.
    cache : dict, optional
        Shared solve cache keyed by (lambda, force fingerprint).
    tol : float, optional
        If given, raise when the quadrature error estimate exceeds it.

    Returns
    -------
    OperatorFunctionResult
        Velocity samples of e^{-tA} f on the grid.
    """
    if t <= 0.0:
        raise ValueError("time t must be positive")
    contour = contour if contour is not None else ContourSpec()
    opts = dict(solver_opts or {})
    if not _force_is_real(f_samples, grid):
        return _complex_by_parts(
            lambda fr: semigroup_apply(mesh, grid, t, fr, contour,
                                       solver_opts=solver_opts, cache=cache,
                                       tol=tol),
            f_samples)
    lam, coeff, _, j = contour_nodes(contour, t)
    token = _force_token(f_samples)
    tally = [0, 0]
    full = np.zeros((grid.n_points, 2), dtype=np.complex128)
    half = np.zeros_like(full)
    for i in range(lam.size):
        u = _cached_velocity(mesh, grid, lam[i], f_samples, token,
                             contour.theta, opts, cache, tally)
        full += coeff[i] * u
        if j[i] % 2 == 0:
            half += 2.0 * coeff[i] * u
    values = full.imag
    estimate = solver.discrete_norm(values - half.imag, grid, 2)
    _check_finite(values, "semigroup quadrature")
    if tol is not None and estimate > tol:
        raise ValueError(
            f"semigroup quadrature error estimate {estimate:.3e} "
            f"exceeds tolerance {tol:.3e}")
    return OperatorFunctionResult(values, estimate, lam, tally[0], tally[1])


def fractional_inverse_power(mesh, grid, theta_pow, f_samples, n_nodes=40, *,
                             theta=math.pi / 4.0, solver_opts=None,
                             cache=None, tol=None):
    """Apply the fractional negative power A^{-theta_pow} to a body force.

    Each interior quadrature node costs one resolvent solve at a real
    positive lambda.  Nodes below 1e-8 are collapsed onto the inverse
    surrogate solve at lambda = 1e-8 (the integrand is constant there to
    within lambda / spectral-gap), and nodes above 1e10 act as
    lambda^{-1} times the identity on f, so neither tail costs solves.
    """
    if not 0.0 < theta_pow < 1.0:
        raise ValueError("fractional power must lie in (0, 1)")
    opts = dict(solver_opts or {})
    if not _force_is_real(f_samples, grid):
        return _complex_by_parts(
            lambda fr: fractional_inverse_power(
                mesh, grid, theta_pow, fr, n_nodes, theta=theta,
                solver_opts=solver_opts, cache=cache, tol=tol),
            f_samples)
    lam, coeff, _ = fractional_nodes(theta_pow, n_nodes)
    f_grid = np.asarray(f_samples(grid.points) if callable(f_samples)
                        else f_samples)
    token = _force_token(f_samples)
    tally = [0, 0]
    low = lam < _LAM_FLOOR
    high = lam > _LAM_CEIL
    mid = ~(low | high)
    full = np.zeros((grid.n_points, 2), dtype=np.complex128)
    half = np.zeros_like(full)
    solved = []

    def add(weight_full, weight_half, u):
        nonlocal full, half
        full = full + weight_full * u
        half = half + weight_half * u

    def tail_weights(mask):
        wf = float(np.sum(coeff[mask]))
        wh = 2.0 * float(np.sum(coeff[mask & even]))
        return wf, wh

    even = np.arange(lam.size) % 2 == 0
    if np.any(low):
        u = _cached_velocity(mesh, grid, _LAM_FLOOR, f_samples, token,
                             theta, opts, cache, tally)
        solved.append(_LAM_FLOOR)
        add(*tail_weights(low), u)
    if np.any(high):
        wf = float(np.sum(coeff[high] / lam[high]))
        wh = 2.0 * float(np.sum((coeff[high] / lam[high])[even[high]]))
        add(wf, wh, f_grid.astype(np.complex128))
    for i in np.flatnonzero(mid):
        u = _cached_velocity(mesh, grid, float(lam[i]), f_samples, token,
                             theta, opts, cache, tally)
        solved.append(float(lam[i]))
        add(coeff[i], 2.0 * coeff[i] if even[i] else 0.0, u)
    values = full.real
    estimate = solver.discrete_norm(values - half.real, grid, 2)
    _check_finite(values, "fractional-power quadrature")
    if tol is not None and estimate > tol:
        raise ValueError(
            f"fractional-power quadrature error estimate {estimate:.3e} "
            f"exceeds tolerance {tol:.3e}")
    return OperatorFunctionResult(values, estimate, np.array(solved),
                                  tally[0], tally[1])


def apply_inverse(mesh, grid, f_samples, *, surrogate=1e-8,
                  theta=math.pi / 4.0, solver_opts=None, cache=None):
    """Apply A^{-1} through its small-lambda resolvent surrogate.

    The error estimate compares the surrogate against a solve at twice the
    surrogate lambda; both are first-order in lambda / spectral-gap.
    """
    if surrogate <= 0.0:
        raise ValueError("surrogate lambda must be positive")
    opts = dict(solver_opts or {})
    if not _force_is_real(f_samples, grid):
        return _complex_by_parts(
            lambda fr: apply_inverse(mesh, grid, fr, surrogate=surrogate,
                                     theta=theta, solver_opts=solver_opts,
                                     cache=cache),
            f_samples)
    token = _force_token(f_samples)
    tally = [0, 0]
    u = _cached_velocity(mesh, grid, surrogate, f_samples, token, theta,
                         opts, cache, tally)
    u2 = _cached_velocity(mesh, grid, 2.0 * surrogate, f_samples, token,
                          theta, opts, cache, tally)
    values = u.real
    estimate = solver.discrete_norm(u.real - u2.real, grid, 2)
    _check_finite(values, "inverse surrogate")
    return OperatorFunctionResult(values, estimate,
                                  np.array([surrogate, 2.0 * surrogate]),
                                  tally[0], tally[1])


# ----------------------------------------------------------------------
# grid differentiation

def _diff_matrix(nodes):
    n = nodes.size
    w = np.ones(n)
    for i in range(n):
        w[i] = 1.0 / np.prod(nodes[i] - np.delete(nodes, i))
    d = np.zeros((n, n))
    for i in range(n):
        off = np.arange(n) != i
        d[i, off] = (w[off] / w[i]) / (nodes[i] - nodes[off])
        d[i, i] = -np.sum(d[i, off])
    return d


def _angular_derivative(flat, grid):
    """d/dt along rings: spectral for smooth curves, per-edge otherwise."""
    curve = grid.curve
    ns, nt = grid.s_nodes.size, grid.t_nodes.size
    arr = flat.reshape(ns, nt, -1)
    if curve.kind == "polygon":
        out = np.empty_like(arr)
        edges = int(curve.param_max)
        for e in range(edges):
            cols = np.flatnonzero(grid.edge_of_t == e)
            d = _diff_matrix(grid.t_nodes[cols])
            out[:, cols, :] = np.einsum("pq,sqc->spc", d, arr[:, cols, :])
        return out.reshape(flat.shape)
    freq = np.fft.fftfreq(nt, d=1.0) * nt * (2.0 * np.pi / curve.param_max)
    spec = np.fft.fft(arr, axis=1)
    if nt % 2 == 0:
        freq[nt // 2] = 0.0
    out = np.fft.ifft(spec * (1j * freq)[None, :, None], axis=1)
    if not np.iscomplexobj(arr):
        out = out.real
    return out.reshape(flat.shape)


def grid_gradient(values, grid):
    """Physical gradient of nodal fields on a volume grid.

    ``values`` is (n_points,) or (n_points, c); the result gains a
    trailing axis of length 2 holding (d/dx, d/dy).  Radial derivatives
    use barycentric differentiation across the rings, angular derivatives
    are spectral (smooth curves) or per-edge barycentric (polygons), and
    the chart Jacobian maps both to Cartesian components.
    """
    values = np.asarray(values)
    if values.shape[0] != grid.n_points:
        raise ValueError("values do not match the grid")
    scalar = values.ndim == 1
    flat = values.reshape(grid.n_points, -1)
    ns, nt = grid.s_nodes.size, grid.t_nodes.size
    nc = flat.shape[1]
    ds = (_diff_matrix(grid.s_nodes) @ flat.reshape(ns, -1)).reshape(
        grid.n_points, nc)
    dt = _angular_derivative(flat, grid)
    bd = grid.curve.point(grid.t_nodes) - grid.center[None, :]
    vel = grid.curve.velocity(grid.t_nodes)
    s = np.repeat(grid.s_nodes, nt)
    bx, by = np.tile(bd[:, 0], ns), np.tile(bd[:, 1], ns)
    vx, vy = np.tile(vel[:, 0], ns), np.tile(vel[:, 1], ns)
    det = s * (bx * vy - by * vx)
    # rows of the inverse Jacobian: grad s = (s vy, -s vx)/det,
    # grad t = (-by, bx)/det
    gsx, gsy = s * vy / det, -s * vx / det
    gtx, gty = -by / det, bx / det
    out = np.empty(flat.shape + (2,), dtype=ds.dtype)
    out[..., 0] = ds * gsx[:, None] + dt * gtx[:, None]
    out[..., 1] = ds * gsy[:, None] + dt * gty[:, None]
    return out[:, 0, :] if scalar else out.reshape(values.shape + (2,))


def grid_divergence(values, grid):
    """Divergence of a nodal vector field on a volume grid."""
    values = np.asarray(values)
    if values.ndim != 2 or values.shape[1] != 2:
        raise ValueError("divergence needs an (n_points, 2) field")
    g = grid_gradient(values, grid)
    return g[:, 0, 0] + g[:, 1, 1]


# ----------------------------------------------------------------------
# smoothing-rate report

def _fit_window(log_t, log_n, min_len=4, r2_floor=0.98):
    best = None
    n = log_t.size
    for i0 in range(n - min_len + 1):
        for i1 in range(i0 + min_len - 1, n):
            x = log_t[i0:i1 + 1]
            y = log_n[i0:i1 + 1]
            slope, intercept = np.polyfit(x, y, 1)
            resid = y - (slope * x + intercept)
            ss_tot = float(np.sum((y - y.mean()) ** 2))
            ss_res = float(np.sum(resid ** 2))
            r2 = 1.0 if ss_tot < 1e-30 else 1.0 - ss_res / ss_tot
            if r2 < r2_floor:
                continue
            length = i1 - i0
            key = (length, r2)
            if best is None or key > best[0]:
                best = (key, (i0, i1), float(slope), float(intercept),
                        float(r2))
    return best


def smoothing_slope(mesh, grid, p_in, q_out, f_samples, t_grid, *,
                    gradient=False, contour=None, solver_opts=None,
                    cache=None, margin=0.1):
    """Fit the decay rate of ||e^{-tA} f||_q over a transient t-window.

    The report passes when the fitted slope respects the smoothing bound
    -(1/p_in - 1/q_out), minus 1/2 more for the gradient variant, within
    ``margin``.  The fitting window is the largest contiguous log-t range
    whose linear fit reaches r squared >= 0.98; if no window of at least
    four samples qualifies, WindowDetectionError is raised (the t grid
    likely reaches too far into the exponential-decay regime).
    """
    p_in, q_out = float(p_in), float(q_out)
    if not 1.0 <= p_in <= q_out:
        raise ValueError("need 1 <= p_in <= q_out")
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size < 4 or np.any(t_grid <= 0.0) \
            or np.any(np.diff(t_grid) <= 0.0):
        raise ValueError("t grid must be at least 4 increasing positive "
                         "times")
    contour = contour if contour is not None else ContourSpec()
    norms = np.empty(t_grid.size)
    for i, t in enumerate(t_grid):
        res = semigroup_apply(mesh, grid, float(t), f_samples, contour,
                              solver_opts=solver_opts, cache=cache)
        field = res.values
        if gradient:
            field = grid_gradient(field, grid).reshape(grid.n_points, -1)
        norms[i] = solver.discrete_norm(field, grid, q_out)
    if np.any(norms <= 0.0):
        raise WindowDetectionError("semigroup norm vanished on the t grid")
    fit = _fit_window(np.log10(t_grid), np.log10(norms))
    if fit is None:
        raise WindowDetectionError(
            "no log-linear window with r squared >= 0.98; the t grid may "
            "start beyond the transient regime")
    _, window, slope, intercept, r2 = fit
    bound = -(1.0 / p_in - 1.0 / q_out) - (0.5 if gradient else 0.0)
    return SlopeReport(p_in, q_out, bool(gradient), t_grid, norms, window,
                       slope, intercept, r2, bound, float(margin),
                       bool(slope >= bound - margin))
