"""Dirichlet and body-force resolvent solves with interior field evaluation.

The Dirichlet problem is solved by a double-layer ansatz: the trace equation
(-1/2 I + Kstar) f = g is augmented by one bordering row/column pair that
removes the one-dimensional null-space/cokernel defect.  Body forces enter
through a Newtonian volume potential evaluated by per-target polar-ray
quadrature on star-shaped domains: each ray carries a radial rule that is
exact for integrands of the form p(r) + q(r) log r, so the logarithmic
kernel singularity at the target costs no accuracy.  The boundary
correction is a Dirichlet solve with the negated volume trace.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import kernels
from . import potentials
from .errors import ConfigError
from .geometry import build_mesh, make_curve, winding_inside

__all__ = [
    "FieldSample",
    "VolumeGrid",
    "DirichletProblem",
    "ResolventSolve",
    "SweepReport",
    "build_volume_grid",
    "newtonian_potential",
    "solve_dirichlet",
    "solve_resolvent",
    "discrete_norm",
    "resolvent_sweep",
    "solenoidal_bump",
]

_DECAY_CUTOFF = 40.0
_MAX_LU_SIZE = 8192


@dataclass(frozen=True)
class FieldSample:
    """Velocity (complex 2-vector) and pressure (complex scalar) at a point."""

    velocity: np.ndarray
    pressure: complex


def field_arrays(samples):
    """Stack a FieldSample list into (velocity (m, 2), pressure (m,))."""
    u = np.array([s.velocity for s in samples])
    phi = np.array([s.pressure for s in samples])
    return u, phi


# ----------------------------------------------------------------------
# volume grid on star-shaped domains

@dataclass(frozen=True, eq=False)
class VolumeGrid:
    """Tensor-product interior quadrature grid mapped from a boundary curve.

    Points are y(s, t) = c + s (boundary(t) - c) for radial fractions s and
    boundary parameters t, so the grid conforms to the domain exactly for
    any curve star-shaped about its centroid.  ``inside`` flags every point
    (verified by winding number at build time).
    """

    curve: object
    center: np.ndarray
    s_nodes: np.ndarray
    t_nodes: np.ndarray
    points: np.ndarray
    weights: np.ndarray
    inside: np.ndarray
    edge_of_t: np.ndarray

    @property
    def n_points(self):
        return self.points.shape[0]

    @property
    def area(self):
        return float(np.sum(self.weights))

    def interpolate(self, samples, targets):
        """Interpolate node samples (n_points, c) to interior targets."""
        samples = np.asarray(samples)
        ns, nt = self.s_nodes.size, self.t_nodes.size
        flat = samples.reshape(ns, -1)
        nc = flat.shape[1] // nt
        s, t = _to_st(self.curve, self.center, np.atleast_2d(targets))
        bs = _bary_matrix(self.s_nodes, s)
        bt = _angular_interp_matrix(self.curve, self.t_nodes,
                                    self.edge_of_t, t)
        mid = (bs @ flat).reshape(-1, nt, nc)
        out = np.einsum("mj,mjc->mc", bt, mid)
        return out if samples.ndim > 1 else out[:, 0]


def _centroid(curve):
    pl = curve.polyline(2048)
    x, y = pl[:, 0], pl[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = 0.5 * np.sum(cross)
    cx = np.sum((x + xn) * cross) / (6.0 * a)
    cy = np.sum((y + yn) * cross) / (6.0 * a)
    return np.array([cx, cy])


def build_volume_grid(curve, radial=16, angular=48):
    """Build an interior quadrature grid for a star-shaped domain.

    ``radial`` Gauss points cover the radial fraction; ``angular`` points
    cover the boundary parameter (uniform periodic for smooth curves,
    Gauss panels per edge for polygons).
    """
    if radial < 2 or angular < 4:
        raise ConfigError("volume grid needs radial >= 2 and angular >= 4")
    center = _centroid(curve)
    gs, gw = np.polynomial.legendre.leggauss(radial)
    s = 0.5 * (gs + 1.0)
    ws = 0.5 * gw
    if curve.kind == "polygon":
        edges = int(curve.param_max)
        per_edge = max(4, angular // edges)
        ge, gwe = np.polynomial.legendre.leggauss(per_edge)
        t = np.concatenate([e + 0.5 * (ge + 1.0) for e in range(edges)])
        wt = np.tile(0.5 * gwe, edges)
        edge_of_t = np.repeat(np.arange(edges), per_edge)
    else:
        t = curve.param_max * np.arange(angular) / angular
        wt = np.full(angular, curve.param_max / angular)
        edge_of_t = np.zeros(angular, dtype=int)
    bd = curve.point(t) - center[None, :]
    vel = curve.velocity(t)
    jac0 = bd[:, 0] * vel[:, 1] - bd[:, 1] * vel[:, 0]
    if np.any(jac0 <= 0.0):
        raise ConfigError("curve is not star-shaped about its centroid")
    pts = center[None, None, :] + s[:, None, None] * bd[None, :, :]
    w = (s * ws)[:, None] * (jac0 * wt)[None, :]
    pts = pts.reshape(-1, 2)
    w = w.reshape(-1)
    inside = winding_inside(curve, pts)
    if not np.all(inside):
        raise ConfigError("volume grid point fell outside the domain")
    return VolumeGrid(curve, center, s, t, pts, w, inside, edge_of_t)


def _to_st(curve, center, pts):
    d = pts - center[None, :]
    if curve.kind == "polygon":
        verts = curve.polyline() - center[None, :]
        nv = verts.shape[0]
        ang_v = np.arctan2(verts[:, 1], verts[:, 0])
        ang = np.arctan2(d[:, 1], d[:, 0])
        s = np.empty(pts.shape[0])
        t = np.empty(pts.shape[0])
        done = np.zeros(pts.shape[0], dtype=bool)
        for e in range(nv):
            a0, a1 = ang_v[e], ang_v[(e + 1) % nv]
            rel = np.mod(ang - a0, 2.0 * np.pi)
            span = np.mod(a1 - a0, 2.0 * np.pi)
            mask = (rel <= span + 1e-14) & ~done
            if not np.any(mask):
                continue
            done |= mask
            v0, v1 = verts[e], verts[(e + 1) % nv]
            dm = d[mask]
            denom = dm[:, 0] * (v1 - v0)[1] - dm[:, 1] * (v1 - v0)[0]
            num = v0[0] * (v1 - v0)[1] - v0[1] * (v1 - v0)[0]
            r = num / denom
            c = 0 if abs((v1 - v0)[0]) >= abs((v1 - v0)[1]) else 1
            frac = (r * dm[:, c] - v0[c]) / (v1 - v0)[c]
            t[mask] = e + np.clip(frac, 0.0, 1.0)
            s[mask] = 1.0 / r
        return s, t
    if curve.kind == "ellipse":
        a, b = curve.params["a"], curve.params["b"]
    else:
        a = b = curve.params.get("radius", 1.0)
    t = np.mod(np.arctan2(d[:, 1] / b, d[:, 0] / a), 2.0 * np.pi)
    bd = curve.point(t) - center[None, :]
    s = np.hypot(d[:, 0], d[:, 1]) / np.hypot(bd[:, 0], bd[:, 1])
    return s, t


def _bary_matrix(nodes, x):
    w = np.ones_like(nodes)
    for i in range(nodes.size):
        w[i] = 1.0 / np.prod(nodes[i] - np.delete(nodes, i))
    diff = x[:, None] - nodes[None, :]
    hit = np.isclose(diff, 0.0, atol=1e-15)
    diff = np.where(hit, 1.0, diff)
    terms = w[None, :] / diff
    out = terms / terms.sum(axis=1)[:, None]
    rows = hit.any(axis=1)
    out[rows] = hit[rows].astype(float)
    return out


def _angular_interp_matrix(curve, t_nodes, edge_of_t, t):
    if curve.kind == "polygon":
        out = np.zeros((t.size, t_nodes.size))
        edges = int(curve.param_max)
        per_edge = t_nodes.size // edges
        e_of_q = np.clip(np.floor(t).astype(int), 0, edges - 1)
        for e in range(edges):
            mask = e_of_q == e
            if not np.any(mask):
                continue
            cols = np.flatnonzero(edge_of_t == e)
            out[np.ix_(mask, cols)] = _bary_matrix(t_nodes[cols], t[mask])
        return out
    n = t_nodes.size
    delta = (2.0 * np.pi / curve.param_max) * (t[:, None] - t_nodes[None, :])
    near = np.isclose(np.mod(delta, 2.0 * np.pi), 0.0, atol=1e-13) \
        | np.isclose(np.mod(delta, 2.0 * np.pi), 2.0 * np.pi, atol=1e-13)
    delta = np.where(near, 1.0, delta)
    if n % 2 == 0:
        out = np.sin(0.5 * n * delta) / (n * np.tan(0.5 * delta))
    else:
        out = np.sin(0.5 * n * delta) / (n * np.sin(0.5 * delta))
    out[near] = 1.0
    rows = near.any(axis=1)
    out[rows] = near[rows].astype(float)
    return out


# ----------------------------------------------------------------------
# discrete norms

def discrete_norm(values, grid, q=2):
    """Discrete L^q norm of nodal field values over a volume grid.

    ``values`` may be scalar (n,) or vector (n, c); vector magnitudes are
    Euclidean.  ``q`` = inf gives the max magnitude.
    """
    values = np.asarray(values)
    mag = np.abs(values) if values.ndim == 1 \
        else np.sqrt(np.sum(np.abs(values) ** 2, axis=1))
    if mag.shape[0] != grid.n_points:
        raise ValueError("values do not match the grid")
    if q == np.inf or q == "inf":
        return float(mag.max())
    q = float(q)
    if q < 1.0:
        raise ValueError("norm exponent must be >= 1")
    return float(np.sum(grid.weights * mag ** q) ** (1.0 / q))


# ----------------------------------------------------------------------
# per-target polar-ray quadrature for the Newtonian potential

@lru_cache(maxsize=64)
def _leggauss(n):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=8)
def _log_radial_rule(q):
    """Tanh-sinh nodes/weights on [0, 1] for r^m log r endpoint behaviour.

    Double-exponential node spacing resolves the logarithmic endpoint at
    spectral rate while every weight stays positive, so roundoff or
    interpolation noise in the integrand is never amplified.  The step
    shrinks with ``q`` to track the quality of the Gauss panels that
    follow the first panel.
    """
    h = 2.4 / (q + 3)
    m = int(math.ceil(math.asinh(2.0 * math.log(1e22) / math.pi) / h))
    j = np.arange(-m, m + 1, dtype=np.float64)
    sh = 0.5 * math.pi * np.sinh(j * h)
    r = 0.5 * (1.0 + np.tanh(sh))
    w = 0.25 * math.pi * h * np.cosh(j * h) / np.cosh(sh) ** 2
    keep = (w > 1e-18) & (r > 1e-250)
    return r[keep], w[keep]


def _ray_lengths(curve, x, e):
    """Distance from x to the boundary along unit directions e (m, 2)."""
    if curve.kind == "polygon":
        verts = curve.polyline()
        tmin = np.full(e.shape[0], np.inf)
        for k in range(verts.shape[0]):
            v0, v1 = verts[k], verts[(k + 1) % verts.shape[0]]
            dv = v1 - v0
            denom = e[:, 0] * dv[1] - e[:, 1] * dv[0]
            ok = np.abs(denom) > 1e-300
            tt = np.where(ok, ((v0[0] - x[0]) * dv[1]
                               - (v0[1] - x[1]) * dv[0]) / denom, np.inf)
            ss = np.where(ok, (e[:, 0] * (v0[1] - x[1])
                               - e[:, 1] * (v0[0] - x[0])) / -denom, -1.0)
            good = ok & (tt > 1e-12) & (ss >= -1e-12) & (ss <= 1.0 + 1e-12)
            tmin = np.where(good & (tt < tmin), tt, tmin)
        return tmin
    if curve.kind == "ellipse":
        a, b = curve.params["a"], curve.params["b"]
    else:
        a = b = curve.params.get("radius", 1.0)
    aa = (e[:, 0] / a) ** 2 + (e[:, 1] / b) ** 2
    bb = 2.0 * (x[0] * e[:, 0] / a ** 2 + x[1] * e[:, 1] / b ** 2)
    cc = (x[0] / a) ** 2 + (x[1] / b) ** 2 - 1.0
    disc = np.sqrt(np.maximum(bb ** 2 - 4.0 * aa * cc, 0.0))
    return (-bb + disc) / (2.0 * aa)


def _corner_angles(curve, x):
    verts = curve.polyline()
    d = verts - x[None, :]
    keep = np.hypot(d[:, 0], d[:, 1]) > 1e-12
    return np.arctan2(d[keep, 1], d[keep, 0])


def _angular_panels(curve, x, normal, n_theta):
    """List of (theta array, weight array) panels covering the view of x."""
    if normal is None:
        if curve.kind == "polygon":
            brk = np.sort(np.mod(_corner_angles(curve, x), 2.0 * np.pi))
            brk = np.concatenate([brk, [brk[0] + 2.0 * np.pi]])
            per = max(6, n_theta // (brk.size - 1))
            gx, gw = _leggauss(per)
            return [(0.5 * (a1 + a0) + 0.5 * (a1 - a0) * gx,
                     0.5 * (a1 - a0) * gw)
                    for a0, a1 in zip(brk[:-1], brk[1:])]
        th = 2.0 * np.pi * np.arange(n_theta) / n_theta
        return [(th, np.full(n_theta, 2.0 * np.pi / n_theta))]
    nu = math.atan2(-normal[1], -normal[0])
    lo, hi = nu - 0.5 * math.pi, nu + 0.5 * math.pi
    brk = [lo, lo + 0.125 * math.pi, lo + 0.25 * math.pi, nu,
           hi - 0.25 * math.pi, hi - 0.125 * math.pi, hi]
    if curve.kind == "polygon":
        cang = _corner_angles(curve, x)
        for base in (cang, cang + 2.0 * math.pi, cang - 2.0 * math.pi):
            inside = base[(base > lo + 1e-9) & (base < hi - 1e-9)]
            brk.extend(inside.tolist())
    brk = np.array(sorted(set(brk)))
    per = max(6, n_theta // 6)
    gx, gw = _leggauss(per)
    return [(0.5 * (a1 + a0) + 0.5 * (a1 - a0) * gx,
             0.5 * (a1 - a0) * gw)
            for a0, a1 in zip(brk[:-1], brk[1:]) if a1 - a0 > 1e-12]


def _unit_radial_rule(q, e0, cap):
    """Panelized rule on [0, 1] with a log-resolving first panel [0, e0].

    Rescaling r = L u turns an r^m log r integrand into another of the
    same type, so the first-panel tanh-sinh weights transfer under a pure
    rescaling.  Dyadically growing Gauss panels follow, none longer than
    ``cap``.
    """
    rl, wl = _log_radial_rule(q)
    nodes = [e0 * rl]
    wts = [e0 * wl]
    gx, gw = _leggauss(q)
    lo = e0
    length = e0
    while lo < 1.0 - 1e-15:
        length = min(2.0 * length, cap, 1.0 - lo)
        nodes.append(lo + 0.5 * length * (gx + 1.0))
        wts.append(0.5 * length * gw)
        lo += length
    return np.concatenate(nodes), np.concatenate(wts)


def _tail_contribution(f_fn, p, x, e, wth, rb, rcut, q):
    """Annulus part [rcut, rb] of the volume potential along rays e.

    Beyond the decay range of the resolvent kernel only the algebraic
    components survive: the steady -(1/lam) grad grad G0 velocity tail
    and the pressure vector, both smooth and slowly varying.  Log-spaced
    Gauss nodes integrate the exact dr/r measure of the velocity tail.
    """
    gx, gw = _leggauss(q)
    un = np.concatenate([0.125 * (gx + 1.0) + 0.25 * j for j in range(4)])
    uw = np.tile(0.125 * gw, 4)
    lnf = np.log(rb / rcut)
    r = rcut * np.exp(lnf[:, None] * un[None, :])
    wr = lnf[:, None] * uw[None, :]
    dx = (r[..., None] * e[:, None, :]).reshape(-1, 2)
    fv = f_fn(x[None, :] + dx).reshape(r.shape[0], r.shape[1], 2)
    ef = np.einsum("mj,mqj->mq", e, fv)
    vec = 2.0 * ef[..., None] * e[:, None, :] - fv
    u = np.einsum("mqj,mq,m->j", vec, wr, wth) / (2.0 * math.pi * p.lam)
    phi = -np.einsum("mq,mq,m->", ef, r * wr, wth) / (2.0 * math.pi)
    return u, phi


def _newtonian_single(curve, f_fn, p, x, normal, n_theta, q_r, first_len,
                      ell_cap):
    panels = _angular_panels(curve, x, normal, n_theta)
    u = np.zeros(2, dtype=np.complex128)
    phi = 0.0 + 0.0j
    absk = math.hypot(p.k.real, p.k.imag)
    cap = min(ell_cap, 6.0 / absk if absk > 0 else np.inf)
    rcut = _DECAY_CUTOFF / p.k.imag
    for th, wth in panels:
        e = np.stack([np.cos(th), np.sin(th)], axis=-1)
        rb_full = _ray_lengths(curve, x, e)
        rb = np.minimum(rb_full, rcut)
        live = rb > 1e-13
        if not np.any(live):
            continue
        e, wth, rb, rb_full = e[live], wth[live], rb[live], rb_full[live]
        rmax = rb.max()
        rho, w = _unit_radial_rule(q_r, min(first_len, cap, rmax / 3.0)
                                   / rmax, cap / rmax)
        rr = rb[:, None] * rho[None, :]
        scale = ((rb * wth)[:, None] * w[None, :] * rr).ravel()
        dx = (rr[..., None] * e[:, None, :]).reshape(-1, 2)
        fv = f_fn(x[None, :] + dx)
        gam = kernels.stokeslet_batch(-dx, p)
        pres = kernels.pressure_batch(-dx, 0)
        u += np.einsum("mjk,mk,m->j", gam, fv, scale)
        phi += np.einsum("mk,mk,m->", pres, fv, scale)
        tail = rb_full > rcut * (1.0 + 1e-12)
        if np.any(tail):
            ut, pt = _tail_contribution(f_fn, p, x, e[tail], wth[tail],
                                        rb_full[tail], rcut, q_r)
            u += ut
            phi += pt
    return u, phi


def _wrap_f(f_samples, grid):
    if callable(f_samples):
        return f_samples
    f_samples = np.asarray(f_samples, dtype=np.complex128)
    if grid is None or f_samples.shape != (grid.n_points, 2):
        raise ValueError("f samples must be callable or match the grid")
    return lambda pts: grid.interpolate(f_samples, pts)


def newtonian_potential(f_samples, grid, p, targets, boundary_mesh=None,
                        n_theta=48, q_r=10, first_len=0.1, ell_cap=0.25):
    """Volume potential pair (velocity, pressure) of a body force.

    ``f_samples`` is either an array of nodal values on ``grid`` or a
    callable on points.  Targets are interior by default; pass
    ``boundary_mesh`` when targets are its nodes so rays are restricted to
    the interior view cone.  ``ell_cap`` bounds radial panel lengths and
    should be comparable to the radial feature scale of the force.
    Returns a list of FieldSample.
    """
    f_fn = _wrap_f(f_samples, grid)
    curve = grid.curve if grid is not None else boundary_mesh.curve
    if curve.kind == "star":
        raise ConfigError("volume quadrature supports circle, ellipse, "
                          "and polygon domains")
    x = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    out = []
    for i in range(x.shape[0]):
        normal = None if boundary_mesh is None else boundary_mesh.normals[i]
        u, phi = _newtonian_single(curve, f_fn, p, x[i], normal,
                                   n_theta, q_r, first_len, ell_cap)
        out.append(FieldSample(u, phi))
    return out


# ----------------------------------------------------------------------
# Dirichlet solve

@dataclass(frozen=True, eq=False)
class DirichletProblem:
    """Interior Dirichlet data for the resolvent system.

    ``g`` holds boundary velocity values at the mesh nodes; its weighted
    normal flux must vanish up to ``compat_tol`` (compatible data).
    """

    mesh: object
    p: kernels.ResolventParameter
    g: np.ndarray
    compat_tol: float = 1e-6


@dataclass(frozen=True, eq=False)
class ResolventSolve:
    """Solution container: density, bordering multiplier, field evaluator.

    ``evaluator(targets)`` returns a list of FieldSample.  ``residual`` is
    the augmented-system backward error; ``condition_estimate`` the LAPACK
    reciprocal-condition-based estimate of the augmented matrix.
    """

    density: np.ndarray
    augmented_multiplier: complex
    evaluator: object
    residual: float
    condition_estimate: float
    grid: object = None
    grid_velocity: np.ndarray = None
    grid_pressure: np.ndarray = None
    trace_defect: float = 0.0


def make_boundary_operator(mesh, p):
    """Factorized augmented double-layer operator for one parameter.

    The return value can be passed to solve_dirichlet or solve_resolvent
    to reuse the assembly and LU factorization across right-hand sides at
    the same resolvent parameter.
    """
    n2 = 2 * mesh.n_nodes
    if n2 > _MAX_LU_SIZE:
        raise ValueError(f"dense solve limited to {_MAX_LU_SIZE} unknowns")
    ks = potentials.assemble_Kstar(mesh, p)
    a = np.empty((n2 + 1, n2 + 1), dtype=np.complex128)
    a[:n2, :n2] = ks.entries
    a[np.arange(n2), np.arange(n2)] -= 0.5
    nvec = mesh.normals.ravel()
    a[:n2, n2] = nvec
    a[n2, :n2] = np.repeat(mesh.weights, 2) * nvec
    a[n2, n2] = 0.0
    anorm = np.linalg.norm(a, 1)
    lu, piv = scipy.linalg.lu_factor(a)
    rcond, info = scipy.linalg.lapack.zgecon(lu, anorm)
    if info != 0 or not np.isfinite(rcond) or rcond == 0.0:
        raise np.linalg.LinAlgError(
            f"augmented boundary system is singular (rcond={rcond!r})")
    return a, (lu, piv), 1.0 / rcond


def _bordered_solve(mesh, p, rhs_flat, operator=None):
    if operator is None:
        operator = make_boundary_operator(mesh, p)
    a, lupiv, cond = operator
    n2 = a.shape[0] - 1
    rhs = np.concatenate([rhs_flat, [0.0]])
    sol = scipy.linalg.lu_solve(lupiv, rhs)
    res = np.linalg.norm(a @ sol - rhs) / max(np.linalg.norm(rhs), 1e-300)
    return sol[:n2].reshape(-1, 2), complex(sol[n2]), res, cond


def solve_dirichlet(prob, operator=None):
    """Solve the interior Dirichlet problem with a double-layer ansatz."""
    mesh, p = prob.mesh, prob.p
    g = potentials._density_values(prob.g, mesh)
    defect = np.abs(np.sum(mesh.weights[:, None] * mesh.normals * g))
    scale = max(1.0, float(np.abs(g).max()))
    if defect > prob.compat_tol * scale:
        raise ValueError(
            f"incompatible boundary data: normal flux defect {defect:.3e}")
    psi, mult, res, cond = _bordered_solve(mesh, p, g.ravel(), operator)

    def evaluator(targets):
        u = potentials.double_layer_velocity(psi, mesh, p, targets)
        phi = potentials.double_layer_pressure(psi, mesh, p, targets)
        return [FieldSample(u[i], phi[i]) for i in range(u.shape[0])]

    return ResolventSolve(psi, mult, evaluator, res, cond)


# ----------------------------------------------------------------------
# body-force resolvent

def solve_resolvent(mesh, grid, p, f_samples, n_theta=48, q_r=10,
                    first_len=0.1, ell_cap=0.25, operator=None):
    """Apply the discrete resolvent to a body force.

    The velocity is the Newtonian volume potential plus a double-layer
    correction whose Dirichlet data cancels the volume trace; the pressure
    is gauged to have zero discrete mean over ``grid``.  The exact volume
    trace has zero normal flux, so its quadrature-induced flux defect is
    projected out before the boundary solve and reported as
    ``trace_defect``.
    """
    f_fn = _wrap_f(f_samples, grid)
    trace = newtonian_potential(f_fn, grid, p, mesh.nodes,
                                boundary_mesh=mesh, n_theta=n_theta,
                                q_r=q_r, first_len=first_len,
                                ell_cap=ell_cap)
    un_bd, _ = field_arrays(trace)
    g = -un_bd
    flux = np.sum(mesh.weights[:, None] * mesh.normals * g)
    scale = max(1.0, float(np.abs(g).max()))
    if np.abs(flux) > 1e-3 * scale:
        raise ValueError(
            f"volume trace flux defect {np.abs(flux):.3e} exceeds the "
            "quadrature sanity bound; refine the volume rule")
    g = g - (flux / mesh.weights.sum()) * mesh.normals
    prob = DirichletProblem(mesh, p, g)
    base = solve_dirichlet(prob, operator)
    psi = base.density

    def raw_fields(targets):
        vol = newtonian_potential(f_fn, grid, p, targets, n_theta=n_theta,
                                  q_r=q_r, first_len=first_len,
                                  ell_cap=ell_cap)
        uv, pv = field_arrays(vol)
        u = uv + potentials.double_layer_velocity(psi, mesh, p, targets)
        phi = pv + potentials.double_layer_pressure(psi, mesh, p, targets)
        return u, phi

    u_grid, phi_grid = raw_fields(grid.points)
    offset = np.sum(grid.weights * phi_grid) / grid.area
    phi_grid = phi_grid - offset

    def evaluator(targets):
        u, phi = raw_fields(targets)
        phi = phi - offset
        return [FieldSample(u[i], phi[i]) for i in range(u.shape[0])]

    return ResolventSolve(psi, base.augmented_multiplier, evaluator,
                          base.residual, base.condition_estimate,
                          grid, u_grid, phi_grid, float(np.abs(flux)))


# ----------------------------------------------------------------------
# body-force test fields and the resolvent sweep

def solenoidal_bump(center=(0.0, 0.0), width=0.15, strength=1.0, cutoff=6.0):
    """Divergence-free smooth velocity bump supported in a disk.

    Rotated gradient of a Gaussian stream function of scale ``width``,
    truncated at ``cutoff`` widths where the tail is below machine
    precision, so the field is exactly solenoidal, smooth to rounding,
    and compactly supported.
    """
    c = np.asarray(center, dtype=np.float64)

    def f(pts):
        pts = np.atleast_2d(pts)
        d = pts - c[None, :]
        s2 = (d[:, 0] ** 2 + d[:, 1] ** 2) / width ** 2
        out = np.zeros((pts.shape[0], 2), dtype=np.complex128)
        mask = s2 < cutoff ** 2
        if np.any(mask):
            grad = -2.0 * d[mask] / width ** 2 \
                * np.exp(-s2[mask])[:, None]
            out[mask, 0] = strength * grad[:, 1]
            out[mask, 1] = -strength * grad[:, 0]
        return out

    return f


@dataclass(frozen=True, eq=False)
class SweepReport:
    """Resolvent sweep results: one row per (lambda, f) pair."""

    rows: tuple
    q: float
    mesh_n: int
    grid_n: int

    @property
    def sup_ratio(self):
        return max(r["ratio"] for r in self.rows)


def resolvent_sweep(domain, theta, lambda_grid, f_set=None, q=2.0,
                    panels=32, nodes_per_panel=8, radial=12, angular=36,
                    n_theta=32, q_r=8):
    """Measure (1 + |lambda|) ||u||_q / ||f||_q over a lambda grid.

    ``domain`` is a BoundaryCurve or a curve spec dict; ``f_set`` a list of
    body-force callables (default: one fixed solenoidal bump scaled to the
    domain).  Returns a SweepReport whose rows carry the CSV columns.
    """
    curve = domain if hasattr(domain, "point") else make_curve(domain)
    mesh = build_mesh(curve, panels=panels, nodes_per_panel=nodes_per_panel)
    grid = build_volume_grid(curve, radial=radial, angular=angular)
    if f_set is None:
        c = _centroid(curve)
        inradius = float(np.min(np.hypot(*(curve.polyline(512) - c).T)))
        f_set = [solenoidal_bump(c, width=0.18 * inradius)]
    rows = []
    for lam in lambda_grid:
        p = kernels.make_resolvent_parameter(lam, theta)
        for fi, f_fn in enumerate(f_set):
            sol = solve_resolvent(mesh, grid, p, f_fn, n_theta=n_theta,
                                  q_r=q_r)
            fnorm = discrete_norm(f_fn(grid.points), grid, q)
            unorm = discrete_norm(sol.grid_velocity, grid, q)
            rows.append({
                "lambda_re": float(np.real(lam)),
                "lambda_im": float(np.imag(lam)),
                "abs_lambda": float(abs(lam)),
                "q": float(q),
                "f_index": fi,
                "ratio": (1.0 + abs(lam)) * unorm / fnorm,
                "mesh_N": mesh.n_nodes,
                "grid_N": grid.n_points,
            })
    return SweepReport(tuple(rows), float(q), mesh.n_nodes, grid.n_points)
