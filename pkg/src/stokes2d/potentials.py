"""Layer potentials, boundary operator matrices, and jump measurements.

Velocity and pressure layer potentials are evaluated off the boundary with
plain panel quadrature, switching to adaptive panel subdivision when the
target sits closer than a few panel lengths.  The boundary operator that
governs Dirichlet limits of the double layer is assembled as a Nystrom
matrix whose singular panel entries come from product rules: the
velocity-gradient kernel splits into a principal-value Cauchy factor, a
smooth factor, and a weakly singular difference factor carrying log|x - y|.
The companion operator acting on conormal data is obtained from it by the
weighted conjugate transpose, so the discrete duality relation holds by
construction.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _panelrules as rules
from . import kernels
from .errors import QuadratureNonConvergence
from .geometry import approach_samples

__all__ = [
    "Density",
    "BoundaryOperatorMatrix",
    "JumpReport",
    "single_layer_velocity",
    "single_layer_pressure",
    "single_layer_velocity_gradient",
    "double_layer_velocity",
    "double_layer_pressure",
    "conormal_derivative",
    "assemble_K",
    "assemble_Kstar",
    "apply_operator",
    "jump_measure",
]

NEAR_FACTOR = 3.0
_PANEL_REGIME = 0.4
_WINDOW_REGIME = 0.3
_FOUR_PI = 4.0 * math.pi
_EYE = np.eye(2)


@dataclass(frozen=True, eq=False)
class Density:
    """Complex 2-vector density sampled at the mesh nodes."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("density must have shape (nodes, 2)")
        if not np.all(np.isfinite(v)):
            raise ValueError("density entries must be finite")
        object.__setattr__(self, "values", v)


def _density_values(f, mesh):
    v = f.values if isinstance(f, Density) else np.asarray(f, dtype=np.complex128)
    if v.shape != (mesh.n_nodes, 2):
        raise ValueError(f"density shape {v.shape} does not match mesh "
                         f"({mesh.n_nodes}, 2)")
    if not np.all(np.isfinite(v)):
        raise ValueError("density entries must be finite")
    return v


@dataclass(frozen=True, eq=False)
class BoundaryOperatorMatrix:
    """Dense Nystrom matrix of a boundary operator on interleaved dofs.

    Entry (2i + a, 2k + b) maps component b at node k to component a of
    the operator output at node i.
    """

    entries: np.ndarray
    kind: str
    p: kernels.ResolventParameter
    mesh: object

    @property
    def n(self):
        return self.entries.shape[0] // 2


# ----------------------------------------------------------------------
# kernel block closures; all take target batch x, source points y with
# outward normals n, and return (len(x), len(y), D, 2) blocks

def _flat_pairs(x, y):
    d = x[:, None, :] - y[None, :, :]
    return d.reshape(-1, 2)


def _sl_pair(d, n, p):
    return kernels.stokeslet_batch(d, p)


def _slp_pair(d, n, p):
    blk = kernels.pressure_batch(d, 0)
    return blk[:, None, :].astype(np.complex128)


def _slgrad_pair(d, n, p):
    g = kernels.stokeslet_grad_batch(d, p)
    g = np.transpose(g, (0, 1, 3, 2))  # rows (component a, derivative g)
    return g.reshape(-1, 4, 2)


def _dl_core(d, n, p):
    """Double-layer velocity kernel blocks at displacements d = y - x."""
    grad = kernels.stokeslet_grad_batch(d, p)
    a = np.einsum("mjkg,mg->mjk", grad, n)
    phi = kernels.pressure_batch(d, 0)
    return a - phi[:, :, None] * n[:, None, :]


def _kernel_blocks(dsrc, nsrc, ntgt, p, conormal):
    """Boundary operator kernel blocks given row displacements dsrc = y - x.

    ``conormal`` False gives the double-layer trace kernel (normal at the
    source), True the conormal single-layer kernel (normal at the target).
    """
    if not conormal:
        return _dl_core(dsrc, nsrc, p)
    grad = kernels.stokeslet_grad_batch(-dsrc, p)
    a = np.einsum("mjkg,mg->mjk", grad, ntgt)
    phi = kernels.pressure_batch(-dsrc, 0)
    return a - ntgt[:, :, None] * phi[:, None, :]


def _dl_pair(d, n, p):
    return _dl_core(-d, n, p)


def _dlp_pair(d, n, p):
    hess = kernels.laplace_batch(-d, 2)
    t = np.einsum("mik,mi->mk", hess, n).astype(np.complex128)
    t += p.lam * kernels.laplace_batch(-d, 0)[:, None] * n
    return t[:, None, :]


# ----------------------------------------------------------------------
# off-boundary evaluation with near-singular subdivision

def _node_panel_dists(mesh, x):
    d = np.hypot(x[:, None, 0] - mesh.nodes[None, :, 0],
                 x[:, None, 1] - mesh.nodes[None, :, 1])
    return d, d.reshape(x.shape[0], mesh.n_panels, mesh.nodes_per_panel).min(axis=2)


def _panel_u(mesh, pid, t):
    a, b = mesh.panel_bounds[pid]
    return 2.0 * (t - a) / (b - a) - 1.0


def _evaluate_layer(f, mesh, p, targets, pair_fn, rows):
    fvals = _density_values(f, mesh)
    x = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if x.ndim != 2 or x.shape[1] != 2:
        raise ValueError("targets must have shape (m, 2)")
    node_d, panel_d = _node_panel_dists(mesh, x)
    if np.any(node_d == 0.0):
        raise ValueError("target coincides with a mesh node")
    out = np.empty((x.shape[0], rows), dtype=np.complex128)
    chunk = max(1, 2 ** 22 // (8 * mesh.n_nodes))
    for lo in range(0, x.shape[0], chunk):
        hi = min(lo + chunk, x.shape[0])
        d = _flat_pairs(x[lo:hi], mesh.nodes)
        nn = np.broadcast_to(
            mesh.normals, (hi - lo,) + mesh.normals.shape).reshape(-1, 2)
        blocks = pair_fn(d, nn, p).reshape(hi - lo, mesh.n_nodes, rows, 2)
        out[lo:hi] = np.einsum("imdk,mk,m->id", blocks, fvals, mesh.weights)
    near = panel_d < NEAR_FACTOR * mesh.panel_lengths[None, :]
    ti, pids = np.nonzero(near)
    if ti.size:
        out += _near_corrections(mesh, x, fvals, ti, pids, pair_fn, p, rows)
    return out


def _near_corrections(mesh, x, fvals, ti, pids, pair_fn, p, rows):
    """Batched replacement of plain panel quadrature by adaptive subpanels.

    ``ti``/``pids`` list the near (target, panel) pairs.  All subpanel
    kernel evaluations across pairs are concatenated into one call, as are
    the plain contributions being subtracted, so the cost per pair is a
    few vector slots instead of a full kernel-batch launch.
    """
    q = mesh.nodes_per_panel
    t_parts, jac_parts, fsub_parts = [], [], []
    counts = np.empty(ti.size, dtype=np.int64)
    for m, (i, pid) in enumerate(zip(ti, pids)):
        a, b = mesh.panel_bounds[pid]
        t, jac = rules.collect_subpanels(mesh.curve, a, b, x[i], q,
                                         NEAR_FACTOR)
        interp = rules.interp_matrix(q, _panel_u(mesh, pid, t))
        t_parts.append(t)
        jac_parts.append(jac)
        fsub_parts.append(interp @ fvals[mesh.panel_slice(pid)])
        counts[m] = t.size
    t_all = np.concatenate(t_parts)
    jac_all = np.concatenate(jac_parts)
    fsub_all = np.concatenate(fsub_parts)
    y = mesh.curve.point(t_all)
    vel = mesh.curve.velocity(t_all)
    speed = np.hypot(vel[:, 0], vel[:, 1])
    n_all = np.stack([vel[:, 1], -vel[:, 0]], axis=-1) / speed[:, None]
    x_rep = np.repeat(x[ti], counts, axis=0)
    blocks = pair_fn(x_rep - y, n_all, p)
    weighted = np.einsum("mdk,mk,m->md", blocks, fsub_all, jac_all)
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
    fine = np.add.reduceat(weighted, offsets, axis=0)

    node_idx = (pids[:, None] * q + np.arange(q)[None, :]).reshape(-1)
    y_pl = mesh.nodes[node_idx]
    n_pl = mesh.normals[node_idx]
    x_pl = np.repeat(x[ti], q, axis=0)
    blocks = pair_fn(x_pl - y_pl, n_pl, p).reshape(ti.size, q, rows, 2)
    plain = np.einsum("pqdk,pqk,pq->pd", blocks,
                      fvals[node_idx].reshape(ti.size, q, 2),
                      mesh.weights[node_idx].reshape(ti.size, q))

    out = np.zeros((x.shape[0], rows), dtype=np.complex128)
    np.add.at(out, ti, fine - plain)
    return out


def single_layer_velocity(f, mesh, p, targets):
    """Velocity single layer potential at off-boundary targets, (m, 2)."""
    return _evaluate_layer(f, mesh, p, targets, _sl_pair, 2)


def single_layer_pressure(f, mesh, targets):
    """Pressure single layer potential at off-boundary targets, (m,)."""
    return _evaluate_layer(f, mesh, None, targets, _slp_pair, 1)[:, 0]


def single_layer_velocity_gradient(f, mesh, p, targets):
    """Gradient of the velocity single layer, (m, 2, 2) indexed [a, g].

    Entry [a, g] is the g-derivative of velocity component a.
    """
    out = _evaluate_layer(f, mesh, p, targets, _slgrad_pair, 4)
    return out.reshape(-1, 2, 2)


def double_layer_velocity(f, mesh, p, targets):
    """Velocity double layer potential at off-boundary targets, (m, 2)."""
    return _evaluate_layer(f, mesh, p, targets, _dl_pair, 2)


def double_layer_pressure(f, mesh, p, targets):
    """Pressure companion of the double layer at off-boundary targets."""
    return _evaluate_layer(f, mesh, p, targets, _dlp_pair, 1)[:, 0]


def conormal_derivative(vel_grad, pressure, n):
    """Conormal derivative (grad v) n - psi n for one point.

    Parameters
    ----------
    vel_grad : (2, 2) array
        Entry [a, g] is the g-derivative of velocity component a.
    pressure : complex
    n : (2,) unit vector

    Returns
    -------
    (2,) complex array
    """
    n = np.asarray(n, dtype=np.float64)
    if abs(np.hypot(n[0], n[1]) - 1.0) > 1e-12:
        raise ValueError("normal must be a unit vector")
    return np.asarray(vel_grad) @ n - pressure * n


# ----------------------------------------------------------------------
# Nystrom assembly of the boundary operators

def _stationary_parts(d, n, speed):
    """Cauchy numerator and smooth part of the stationary kernel rows."""
    rho2 = d[:, 0] ** 2 + d[:, 1] ** 2
    anti = n[:, :, None] * d[:, None, :]
    anti = (anti - anti.swapaxes(1, 2)) / (_FOUR_PI * rho2[:, None, None])
    nd = (d[:, 0] * n[:, 0] + d[:, 1] * n[:, 1]) / rho2
    dd = d[:, :, None] * d[:, None, :] / rho2[:, None, None]
    smooth = -(_EYE[None] + 2.0 * dd) * nd[:, None, None] / _FOUR_PI
    return anti, smooth * speed[:, None, None]


def _window_rows(mesh, i, wa, wb, p, diag_loc, conormal):
    """Product-rule row block over [wa, wb] for target node i.

    Returns (2, 2q) entries mapping panel node values to the principal
    value integral over the window.  ``diag_loc`` is the in-panel node
    index when the window is the whole panel (so the target is a quadrature
    node), else None and fresh Gauss nodes are used.  ``conormal`` selects
    the conormal kernel (normal frozen at the target) over the double-layer
    trace kernel (normal moving with the source); the Cauchy numerator and
    both diagonal limits coincide, while the smooth factor and the
    parameter-difference factor flip sign and swap which normal they use.
    """
    q = mesh.nodes_per_panel
    pid = mesh.panel_index[i]
    sl = mesh.panel_slice(pid)
    gx, gw = rules.gauss_rule(q)
    hw = wb - wa
    t0 = mesh.param_t[i]
    x = mesh.nodes[i]
    if diag_loc is not None:
        tw = mesh.param_t[sl]
        wlog, wcau = (a[diag_loc] for a in rules.node_product_weights(q))
        interp = np.eye(q)
    else:
        tw = wa + 0.5 * hw * (gx + 1.0)
        u0 = 2.0 * (t0 - wa) / hw - 1.0
        wlog, wcau = rules.product_weights(u0, q)
        interp = rules.interp_matrix(q, _panel_u(mesh, pid, tw))
    off = np.ones(q, dtype=bool)
    if diag_loc is not None:
        off[diag_loc] = False
    y = mesh.curve.point(tw[off])
    vel = mesh.curve.velocity(tw[off])
    speed = np.hypot(vel[:, 0], vel[:, 1])
    if conormal:
        n = np.broadcast_to(mesh.normals[i], (off.sum(), 2))
        sgn = -1.0
    else:
        n = np.stack([vel[:, 1], -vel[:, 0]], axis=-1) / speed[:, None]
        sgn = 1.0
    d = y - x[None, :]
    anti, smooth = _stationary_parts(d, n, speed)
    dt = (tw[off] - t0)
    cau_num = np.zeros((q, 2, 2), dtype=np.complex128)
    sm_plain = np.zeros((q, 2, 2), dtype=np.complex128)
    f_one = np.zeros((q, 2, 2), dtype=np.complex128)
    f_log = np.zeros((q, 2, 2), dtype=np.complex128)
    cau_num[off] = anti * (dt * speed)[:, None, None]
    sm_plain[off] = sgn * smooth
    smd, lgd = kernels.gradient_difference_log_split(d, p)
    smt = sgn * np.einsum("mjkg,mg->mjk", smd, n)
    lgt = sgn * np.einsum("mjkg,mg->mjk", lgd, n)
    rho2 = d[:, 0] ** 2 + d[:, 1] ** 2
    half_log_a = 0.5 * np.log(rho2 / dt ** 2)
    f_one[off] = (smt + half_log_a[:, None, None] * lgt) * speed[:, None, None]
    f_log[off] = lgt * speed[:, None, None]
    if diag_loc is not None:
        tang = mesh.curve.velocity(np.array([t0]))[0] / mesh.tangent_speed[i]
        nrm = mesh.normals[i]
        sp = mesh.tangent_speed[i]
        kappa = -(mesh.accel[i] @ nrm) / sp ** 2
        cau_num[diag_loc] = (np.outer(nrm, tang) - np.outer(tang, nrm)) / _FOUR_PI
        sm_plain[diag_loc] = -(_EYE + 2.0 * np.outer(tang, tang)) \
            * (0.5 * kappa) * sp / _FOUR_PI
    contrib = (wcau[:, None, None] * cau_num
               + 0.5 * hw * gw[:, None, None] * (sm_plain + f_one)
               + 0.5 * hw * (wlog + math.log(0.5 * hw) * gw)[:, None, None] * f_log)
    return np.einsum("slm,sj->ljm", contrib, interp).reshape(2, 2 * q)


def _refined_rows(mesh, i, lo, hi, pid, p, conormal):
    """Adaptively subdivided row block over [lo, hi] of panel pid."""
    q = mesh.nodes_per_panel
    x = mesh.nodes[i]
    t, jac = rules.collect_subpanels(mesh.curve, lo, hi, x, q, NEAR_FACTOR)
    y = mesh.curve.point(t)
    vel = mesh.curve.velocity(t)
    speed = np.hypot(vel[:, 0], vel[:, 1])
    n = np.stack([vel[:, 1], -vel[:, 0]], axis=-1) / speed[:, None]
    ntgt = np.broadcast_to(mesh.normals[i], n.shape)
    blocks = _kernel_blocks(y - x[None, :], n, ntgt, p, conormal)
    interp = rules.interp_matrix(q, _panel_u(mesh, pid, t))
    return np.einsum("s,slm,sj->ljm", jac, blocks, interp).reshape(2, 2 * q)


def _self_panel_rows(mesh, i, p, conormal):
    pid = mesh.panel_index[i]
    a, b = mesh.panel_bounds[pid]
    t0 = mesh.param_t[i]
    sl = mesh.panel_slice(pid)
    smax = mesh.tangent_speed[sl].max()
    reach = max(t0 - a, b - t0) * smax
    if p.r * reach ** 2 <= _PANEL_REGIME:
        loc = i - pid * mesh.nodes_per_panel
        return _window_rows(mesh, i, a, b, p, loc, conormal)
    hw = math.sqrt(_WINDOW_REGIME / p.r) / smax
    wa, wb = max(a, t0 - hw), min(b, t0 + hw)
    if wa <= a and wb >= b:
        loc = i - pid * mesh.nodes_per_panel
        return _window_rows(mesh, i, a, b, p, loc, conormal)
    rows = _window_rows(mesh, i, wa, wb, p, None, conormal)
    for lo, hi in ((a, wa), (wb, b)):
        if hi - lo > 0.0:
            rows += _refined_rows(mesh, i, lo, hi, pid, p, conormal)
    return rows


def _assemble(mesh, p, conormal, kind):
    n_nodes = mesh.n_nodes
    q = mesh.nodes_per_panel
    if np.any(mesh.panel_lengths <= 0.0):
        raise ValueError("mesh has degenerate panels")
    mat = np.empty((2 * n_nodes, 2 * n_nodes), dtype=np.complex128)
    chunk = max(1, 2 ** 21 // n_nodes)
    for lo in range(0, n_nodes, chunk):
        hi = min(lo + chunk, n_nodes)
        x = mesh.nodes[lo:hi]
        d = (mesh.nodes[None, :, :] - x[:, None, :]).reshape(-1, 2)
        nsrc = np.broadcast_to(mesh.normals, (hi - lo, n_nodes, 2)).reshape(-1, 2)
        ntgt = np.broadcast_to(mesh.normals[lo:hi, None, :],
                               (hi - lo, n_nodes, 2)).reshape(-1, 2)
        sing = np.all(d == 0.0, axis=1)
        d[sing] = (1.0, 0.0)
        blocks = _kernel_blocks(d, nsrc, ntgt, p, conormal)
        blocks = blocks.reshape(hi - lo, n_nodes, 2, 2)
        blocks[sing.reshape(hi - lo, n_nodes)] = 0.0
        blocks *= mesh.weights[None, :, None, None]
        mat[2 * lo:2 * hi] = np.transpose(blocks, (0, 2, 1, 3)).reshape(
            2 * (hi - lo), 2 * n_nodes)
    _, panel_d = _node_panel_dists(mesh, mesh.nodes)
    near = panel_d < NEAR_FACTOR * mesh.panel_lengths[None, :]
    near[np.arange(n_nodes), mesh.panel_index] = False
    for i in range(n_nodes):
        pid = mesh.panel_index[i]
        cols = slice(2 * q * pid, 2 * q * (pid + 1))
        mat[2 * i:2 * i + 2, cols] = _self_panel_rows(mesh, i, p, conormal)
        for nid in np.flatnonzero(near[i]):
            a, b = mesh.panel_bounds[nid]
            cols = slice(2 * q * nid, 2 * q * (nid + 1))
            mat[2 * i:2 * i + 2, cols] = _refined_rows(mesh, i, a, b, nid,
                                                       p, conormal)
    return BoundaryOperatorMatrix(mat, kind, p, mesh)


def assemble_Kstar(mesh, p):
    """Nystrom matrix of the principal-value double-layer trace operator.

    The interior and exterior Dirichlet limits of the velocity double
    layer are (-1/2 I + Kstar) f and (+1/2 I + Kstar) f respectively.
    """
    return _assemble(mesh, p, False, "K_lambda_bar_star")


def assemble_K(mesh, p):
    """Nystrom matrix of the principal-value conormal single-layer operator.

    The interior and exterior conormal traces of the velocity/pressure
    single layer pair are (+1/2 I + K) f and (-1/2 I + K) f respectively.
    The matrix is the quadrature-weighted adjoint of ``assemble_Kstar`` at
    the conjugate resolvent parameter up to assembly accuracy.
    """
    return _assemble(mesh, p, True, "K_lambda")


def apply_operator(op, f):
    """Apply a boundary operator matrix to a density, returning (n, 2)."""
    fvals = _density_values(f, op.mesh)
    return (op.entries @ fvals.ravel()).reshape(-1, 2)


# ----------------------------------------------------------------------
# jump measurement across the boundary

def _richardson(vals):
    """Extrapolate a geometric approach sequence; returns (limit, err).

    ``err`` is the difference between the last two successive extrapolants.
    """
    t = np.asarray(vals, dtype=np.complex128)
    err = np.inf
    for k in range(1, t.shape[0]):
        fac = 2.0 ** k
        new = (fac * t[1:] - t[:-1]) / (fac - 1.0)
        err = abs(new[-1] - t[-1])
        t = new
    return t[-1], err


@dataclass(frozen=True, eq=False)
class JumpReport:
    """Measured vs predicted jumps of layer potentials across the boundary.

    ``quantities`` maps a quantity name to (predicted, measured, abs_err)
    arrays over the measured nodes; ``interior``/``exterior`` hold the
    extrapolated one-sided limits.
    """

    node_ids: np.ndarray
    quantities: dict
    interior: dict
    exterior: dict

    @property
    def max_abs_err(self):
        return max(float(np.max(err)) for _, _, err in self.quantities.values())

    def rows(self):
        out = []
        for name, (pred, meas, err) in sorted(self.quantities.items()):
            for j, nid in enumerate(self.node_ids):
                out.append((int(nid), name, complex(pred[j]),
                            complex(meas[j]), float(err[j])))
        return out


def jump_measure(f, mesh, p, alpha=2.0, distances=None, nodes=None,
                 tol=1e-6):
    """Measure boundary jumps of grad S, S_Phi, and D against predictions.

    One-sided limits are Richardson-extrapolated along the normal using a
    geometric distance sequence.  Predictions: [grad u]_{a g} =
    n_g f_a - n_a n_g (n.f), [pressure] = -n.f, [D f] = -f, with jumps
    taken as interior minus exterior.

    Raises
    ------
    QuadratureNonConvergence
        If successive extrapolants fail the convergence criterion.
    """
    fvals = _density_values(f, mesh)
    if nodes is None:
        nodes = np.arange(mesh.n_nodes)
    nodes = np.asarray(nodes, dtype=int)
    if distances is None:
        diam = max(np.ptp(mesh.nodes[:, 0]), np.ptp(mesh.nodes[:, 1]))
        d0 = min(mesh.panel_lengths.max(), 0.0025 * diam)
        distances = d0 * 0.5 ** np.arange(4)
    distances = np.asarray(distances, dtype=np.float64)
    nd = distances.shape[0]
    sides = {}
    for side in ("interior", "exterior"):
        pts = np.concatenate([
            approach_samples(mesh, q_index=i, alpha=alpha,
                             distances=distances, side=side)
            for i in nodes])
        grad = single_layer_velocity_gradient(f, mesh, p, pts)
        pres = single_layer_pressure(f, mesh, pts)
        dl = double_layer_velocity(f, mesh, p, pts)
        vals = {}
        worst = 0.0
        seq_g = grad.reshape(len(nodes), nd, 4)
        seq_p = pres.reshape(len(nodes), nd)
        seq_d = dl.reshape(len(nodes), nd, 2)
        lim_g = np.empty((len(nodes), 4), dtype=np.complex128)
        lim_p = np.empty(len(nodes), dtype=np.complex128)
        lim_d = np.empty((len(nodes), 2), dtype=np.complex128)
        for j in range(len(nodes)):
            for c in range(4):
                lim_g[j, c], e = _richardson(seq_g[j, :, c])
                worst = max(worst, e / max(1.0, abs(lim_g[j, c])))
            lim_p[j], e = _richardson(seq_p[j])
            worst = max(worst, e / max(1.0, abs(lim_p[j])))
            for c in range(2):
                lim_d[j, c], e = _richardson(seq_d[j, :, c])
                worst = max(worst, e / max(1.0, abs(lim_d[j, c])))
        if worst > tol:
            raise QuadratureNonConvergence(
                f"{side} extrapolation stalled at {worst:.2e} > {tol:.0e}")
        vals["grad"] = lim_g.reshape(len(nodes), 2, 2)
        vals["pressure"] = lim_p
        vals["dl"] = lim_d
        sides[side] = vals
    nrm = mesh.normals[nodes]
    fn = fvals[nodes]
    ndotf = np.sum(nrm * fn, axis=1)
    pred_grad = (nrm[:, None, :] * fn[:, :, None]
                 - nrm[:, :, None] * nrm[:, None, :] * ndotf[:, None, None])
    quantities = {}
    meas_grad = sides["interior"]["grad"] - sides["exterior"]["grad"]
    for a in range(2):
        for g in range(2):
            name = f"grad_sl_d{g}u{a}"
            pred = pred_grad[:, a, g]
            meas = meas_grad[:, a, g]
            quantities[name] = (pred, meas, np.abs(meas - pred))
    meas_p = sides["interior"]["pressure"] - sides["exterior"]["pressure"]
    pred_p = -ndotf.astype(np.complex128)
    quantities["pressure"] = (pred_p, meas_p, np.abs(meas_p - pred_p))
    meas_dl = sides["interior"]["dl"] - sides["exterior"]["dl"]
    for c in range(2):
        name = f"dl_velocity_{c}"
        pred = -fn[:, c]
        meas = meas_dl[:, c]
        quantities[name] = (pred, meas, np.abs(meas - pred))
    return JumpReport(nodes, quantities, sides["interior"], sides["exterior"])
