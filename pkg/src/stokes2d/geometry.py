"""Closed boundary curves, panelized quadrature meshes, approach regions.

Curves are supplied analytically (circle, ellipse, trigonometric star,
polygon) so normals and arc-length speeds are exact.  Meshes are composite
Gauss-Legendre rules per panel; polygon edges are graded dyadically toward
the corners.  Quadrature nodes are always interior to panels, so nodal
normals are well defined even on polygons; corner approach directions use
the angle bisector by convention.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import MeshError

__all__ = [
    "BoundaryCurve",
    "BoundaryMesh",
    "circle",
    "ellipse",
    "polygon",
    "star",
    "make_curve",
    "build_mesh",
    "compatibility_defect",
    "approach_samples",
    "boundary_distance",
    "winding_inside",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Closed, simple, counterclockwise boundary curve.

    Attributes
    ----------
    kind : str
        One of "circle", "ellipse", "star", "polygon".
    params : dict
        Shape parameters of the curve.
    lipschitz_M : float
        Crude Lipschitz-character estimate: 0 for smooth curves, the worst
        corner graph slope cot(half interior angle) for polygons.
    param_max : float
        Period of the parametrization (2 pi for smooth kinds, the edge
        count for polygons).
    corner_params : tuple of float
        Parameter values of the corners (empty when smooth).
    """

    kind: str
    params: dict
    lipschitz_M: float
    param_max: float
    corner_params: tuple = ()
    _verts: np.ndarray = field(default=None, repr=False)

    # -- parametrization ------------------------------------------------
    def point(self, t):
        """Curve points at parameter values ``t``, shape (n, 2)."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.kind == "circle":
            r = self.params["radius"]
            return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)
        if self.kind == "ellipse":
            return np.stack([self.params["a"] * np.cos(t),
                             self.params["b"] * np.sin(t)], axis=-1)
        if self.kind == "star":
            r = self._radius(t, 0)
            return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)
        verts = self._verts
        idx = np.floor(t % self.param_max).astype(int) % len(verts)
        frac = (t % self.param_max) - np.floor(t % self.param_max)
        a = verts[idx]
        b = verts[(idx + 1) % len(verts)]
        return a + frac[:, None] * (b - a)

    def velocity(self, t):
        """First parameter derivative of the curve, shape (n, 2)."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.kind == "circle":
            r = self.params["radius"]
            return np.stack([-r * np.sin(t), r * np.cos(t)], axis=-1)
        if self.kind == "ellipse":
            return np.stack([-self.params["a"] * np.sin(t),
                             self.params["b"] * np.cos(t)], axis=-1)
        if self.kind == "star":
            r = self._radius(t, 0)
            dr = self._radius(t, 1)
            c, s = np.cos(t), np.sin(t)
            return np.stack([dr * c - r * s, dr * s + r * c], axis=-1)
        verts = self._verts
        idx = np.floor(t % self.param_max).astype(int) % len(verts)
        return verts[(idx + 1) % len(verts)] - verts[idx]

    def accel(self, t):
        """Second parameter derivative of the curve, shape (n, 2)."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if self.kind == "circle":
            return -self.point(t)
        if self.kind == "ellipse":
            return -self.point(t)
        if self.kind == "star":
            r = self._radius(t, 0)
            dr = self._radius(t, 1)
            ddr = self._radius(t, 2)
            c, s = np.cos(t), np.sin(t)
            return np.stack([(ddr - r) * c - 2.0 * dr * s,
                             (ddr - r) * s + 2.0 * dr * c], axis=-1)
        return np.zeros((t.shape[0], 2))

    def _radius(self, t, deriv):
        base = self.params["base"]
        out = np.full(t.shape, base if deriv == 0 else 0.0)
        for j, cj in self.params["cos"]:
            if deriv == 0:
                out += cj * np.cos(j * t)
            elif deriv == 1:
                out += -cj * j * np.sin(j * t)
            else:
                out += -cj * j * j * np.cos(j * t)
        for j, sj in self.params["sin"]:
            if deriv == 0:
                out += sj * np.sin(j * t)
            elif deriv == 1:
                out += sj * j * np.cos(j * t)
            else:
                out += -sj * j * j * np.sin(j * t)
        return out

    # -- dense polyline used by containment and distance checks ---------
    def polyline(self, samples=4096):
        """Closed polyline approximation (corners included exactly)."""
        if self.kind == "polygon":
            return self._verts
        t = np.linspace(0.0, self.param_max, samples, endpoint=False)
        return self.point(t)


def _segments_intersect(p, q, r, s):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    d1 = orient(r, s, p)
    d2 = orient(r, s, q)
    d3 = orient(p, q, r)
    d4 = orient(p, q, s)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def circle(radius=1.0):
    """Circle of the given radius centered at the origin."""
    if radius <= 0:
        raise MeshError("radius must be positive")
    return BoundaryCurve("circle", {"radius": float(radius)}, 0.0, _TWO_PI)


def ellipse(a, b):
    """Axis-aligned ellipse with semi-axes a, b."""
    if a <= 0 or b <= 0:
        raise MeshError("semi-axes must be positive")
    return BoundaryCurve("ellipse", {"a": float(a), "b": float(b)}, 0.0, _TWO_PI)


def star(base=1.0, cos_coeffs=(), sin_coeffs=()):
    """Trigonometric star r(t) = base + sum c_j cos(jt) + sum s_j sin(jt).

    Coefficients are (harmonic, amplitude) pairs; the radius must stay
    positive.
    """
    cc = tuple((int(j), float(c)) for j, c in cos_coeffs)
    ss = tuple((int(j), float(c)) for j, c in sin_coeffs)
    curve = BoundaryCurve("star", {"base": float(base), "cos": cc, "sin": ss},
                          0.0, _TWO_PI)
    t = np.linspace(0, _TWO_PI, 2048, endpoint=False)
    if curve._radius(t, 0).min() <= 0:
        raise MeshError("star radius must remain positive")
    return curve


def polygon(vertices):
    """Simple polygon from counterclockwise vertices.

    Raises
    ------
    MeshError
        On fewer than 3 vertices, zero-length edges, clockwise orientation,
        or self-intersection.
    """
    verts = np.asarray(vertices, dtype=np.float64)
    if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
        raise MeshError("polygon needs at least three 2d vertices")
    edges = np.roll(verts, -1, axis=0) - verts
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    if np.any(lengths == 0.0):
        raise MeshError("polygon has a zero-length edge")
    area2 = np.sum(verts[:, 0] * np.roll(verts[:, 1], -1)
                   - np.roll(verts[:, 0], -1) * verts[:, 1])
    if area2 <= 0:
        raise MeshError("polygon vertices must be counterclockwise")
    n = len(verts)
    for i in range(n):
        for j in range(i + 1, n):
            if j in (i, (i + 1) % n, (i - 1) % n) or (i == 0 and j == n - 1):
                continue
            if _segments_intersect(verts[i], verts[(i + 1) % n],
                                   verts[j], verts[(j + 1) % n]):
                raise MeshError("polygon is self-intersecting")
    # worst corner slope: a wedge of interior half-angle beta is the graph
    # of a cot(beta)-Lipschitz function in the bisector frame
    slope = 0.0
    for i in range(n):
        a = edges[i - 1] / lengths[i - 1]
        b = edges[i] / lengths[i]
        interior = math.pi - math.atan2(a[0] * b[1] - a[1] * b[0],
                                        a[0] * b[0] + a[1] * b[1])
        half = 0.5 * interior
        slope = max(slope, abs(1.0 / math.tan(half)))
    cv = BoundaryCurve("polygon", {"vertices": verts.tolist()}, slope,
                       float(n), tuple(float(i) for i in range(n)))
    object.__setattr__(cv, "_verts", verts)
    return cv


def make_curve(spec):
    """Build a curve from a config mapping, e.g. {"kind": "circle", ...}."""
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "circle":
        return circle(spec.get("radius", 1.0))
    if kind == "ellipse":
        return ellipse(spec["a"], spec["b"])
    if kind == "star":
        return star(spec.get("base", 1.0), spec.get("cos", ()),
                    spec.get("sin", ()))
    if kind == "polygon":
        return polygon(spec["vertices"])
    raise MeshError(f"unknown curve kind: {kind!r}")


@dataclass(frozen=True, eq=False)
class BoundaryMesh:
    """Composite Gauss-Legendre quadrature mesh on a boundary curve.

    Attributes
    ----------
    curve : BoundaryCurve
    nodes : (N, 2) float array
    weights : (N,) float array
        Arc-length quadrature weights; they sum to the perimeter.
    normals : (N, 2) float array
        Unit outward normals.
    tangent_speed : (N,) float array
        |dzeta/dt| at the nodes.
    param_t : (N,) float array
        Curve parameter of each node.
    accel : (N, 2) float array
        Second parameter derivative at the nodes.
    panel_index : (N,) int array
    panel_bounds : (P, 2) float array
        Parameter interval of each panel.
    panel_lengths : (P,) float array
        Arc length of each panel.
    corner_panels : (P,) bool array
        Panels with a corner at one endpoint.
    corner_nodes : int array
        Nodes belonging to corner-touching panels.
    nodes_per_panel : int
    grading_exponent : float
    """

    curve: BoundaryCurve
    nodes: np.ndarray
    weights: np.ndarray
    normals: np.ndarray
    tangent_speed: np.ndarray
    param_t: np.ndarray
    accel: np.ndarray
    panel_index: np.ndarray
    panel_bounds: np.ndarray
    panel_lengths: np.ndarray
    corner_panels: np.ndarray
    corner_nodes: np.ndarray
    nodes_per_panel: int
    grading_exponent: float

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    @property
    def n_panels(self):
        return self.panel_bounds.shape[0]

    @property
    def perimeter(self):
        return float(self.weights.sum())

    def panel_slice(self, p):
        q = self.nodes_per_panel
        return slice(p * q, (p + 1) * q)


def _polygon_panel_bounds(curve, panels, grading):
    """Dyadically graded parameter panels toward every polygon corner."""
    n_edges = int(curve.param_max)
    per_edge = max(2, int(round(panels / n_edges)))
    half = per_edge // 2
    extra = per_edge - 2 * half  # odd budgets put one more panel on the first half
    ratio = 2.0 ** (-grading)
    bounds = []
    for e in range(n_edges):
        for side in (0, 1):
            m = half + (extra if side == 0 else 0)
            offs = 0.5 * ratio ** np.arange(m)  # distances from the corner
            if side == 0:  # grade toward corner at t = e
                pts = np.concatenate([[0.0], offs[::-1]]) + e
            else:  # grade toward corner at t = e + 1
                pts = (e + 1.0) - np.concatenate([[0.0], offs[::-1]])[::-1]
            for a, b in zip(pts[:-1], pts[1:]):
                bounds.append((a, b))
    return np.asarray(bounds)


def build_mesh(curve, panels=32, nodes_per_panel=8, grading_exponent=3.0):
    """Panelized Gauss-Legendre quadrature mesh for a boundary curve.

    Parameters
    ----------
    curve : BoundaryCurve
    panels : int
        Panel budget (exact for smooth curves; rounded to an even per-edge
        count for polygons), at least 4.
    nodes_per_panel : int
        Gauss-Legendre nodes per panel, at least 2.
    grading_exponent : float
        Dyadic grading exponent q >= 1; successive corner-ward panels
        shrink by 2^{-q}.  Ignored for smooth curves.

    Returns
    -------
    BoundaryMesh
    """
    if panels < 4:
        raise MeshError("at least 4 panels required")
    if nodes_per_panel < 2:
        raise MeshError("at least 2 nodes per panel required")
    if grading_exponent < 1.0:
        raise MeshError("grading exponent must be >= 1")
    if curve.kind == "polygon":
        bounds = _polygon_panel_bounds(curve, panels, grading_exponent)
    else:
        breaks = np.linspace(0.0, curve.param_max, panels + 1)
        bounds = np.stack([breaks[:-1], breaks[1:]], axis=1)
    gl_x, gl_w = leggauss(nodes_per_panel)
    t0 = bounds[:, 0][:, None]
    t1 = bounds[:, 1][:, None]
    t = (0.5 * (t1 - t0) * (gl_x[None, :] + 1.0) + t0).ravel()
    jac = (0.5 * (t1 - t0) * gl_w[None, :]).ravel()
    pts = curve.point(t)
    vel = curve.velocity(t)
    speed = np.hypot(vel[:, 0], vel[:, 1])
    weights = jac * speed
    tangents = vel / speed[:, None]
    normals = np.stack([tangents[:, 1], -tangents[:, 0]], axis=-1)
    acc = curve.accel(t)
    n_panels = bounds.shape[0]
    panel_index = np.repeat(np.arange(n_panels), nodes_per_panel)
    panel_lengths = weights.reshape(n_panels, nodes_per_panel).sum(axis=1)
    if curve.corner_params:
        # breakpoints at corners are constructed exactly, so compare exactly:
        # isclose would misflag deeply graded neighbours
        cp = np.asarray(curve.corner_params)
        touch0 = (bounds[:, 0][:, None] == cp[None, :]).any(axis=1)
        touch1 = ((bounds[:, 1][:, None] == cp[None, :]).any(axis=1)
                  | (bounds[:, 1][:, None] == cp[None, :] + curve.param_max).any(axis=1))
        corner_panels = touch0 | touch1
    else:
        corner_panels = np.zeros(n_panels, dtype=bool)
    corner_nodes = np.flatnonzero(corner_panels[panel_index])
    return BoundaryMesh(curve, pts, weights, normals, speed, t, acc,
                        panel_index, bounds, panel_lengths, corner_panels,
                        corner_nodes, nodes_per_panel, float(grading_exponent))


def compatibility_defect(g, mesh):
    """Discrete |integral of g . n| over the boundary.

    Parameters
    ----------
    g : (N, 2) array
        Vector density sampled at the mesh nodes.
    mesh : BoundaryMesh

    Returns
    -------
    float
    """
    g = np.asarray(g)
    if g.shape != mesh.normals.shape:
        raise ValueError(f"density shape {g.shape} does not match mesh "
                         f"({mesh.normals.shape})")
    return abs(np.sum(mesh.weights * np.sum(g * mesh.normals, axis=1)))


def winding_inside(curve, pts, samples=4096):
    """Interior test by winding number of the dense boundary polyline."""
    poly = curve.polyline(samples)
    pts = np.atleast_2d(pts)
    inside = np.empty(pts.shape[0], dtype=bool)
    nxt = np.roll(poly, -1, axis=0)
    for lo in range(0, pts.shape[0], 2048):
        chunk = pts[lo:lo + 2048]
        d0 = poly[None, :, :] - chunk[:, None, :]
        d1 = nxt[None, :, :] - chunk[:, None, :]
        cross = d0[:, :, 0] * d1[:, :, 1] - d0[:, :, 1] * d1[:, :, 0]
        dot = d0[:, :, 0] * d1[:, :, 0] + d0[:, :, 1] * d1[:, :, 1]
        ang = np.arctan2(cross, dot).sum(axis=1)
        inside[lo:lo + 2048] = np.abs(ang) > math.pi
    return inside


def boundary_distance(curve, pts, samples=4096):
    """Distance from points to the boundary via a dense polyline."""
    poly = curve.polyline(samples)
    nxt = np.roll(poly, -1, axis=0)
    seg = nxt - poly
    seglen2 = np.sum(seg ** 2, axis=1)
    pts = np.atleast_2d(pts)
    out = np.empty(pts.shape[0])
    for i, x in enumerate(pts):
        d = x[None, :] - poly
        s = np.clip(np.sum(d * seg, axis=1) / seglen2, 0.0, 1.0)
        proj = poly + s[:, None] * seg
        out[i] = np.min(np.hypot(x[0] - proj[:, 0], x[1] - proj[:, 1]))
    return out


def _corner_directions(curve, j):
    verts = curve._verts
    n = len(verts)
    prev_edge = verts[j] - verts[(j - 1) % n]
    next_edge = verts[(j + 1) % n] - verts[j]
    na = np.array([prev_edge[1], -prev_edge[0]]) / np.linalg.norm(prev_edge)
    nb = np.array([next_edge[1], -next_edge[0]]) / np.linalg.norm(next_edge)
    out = na + nb
    return out / np.linalg.norm(out)


def approach_samples(mesh, q_index=None, corner=None, alpha=2.0,
                     distances=(0.1,), side="interior"):
    """Sample points marching into an approach cone at a boundary point.

    Parameters
    ----------
    mesh : BoundaryMesh
    q_index : int, optional
        Node index; the march direction is the nodal normal.
    corner : int, optional
        Polygon corner index instead of a node; the march direction is the
        angle bisector (corner normals are undefined).
    alpha : float
        Cone aperture parameter, > 1.
    distances : sequence of float
        Positive decreasing distances from the boundary point.
    side : str
        "interior" or "exterior".

    Returns
    -------
    (d, 2) array of sample points.

    Raises
    ------
    ValueError
        If a requested point leaves the approach region
        |x - q| < alpha * dist(x, boundary) or the stated component.
    """
    if alpha <= 1.0:
        raise ValueError("alpha must exceed 1")
    if side not in ("interior", "exterior"):
        raise ValueError("side must be 'interior' or 'exterior'")
    dist = np.asarray(distances, dtype=np.float64)
    if dist.size == 0 or np.any(dist <= 0) or np.any(np.diff(dist) > 0):
        raise ValueError("distances must be positive and non-increasing")
    if (q_index is None) == (corner is None):
        raise ValueError("give exactly one of q_index or corner")
    if corner is not None:
        if mesh.curve.kind != "polygon":
            raise ValueError("corner approach requires a polygon")
        q = mesh.curve._verts[corner]
        direction = _corner_directions(mesh.curve, corner)
    else:
        q = mesh.nodes[q_index]
        direction = mesh.normals[q_index]
    if side == "interior":
        direction = -direction
    pts = q[None, :] + dist[:, None] * direction[None, :]
    want_inside = side == "interior"
    inside = winding_inside(mesh.curve, pts)
    if np.any(inside != want_inside):
        raise ValueError("distance too large: sample leaves the component")
    bd = boundary_distance(mesh.curve, pts)
    if np.any(np.hypot(*(pts - q[None, :]).T) >= alpha * bd * (1 + 1e-9)):
        raise ValueError("distance too large: sample leaves the approach cone")
    return pts
