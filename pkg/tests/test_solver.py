"""Tests for volume grids, the Newtonian potential, and interior solves."""

import math

import mpmath as mp
import numpy as np
import pytest

from stokes2d import solver
from stokes2d.errors import ConfigError
from stokes2d.geometry import build_mesh, circle, ellipse, polygon, star
from stokes2d.kernels import make_resolvent_parameter
from stokes2d.solver import (
    DirichletProblem,
    build_volume_grid,
    discrete_norm,
    field_arrays,
    make_boundary_operator,
    newtonian_potential,
    solenoidal_bump,
    solve_dirichlet,
    solve_resolvent,
)


@pytest.fixture(scope="module")
def disk_grid():
    return build_volume_grid(circle(1.0), radial=16, angular=48)


@pytest.fixture(scope="module")
def disk_mesh():
    return build_mesh(circle(1.0), panels=24, nodes_per_panel=8)


@pytest.fixture(scope="module")
def square_grid():
    sq = polygon([[0, 0], [1, 0], [1, 1], [0, 1]])
    return build_volume_grid(sq, radial=14, angular=48)


def interior_points(n, radius=0.8, seed=3):
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        q = rng.uniform(-radius, radius, 2)
        if np.hypot(*q) < radius:
            pts.append(q)
    return np.array(pts)


class TestVolumeGrid:
    def test_disk_area(self, disk_grid):
        assert abs(disk_grid.area - np.pi) < 1e-13

    def test_ellipse_area(self):
        g = build_volume_grid(ellipse(1.3, 0.8), radial=12, angular=40)
        assert abs(g.area - np.pi * 1.3 * 0.8) < 1e-12

    def test_square_area(self, square_grid):
        assert abs(square_grid.area - 1.0) < 1e-12

    def test_points_inside(self, disk_grid, square_grid):
        assert np.all(np.hypot(*disk_grid.points.T) < 1.0)
        assert np.all((square_grid.points > 0) & (square_grid.points < 1))

    def test_interpolation_smooth_disk(self, disk_grid):
        fn = lambda q: np.stack([np.exp(0.7 * q[:, 0]) * np.sin(2 * q[:, 1]),
                                 np.cos(q[:, 0] * q[:, 1])], axis=-1)
        vals = fn(disk_grid.points)
        pts = interior_points(40, radius=0.9)
        np.testing.assert_allclose(disk_grid.interpolate(vals, pts), fn(pts),
                                   rtol=0, atol=1e-10)

    def test_interpolation_smooth_square(self, square_grid):
        fn = lambda q: np.sin(1.3 * q[:, 0] + 0.4) * np.cosh(q[:, 1])
        vals = fn(square_grid.points)
        rng = np.random.default_rng(5)
        pts = rng.uniform(0.05, 0.95, (40, 2))
        np.testing.assert_allclose(square_grid.interpolate(vals, pts),
                                   fn(pts), rtol=0, atol=1e-8)

    def test_non_star_shaped_polygon_rejected(self):
        c_shape = polygon([[0, 0], [3, 0], [3, 1], [1, 1], [1, 2],
                           [3, 2], [3, 3], [0, 3]])
        with pytest.raises(ConfigError, match="star-shaped"):
            build_volume_grid(c_shape, radial=8, angular=24)

    def test_point_count(self, disk_grid):
        assert disk_grid.n_points == 16 * 48
        assert disk_grid.points.shape == (768, 2)
        assert disk_grid.weights.shape == (768,)


class TestDiscreteNorm:
    def test_constant_on_disk(self, disk_grid):
        ones = np.ones(disk_grid.n_points)
        assert abs(discrete_norm(ones, disk_grid, 2) - math.sqrt(math.pi)) < 1e-13
        assert abs(discrete_norm(ones, disk_grid, 1) - math.pi) < 1e-12

    def test_vector_magnitude(self, disk_grid):
        v = np.zeros((disk_grid.n_points, 2))
        v[:, 0] = 3.0
        v[:, 1] = 4.0
        assert abs(discrete_norm(v, disk_grid, np.inf) - 5.0) < 1e-14

    def test_interpolation_inequality(self, disk_grid):
        rng = np.random.default_rng(0)
        f = rng.standard_normal(disk_grid.n_points)
        n1 = discrete_norm(f, disk_grid, 1)
        n2 = discrete_norm(f, disk_grid, 2)
        ninf = discrete_norm(f, disk_grid, np.inf)
        assert n2 ** 2 <= n1 * ninf * (1 + 1e-12)

    def test_invalid_exponent(self, disk_grid):
        with pytest.raises(ValueError, match=">= 1"):
            discrete_norm(np.ones(disk_grid.n_points), disk_grid, 0.5)

    def test_shape_mismatch(self, disk_grid):
        with pytest.raises(ValueError):
            discrete_norm(np.ones(7), disk_grid, 2)


class TestRadialRules:
    def test_log_rule_moments(self):
        q = 10
        r, w = solver._log_radial_rule(q)
        for m in range(q):
            assert abs(np.sum(w * r ** m) - 1.0 / (m + 1)) < 5e-10
            assert abs(np.sum(w * r ** m * np.log(r)) + 1.0 / (m + 1) ** 2) < 5e-10

    def test_unit_rule_smooth_and_log_integrands(self):
        rho, w = solver._unit_radial_rule(10, 0.1, 0.25)
        exact_smooth = float(mp.quad(lambda t: mp.cos(3 * t) * t, [0, 1]))
        assert abs(np.sum(w * np.cos(3 * rho) * rho) - exact_smooth) < 1e-12
        exact_log = float(mp.quad(lambda t: mp.log(t) * mp.exp(t), [0, 1]))
        assert abs(np.sum(w * np.log(rho) * np.exp(rho)) - exact_log) < 1e-9

    def test_panels_respect_cap(self):
        rho, w = solver._unit_radial_rule(6, 0.05, 0.11)
        # no gap between consecutive nodes may exceed the cap
        assert np.diff(np.sort(rho)).max() < 0.11

    def test_weights_positive_and_normalized(self):
        # positivity keeps noise in sampled integrands from being
        # amplified; an oscillating-weight rule can be exact on its span
        # yet useless on interpolated data
        for q in (6, 10, 14):
            r, w = solver._log_radial_rule(q)
            assert (w > 0.0).all()
            assert abs(w.sum() - 1.0) < 1e-9
            assert (r > 0.0).all() and (r <= 1.0).all()


def gaussian_pair(width=0.17, strength=1.0, center=(0.1, 0.0),
                  pwidth=0.17, pstrength=0.7, pcenter=(-0.05, 0.08)):
    """Closed-form solenoidal velocity, pressure, and forcing fields."""
    cen = np.asarray(center)
    cen2 = np.asarray(pcenter)
    w, s, v, cp = width, strength, pwidth, pstrength

    def u(q):
        d = q - cen
        g = np.exp(-(d ** 2).sum(1) / w ** 2)
        return (-2 * s / w ** 2) * g[:, None] * np.stack(
            [d[:, 1], -d[:, 0]], axis=-1)

    def chi(q):
        d = q - cen2
        return cp * np.exp(-(d ** 2).sum(1) / v ** 2)

    def force(lam):
        def f(q):
            d = q - cen
            g = np.exp(-(d ** 2).sum(1) / w ** 2)
            rot = np.stack([d[:, 1], -d[:, 0]], axis=-1)
            uu = (-2 * s / w ** 2) * g[:, None] * rot
            lap = s * g[:, None] * (16 / w ** 4
                                    - 8 * (d ** 2).sum(1)[:, None] / w ** 6) * rot
            d2 = q - cen2
            gchi = (-2 * cp / v ** 2) * np.exp(
                -(d2 ** 2).sum(1) / v ** 2)[:, None] * d2
            return lam * uu - lap + gchi
        return f

    return u, chi, force


def const_force_disk_solution(lam, k, x):
    """Velocity of the unit-disk volume potential of the constant force e1.

    Matched radial solutions of (lam - Lap) M = 1 inside/outside the disk
    give M_G = 1/lam + A J0(k rho) with A = pi k H1(k)/(2 i lam), where
    H1 is evaluated through K1 to stay stable for large Im k.  The full
    field is c M_G - (1/lam)(M'' xh xh + (M'/rho)(I - xh xh)) c with
    M = M_G - M0 and M0 the Laplace counterpart.
    """
    c = np.array([1.0, 0.0])
    with mp.workdps(50):
        km = mp.mpc(k.real, k.imag)
        lm = mp.mpc(lam)
        rho = mp.sqrt(x[0] ** 2 + x[1] ** 2)
        h1 = -(2 / mp.pi) * mp.besselk(1, -1j * km)
        a = mp.pi * km * h1 / (2j * lm)
        j0 = mp.besselj(0, km * rho)
        j1 = mp.besselj(1, km * rho)
        mg = 1 / lm + a * j0
        mp1 = -a * km * j1 + rho / 2
        mp2 = -a * km ** 2 * (j0 - j1 / (km * rho)) + mp.mpf(1) / 2
        xh = np.array([float(x[0] / rho), float(x[1] / rho)])
        cd = xh @ c
        return (c * complex(mg)
                - (complex(mp2) * cd * xh
                   + complex(mp1 / rho) * (c - cd * xh)) / lam)


class TestNewtonianPotential:
    def test_ball_integral_of_constant_force(self, disk_grid):
        lam = 2.0 + 1.5j
        p = make_resolvent_parameter(lam)
        with mp.workdps(40):
            k = mp.mpc(p.k.real, p.k.imag)
            ig = (1j * mp.pi / (2 * k ** 2)) * (k * mp.hankel1(1, k) + 2j / mp.pi)
            gp = -(1j / 4) * k * mp.hankel1(1, k)
            exact = complex(ig - (mp.pi / lam) * (gp + 1 / (2 * mp.pi)))
        f = lambda q: np.tile([1.0 + 0.0j, 0.0j], (q.shape[0], 1))
        out = newtonian_potential(f, disk_grid, p, [[0.0, 0.0]],
                                  n_theta=48, q_r=10)
        assert abs(out[0].velocity[0] - exact) < 1e-10
        assert abs(out[0].velocity[1]) < 1e-12

    def test_free_space_solution_reproduced(self, disk_grid, disk_mesh):
        lam = 2.0 + 1.5j
        p = make_resolvent_parameter(lam)
        u, chi, force = gaussian_pair()
        f = force(lam)
        pts = interior_points(25)
        tight = dict(n_theta=160, q_r=12, first_len=0.05, ell_cap=0.06)
        uu, phi = field_arrays(newtonian_potential(f, disk_grid, p, pts,
                                                   **tight))
        su, sc = np.abs(u(pts)).max(), np.abs(chi(pts)).max()
        assert np.abs(uu - u(pts)).max() / su < 5e-9
        assert np.abs(phi - chi(pts)).max() / sc < 2e-7
        ub, phib = field_arrays(newtonian_potential(
            f, disk_grid, p, disk_mesh.nodes, boundary_mesh=disk_mesh,
            **tight))
        assert np.abs(ub - u(disk_mesh.nodes)).max() / su < 1e-9
        assert np.abs(phib - chi(disk_mesh.nodes)).max() / sc < 1e-8

    def test_constant_force_closed_form(self, disk_grid, disk_mesh):
        # wall-supported forcing: unlike compact manufactured fields this
        # exercises grazing rays and the full ray extent at every target
        lam = 2.0 + 1.5j
        p = make_resolvent_parameter(lam)
        f = lambda q: np.tile([1.0 + 0.0j, 0.0j], (q.shape[0], 1))
        tg = np.array([[0.55, 0.0], [0.3, -0.4],
                       0.9721 * np.array([np.cos(0.7), np.sin(0.7)])])
        uu, _ = field_arrays(newtonian_potential(f, disk_grid, p, tg,
                                                 n_theta=64, q_r=10))
        for i, x in enumerate(tg):
            ex = const_force_disk_solution(lam, complex(p.k), x)
            assert np.abs(uu[i] - ex).max() < 1e-9
        xb = disk_mesh.nodes[3]
        ub, _ = field_arrays(newtonian_potential(
            f, disk_grid, p, disk_mesh.nodes[:4], boundary_mesh=disk_mesh,
            n_theta=64, q_r=10))
        exb = const_force_disk_solution(lam, complex(p.k), xb * (1 - 1e-12))
        assert np.abs(ub[3] - exb).max() < 1e-7

    def test_star_domain_rejected(self):
        g = build_volume_grid(star(1.0, cos_coeffs=((2, 0.05),)), radial=8,
                              angular=24)
        p = make_resolvent_parameter(1.0)
        f = lambda q: np.zeros((q.shape[0], 2), dtype=complex)
        with pytest.raises(ConfigError, match="circle, ellipse"):
            newtonian_potential(f, g, p, [[0.0, 0.0]])

    def test_decay_truncation_far_from_support(self, disk_grid):
        # at large modulus the oscillatory kernel range is tiny; what
        # survives at a distant target is the algebraic 1/(lam r^2) tail,
        # which cancels for a solenoidal force once the angular rule
        # resolves the bump
        p = make_resolvent_parameter(1e6)
        f = solenoidal_bump((0.5, 0.0), width=0.08)
        out = newtonian_potential(f, disk_grid, p, [[-0.6, 0.0]],
                                  n_theta=96, q_r=8)
        assert np.abs(out[0].velocity).max() < 5e-9

    def test_bad_sample_shape(self, disk_grid):
        p = make_resolvent_parameter(1.0)
        with pytest.raises(ValueError, match="f samples"):
            newtonian_potential(np.zeros((5, 2)), disk_grid, p, [[0.0, 0.0]])


class TestSolenoidalBump:
    def test_divergence_free(self):
        f = solenoidal_bump((0.2, -0.1), width=0.3)
        h = 1e-5
        for x in ([0.25, 0.0], [0.0, 0.1], [0.4, -0.3]):
            x = np.array(x)
            div = ((f([x + [h, 0]])[0, 0] - f([x - [h, 0]])[0, 0])
                   + (f([x + [0, h]])[0, 1] - f([x - [0, h]])[0, 1])) / (2 * h)
            assert abs(div) < 1e-8

    def test_compact_support(self):
        f = solenoidal_bump((0.0, 0.0), width=0.1, cutoff=6.0)
        assert np.all(f([[0.61, 0.0], [0.0, -0.7]]) == 0.0)

    def test_strength_scaling(self):
        f1 = solenoidal_bump(width=0.2, strength=1.0)
        f3 = solenoidal_bump(width=0.2, strength=3.0)
        pts = np.array([[0.1, 0.05]])
        np.testing.assert_allclose(f3(pts), 3.0 * f1(pts), rtol=1e-14)


def pole_data(mesh, p, x0, e):
    from stokes2d.kernels import stokeslet_batch
    return stokeslet_batch(mesh.nodes - x0[None, :], p) @ e


class TestDirichletSolve:
    def test_exterior_pole_reproduced(self):
        # boundary data from an exterior point force is reproduced inside
        p = make_resolvent_parameter(1.0 + 1.0j)
        x0 = np.array([2.0, 0.0])
        e = np.array([1.0, 0.0])
        targets = interior_points(10, radius=0.7, seed=11)
        from stokes2d.kernels import stokeslet_batch
        exact = stokeslet_batch(targets - x0[None, :], p) @ e
        errs = []
        for panels in (16, 32):
            mesh = build_mesh(circle(1.0), panels=panels, nodes_per_panel=8)
            g = pole_data(mesh, p, x0, e)
            sol = solve_dirichlet(DirichletProblem(mesh, p, g))
            uu, _ = field_arrays(sol.evaluator(targets))
            errs.append(np.abs(uu - exact).max())
        assert errs[0] < 1e-8
        assert errs[1] < max(errs[0], 1e-13)
        assert errs[1] < 1e-10

    def test_square_graded_pole(self):
        sq = polygon([[-1, -1], [1, -1], [1, 1], [-1, 1]])
        p = make_resolvent_parameter(2.0 + 1.0j)
        x0 = np.array([3.0, 0.5])
        e = np.array([0.6, 0.8])
        targets = np.array([[0.0, 0.0], [0.3, -0.2], [-0.4, 0.1]])
        from stokes2d.kernels import stokeslet_batch
        exact = stokeslet_batch(targets - x0[None, :], p) @ e
        mesh = build_mesh(sq, panels=32, nodes_per_panel=8,
                          grading_exponent=3.0)
        g = pole_data(mesh, p, x0, e)
        sol = solve_dirichlet(DirichletProblem(mesh, p, g))
        uu, _ = field_arrays(sol.evaluator(targets))
        assert np.abs(uu - exact).max() < 1e-5

    def test_zero_data_gives_zero(self, disk_mesh):
        p = make_resolvent_parameter(3.0 - 1.0j)
        g = np.zeros((disk_mesh.n_nodes, 2), dtype=complex)
        sol = solve_dirichlet(DirichletProblem(disk_mesh, p, g))
        assert np.abs(sol.density).max() == 0.0
        uu, phi = field_arrays(sol.evaluator([[0.2, 0.3]]))
        assert np.abs(uu).max() == 0.0

    def test_incompatible_data_rejected(self, disk_mesh):
        p = make_resolvent_parameter(1.0)
        g = disk_mesh.normals.astype(complex)
        with pytest.raises(ValueError, match="incompatible"):
            solve_dirichlet(DirichletProblem(disk_mesh, p, g))

    def test_compat_tolerance_scales_with_data(self, disk_mesh):
        # a large compatible field plus a relatively tiny flux passes
        p = make_resolvent_parameter(1.0)
        tang = np.stack([-disk_mesh.normals[:, 1],
                         disk_mesh.normals[:, 0]], axis=-1)
        g = 1e4 * tang.astype(complex) + 1e-3 * disk_mesh.normals
        solve_dirichlet(DirichletProblem(disk_mesh, p, g))

    def test_operator_reuse_identical(self, disk_mesh):
        p = make_resolvent_parameter(2.0 + 0.5j)
        rng = np.random.default_rng(4)
        tang = np.stack([-disk_mesh.normals[:, 1],
                         disk_mesh.normals[:, 0]], axis=-1)
        g = tang * (1.0 + 0.3j * rng.standard_normal(
            (disk_mesh.n_nodes, 1)))
        op = make_boundary_operator(disk_mesh, p)
        a = solve_dirichlet(DirichletProblem(disk_mesh, p, g), operator=op)
        b = solve_dirichlet(DirichletProblem(disk_mesh, p, g))
        np.testing.assert_array_equal(a.density, b.density)

    def test_condition_estimate_reported(self, disk_mesh):
        p = make_resolvent_parameter(1.0 + 1.0j)
        g = np.stack([-disk_mesh.normals[:, 1],
                      disk_mesh.normals[:, 0]], axis=-1).astype(complex)
        sol = solve_dirichlet(DirichletProblem(disk_mesh, p, g))
        assert 1.0 < sol.condition_estimate < 1e5
        assert sol.residual < 1e-12

    def test_size_limit(self):
        mesh = build_mesh(circle(1.0), panels=600, nodes_per_panel=8)
        p = make_resolvent_parameter(1.0)
        g = np.zeros((mesh.n_nodes, 2), dtype=complex)
        with pytest.raises(ValueError, match="dense solve limited"):
            solve_dirichlet(DirichletProblem(mesh, p, g))


@pytest.fixture(scope="module")
def bump_solve(disk_mesh, disk_grid):
    p = make_resolvent_parameter(2.0 + 1.0j)
    f = solenoidal_bump((0.1, 0.0), width=0.45)
    return f, p, solve_resolvent(disk_mesh, disk_grid, p, f,
                                 n_theta=48, q_r=8)


class TestResolventSolve:
    def test_boundary_trace_vanishes(self, bump_solve, disk_mesh):
        _, _, sol = bump_solve
        inner_max = np.abs(sol.grid_velocity).max()
        shrink = []
        for d in (0.3, 0.15, 0.075):
            pts = (1.0 - d) * disk_mesh.nodes[::8]
            uu, _ = field_arrays(sol.evaluator(pts))
            shrink.append(np.abs(uu).max())
        assert shrink[2] < shrink[1] < shrink[0]
        # roughly linear vanishing toward the wall
        assert shrink[2] < 0.25 * inner_max
        assert 1.4 < shrink[1] / shrink[2] < 3.5

    def test_momentum_and_divergence(self, bump_solve):
        f, p, sol = bump_solve
        h = 2e-3
        scale = 0.0
        worst_mom, worst_div = 0.0, 0.0
        for x0 in ([0.3, 0.1], [-0.2, -0.4]):
            pts = [np.array(x0)]
            for ax in range(2):
                for k in (-2, -1, 1, 2):
                    q = np.array(x0)
                    q[ax] += k * h
                    pts.append(q)
            uu, phi = field_arrays(sol.evaluator(np.array(pts)))
            lap = np.zeros(2, dtype=complex)
            grad_phi = np.zeros(2, dtype=complex)
            div = 0.0
            for ax, off in ((0, 1), (1, 5)):
                m2, m1, p1, p2 = uu[off], uu[off + 1], uu[off + 2], uu[off + 3]
                lap += (-m2 + 16 * m1 - 30 * uu[0] + 16 * p1 - p2) / (12 * h * h)
                div += ((m2 - 8 * m1 + 8 * p1 - p2) / (12 * h))[ax]
                q2, q1, r1, r2 = phi[off], phi[off + 1], phi[off + 2], phi[off + 3]
                grad_phi[ax] = (q2 - 8 * q1 + 8 * r1 - r2) / (12 * h)
            mom = p.lam * uu[0] - lap + grad_phi - f(np.array([x0]))[0]
            scale = max(scale, float(np.abs(f(np.array([x0]))).max()), 1.0)
            worst_mom = max(worst_mom, float(np.abs(mom).max()))
            worst_div = max(worst_div, abs(div))
        assert worst_mom / scale < 2e-5
        assert worst_div < 2e-5

    def test_pressure_gauge(self, bump_solve, disk_grid):
        _, _, sol = bump_solve
        mean = np.sum(disk_grid.weights * sol.grid_pressure) / disk_grid.area
        assert abs(mean) < 1e-14

    def test_trace_defect_recorded(self, bump_solve):
        _, _, sol = bump_solve
        assert 0.0 <= sol.trace_defect < 1e-8

    def test_array_force_path(self, bump_solve, disk_mesh, disk_grid):
        f, p, sol = bump_solve
        fs = f(disk_grid.points)
        sol2 = solve_resolvent(disk_mesh, disk_grid, p, fs,
                               n_theta=48, q_r=8)
        rel = (np.abs(sol2.grid_velocity - sol.grid_velocity).max()
               / np.abs(sol.grid_velocity).max())
        assert rel < 2e-6

    def test_large_modulus_asymptotics(self, disk_mesh, disk_grid):
        # lam u approaches f pointwise for solenoidal f as |lam| grows.
        # The floor is physical, not quadrature: the force tail is nonzero
        # at the wall, so the domain solution keeps a lam-independent
        # boundary correction of size |f at wall| / |f|max ~ 1e-2.
        lam = 1e6
        p = make_resolvent_parameter(lam)
        f = solenoidal_bump((0.1, 0.0), width=0.45)
        sol = solve_resolvent(disk_mesh, disk_grid, p, f, n_theta=48, q_r=8)
        fg = f(disk_grid.points)
        rel = (np.abs(lam * sol.grid_velocity - fg).max()
               / np.abs(fg).max())
        assert rel < 0.02


class TestResolventIdentity:
    def test_first_resolvent_identity(self):
        # R(l1) f - R(l2) f = (l2 - l1) R(l2) R(l1) f, the composition
        # feeding the stage-1 grid solution back in as array samples
        curve = circle(1.0)
        grid = build_volume_grid(curve, radial=12, angular=36)
        mesh = build_mesh(curve, panels=16, nodes_per_panel=8)
        f = solenoidal_bump((0.1, 0.0), width=0.45)
        lam1, lam2 = 2.0 + 1.0j, 7.0 - 3.0j
        p1 = make_resolvent_parameter(lam1)
        p2 = make_resolvent_parameter(lam2)
        sets = dict(n_theta=48, q_r=8, ell_cap=0.25)
        r1 = solve_resolvent(mesh, grid, p1, f, **sets)
        r2 = solve_resolvent(mesh, grid, p2, f, **sets)
        r21 = solve_resolvent(mesh, grid, p2, r1.grid_velocity, **sets)
        lhs = r1.grid_velocity - r2.grid_velocity
        rhs = (lam2 - lam1) * r21.grid_velocity
        resid = (discrete_norm(lhs - rhs, grid, 2)
                 / discrete_norm(lhs, grid, 2))
        assert resid < 1e-6


class TestResolventSweep:
    def test_smoke_disk(self):
        lam_grid = [1.0, 4.0j, 9.0 * np.exp(0.5j)]
        rep = solver.resolvent_sweep(circle(1.0), np.pi / 4, lam_grid,
                                     panels=16, nodes_per_panel=6,
                                     radial=10, angular=24,
                                     n_theta=24, q_r=6)
        assert len(rep.rows) == len(lam_grid)
        for row in rep.rows:
            assert row["ratio"] > 0 and np.isfinite(row["ratio"])
            assert row["q"] == 2.0
        assert np.isfinite(rep.sup_ratio)
