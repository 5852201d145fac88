import math

import numpy as np
import pytest

from quadmap.core import DomainError
from quadmap.dynamics import A_STAR, GENERAL_CYCLE_ANGLES, SQUARE, c_map
from quadmap.solvers import (
    ChartPoint,
    BoundaryTooCloseError,
    NoSignChangeError,
    bisect,
    chart_step2,
    cycle_system_rhs,
    eigenvalue_moduli_3x3,
    fd_jacobian,
    newton_1d,
    solve_cycle_system,
    solve_trapezoid_fixed_point,
    stability_report,
)

PI = math.pi
PAPER_CYCLE = (
    1.54819305248669225152933985324,
    1.82405188512759300508614890573,
    1.41515953031350909799654144250,
    1.49578083925179212231325656509,
)


class TestBisect:
    def test_linear(self):
        r = bisect(lambda x: x - 1.0, 0.0, 2.0, tol=1e-13)
        assert r.converged
        assert r.solution == pytest.approx(1.0, abs=1e-12)

    def test_trapezoid_root(self):
        r = bisect(lambda a: c_map(a) - a, 1.4, 1.5, tol=1e-13)
        assert abs(r.solution - A_STAR) < 1e-12

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            bisect(lambda a: c_map(a) - a, 0.1, 1.4)

    def test_bad_bracket(self):
        with pytest.raises(DomainError):
            bisect(lambda x: x, 2.0, 1.0)


class TestNewton1d:
    def test_sqrt_two(self):
        r = newton_1d(lambda x: x * x - 2.0, 1.5, tol=1e-14)
        assert r.converged
        assert r.solution == pytest.approx(math.sqrt(2.0), abs=1e-14)

    def test_agrees_with_bisection(self):
        r = newton_1d(lambda a: c_map(a) - a, 1.48, tol=1e-13)
        b = bisect(lambda a: c_map(a) - a, 1.4, 1.5, tol=1e-13)
        assert abs(r.solution - b.solution) < 1e-12

    def test_degenerate_root_at_start(self):
        # x^3 from x0 = 0: already at the root, reported as converged
        r = newton_1d(lambda x: x ** 3, 0.0, tol=1e-13)
        assert r.converged
        assert r.solution == 0.0


class TestTrapezoidFixedPoint:
    def test_matches_paper_digits(self):
        fp = solve_trapezoid_fixed_point(tol=1e-13)
        assert abs(fp.attracting.solution - 1.48342158769377952440379165224) <= 1e-12
        assert fp.repelling == PI / 2

    def test_slope_near_point_eight(self):
        fp = solve_trapezoid_fixed_point(tol=1e-13)
        a, h = fp.attracting.solution, 1e-6
        slope = (c_map(a + h) - c_map(a - h)) / (2 * h)
        assert 0.75 <= slope <= 0.85

    def test_tol_guard(self):
        with pytest.raises(DomainError):
            solve_trapezoid_fixed_point(tol=1e-16)


class TestCycleSystem:
    def test_default_start_reaches_paper_values(self):
        r = solve_cycle_system(tol=1e-12)
        assert r.converged
        got = (r.solution.alpha, r.solution.beta, r.solution.gamma, r.solution.delta)
        for g, p in zip(got, PAPER_CYCLE):
            assert abs(g - p) < 1e-12

    def test_paper_values_near_root(self):
        p = ChartPoint(PAPER_CYCLE[0], PAPER_CYCLE[2], PAPER_CYCLE[3])
        res = cycle_system_rhs(p).as_array() - p.as_array()
        assert np.max(np.abs(res)) < 1e-9

    def test_explicit_initial(self):
        r = solve_cycle_system(initial=ChartPoint(1.5, 1.4, 1.5), tol=1e-12)
        assert r.converged
        assert abs(r.solution.alpha - PAPER_CYCLE[0]) < 1e-10

    def test_solution_is_period_two_point(self):
        from quadmap.dynamics import rotation_distance, step
        from quadmap.core import reflect_labels_angles

        q = solve_cycle_system(tol=1e-12).solution.as_angles()
        assert max(abs(a - b) for a, b in zip(
            step(q).as_tuple(), reflect_labels_angles(q).as_tuple())) < 1e-10
        assert rotation_distance(step(step(q)), q) < 1e-10


class TestFdJacobian:
    def test_identity_map(self):
        p = ChartPoint.from_angles(GENERAL_CYCLE_ANGLES)
        jac = fd_jacobian(lambda x: x, p)
        assert np.max(np.abs(jac - np.eye(3))) < 1e-10

    def test_double_step_contracts_at_cycle(self):
        p = ChartPoint.from_angles(GENERAL_CYCLE_ANGLES)
        jac = fd_jacobian(chart_step2, p)
        assert max(eigenvalue_moduli_3x3(jac)) < 1.0

    def test_relation_derivative_exceeds_one(self):
        p = ChartPoint.from_angles(GENERAL_CYCLE_ANGLES)
        jac = fd_jacobian(cycle_system_rhs, p)
        assert np.max(np.abs(jac)) > 1.0

    def test_boundary_guard(self):
        p = ChartPoint(1e-7, 2.0, 2.0)
        with pytest.raises(BoundaryTooCloseError):
            fd_jacobian(lambda x: x, p, h=1e-6)

    def test_h_guard(self):
        p = ChartPoint.from_angles(GENERAL_CYCLE_ANGLES)
        with pytest.raises(DomainError):
            fd_jacobian(lambda x: x, p, h=1e-3)


class TestEigenvalueModuli:
    def test_identity(self):
        assert eigenvalue_moduli_3x3(np.eye(3)) == pytest.approx((1.0, 1.0, 1.0))

    def test_diagonal(self):
        m = np.diag([2.0, -0.5, 0.25])
        assert eigenvalue_moduli_3x3(m) == pytest.approx((2.0, 0.5, 0.25))

    def test_rotation_scale_block(self):
        theta, s = 0.7, -1.8
        m = np.zeros((3, 3))
        m[:2, :2] = [[math.cos(theta), -math.sin(theta)],
                     [math.sin(theta), math.cos(theta)]]
        m[2, 2] = s
        assert eigenvalue_moduli_3x3(m) == pytest.approx(
            (abs(s), 1.0, 1.0), abs=1e-10)

    def test_against_qr_oracle(self, rng):
        worst = 0.0
        for _ in range(1000):
            m = rng.uniform(-1.0, 1.0, (3, 3))
            mine = np.array(eigenvalue_moduli_3x3(m))
            ref = np.sort(np.abs(np.linalg.eigvals(m)))[::-1]
            worst = max(worst, float(np.max(np.abs(mine - ref))))
        assert worst < 1e-8


class TestStabilityReport:
    def test_square_repelling(self):
        rep = stability_report(SQUARE, map_order=1)
        assert rep.spectral_radius > 1.0
        assert rep.map_order == 1

    def test_cycle_attracting(self):
        rep = stability_report(GENERAL_CYCLE_ANGLES, map_order=2)
        assert rep.spectral_radius < 1.0
        assert rep.eigenvalue_moduli[0] == rep.spectral_radius

    def test_h_robustness(self):
        r5 = stability_report(GENERAL_CYCLE_ANGLES, 2, h=1e-5).spectral_radius
        r6 = stability_report(GENERAL_CYCLE_ANGLES, 2, h=1e-6).spectral_radius
        assert abs(r5 - r6) / r6 < 1e-4

    def test_map_order_guard(self):
        with pytest.raises(DomainError):
            stability_report(SQUARE, map_order=3)

    def test_trapezoid_cycle_spectrum(self):
        # the double step returns to a rotate-by-1 relabeling of the
        # trapezoid state; composing with that relabeling gives the honest
        # cycle linearization, whose in-family multiplier is c'(a*)
        from quadmap.dynamics import trapezoid_cycle_pair

        t1, _ = trapezoid_cycle_pair()
        rep = stability_report(t1, map_order=2)
        assert all(np.isfinite(rep.eigenvalue_moduli))
        jac = np.array(rep.jacobian)
        rot1 = np.array([[-1.0, -1.0, -1.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        eig = np.sort(np.abs(np.linalg.eigvals(rot1 @ jac)))
        h = 1e-6
        slope = (c_map(A_STAR + h) - c_map(A_STAR - h)) / (2 * h)
        assert eig[1] == pytest.approx(slope, abs=1e-4)
        # transverse pair: one strongly contracting, one mildly expanding
        assert eig[0] < 1e-4
        assert eig[2] > 1.0

    def test_square_jacobian_rotation_symmetry(self):
        # the map commutes with the rotation relabelings that fix the
        # square; canonicalization tie-breaks put a derivative kink at the
        # square, so the finite-difference commutator is O(h) rather than
        # machine precision
        p = ChartPoint.from_angles(SQUARE)
        from quadmap.solvers import chart_step

        jac = fd_jacobian(chart_step, p, h=1e-8)
        rot2 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [-1.0, -1.0, -1.0]])
        assert np.max(np.abs(jac @ rot2 - rot2 @ jac)) < 5e-8
