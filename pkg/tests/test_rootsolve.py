import math

import numpy as np
import pytest

from conftest import assert_multiset_close
from spectralab.errors import DegenerateInput
from spectralab.measures import convex_hull_contains
from spectralab.polycore import RootPoly, derivative_coefficients, expand_coefficients
from spectralab.rootsolve import (
    companion_roots,
    critical_points,
    interlaced_extremes,
    real_interlaced_critical_points,
    solve_all,
)


class TestSolveAll:
    def test_difference_of_squares(self):
        rep = solve_all([-1, 0, 1])
        assert rep.converged
        assert_multiset_close(rep.roots, [-1, 1], 1e-12)

    def test_quadratic_formula(self):
        rep = solve_all([11, -12, 3])
        expected = [2 - 1 / math.sqrt(3), 2 + 1 / math.sqrt(3)]
        assert_multiset_close(rep.roots, expected, 1e-10)

    def test_wilkinson8_derivative_interlaces(self):
        p = RootPoly(np.arange(1.0, 9.0))
        rep = solve_all(derivative_coefficients(p))
        got = np.sort(rep.roots.real)
        assert np.max(np.abs(rep.roots.imag)) < 1e-8
        # independent oracle: LAPACK eigenvalues of the numpy companion matrix
        oracle = np.sort(np.roots(derivative_coefficients(p)[::-1]).real)
        np.testing.assert_allclose(got, oracle, atol=1e-8)
        assert np.all(got > np.arange(1.0, 8.0)) and np.all(got < np.arange(2.0, 9.0))

    def test_degenerate_inputs(self):
        with pytest.raises(DegenerateInput):
            solve_all([1.0])
        with pytest.raises(DegenerateInput):
            solve_all([1.0, 0.0])

    def test_report_serializes(self):
        d = solve_all([-1, 0, 1]).to_json_dict()
        assert set(d) == {"roots", "residuals", "iterations", "converged"}
        assert len(d["roots"]) == 2


class TestCriticalPoints:
    def test_cubic(self):
        rep = critical_points(RootPoly([1, 2, 3]))
        expected = [2 - 1 / math.sqrt(3), 2 + 1 / math.sqrt(3)]
        assert_multiset_close(rep.roots, expected, 1e-10)

    def test_triple_root_multiplicity_rule(self):
        a = 0.5 + 0.25j
        rep = critical_points(RootPoly([a, a, a]))
        assert_multiset_close(rep.roots, [a, a], 1e-3)

    def test_fourth_roots_of_unity(self):
        rep = critical_points(RootPoly([1, 1j, -1, -1j]))
        assert_multiset_close(rep.roots, [0, 0, 0], 1e-3)

    def test_degree_below_two_refused(self):
        with pytest.raises(DegenerateInput):
            critical_points(RootPoly([1.0]))

    def test_large_degree_root_based_path(self, rng):
        n = 300
        roots = np.exp(2j * np.pi * rng.random(n))
        rep = critical_points(RootPoly(roots))
        assert rep.converged
        s1 = np.abs((1.0 / (rep.roots[:, None] - roots[None, :])).sum(axis=1))
        assert s1.max() < 1e-6
        # all inside the closed unit disk, as the hull demands
        assert np.abs(rep.roots).max() <= 1.0 + 1e-9


class TestRealInterlaced:
    def test_cubic(self):
        got = real_interlaced_critical_points([1.0, 2.0, 3.0])
        np.testing.assert_allclose(got, [2 - 1 / math.sqrt(3), 2 + 1 / math.sqrt(3)],
                                   atol=1e-12)

    def test_double_root_at_zero(self):
        got = real_interlaced_critical_points([0.0, 0.0, 1.0])
        np.testing.assert_allclose(got, [0.0, 2.0 / 3.0], atol=1e-12)

    def test_symmetric_pair(self):
        np.testing.assert_allclose(real_interlaced_critical_points([-1.0, 1.0]), [0.0],
                                   atol=1e-15)

    def test_requires_sorted(self):
        with pytest.raises(DegenerateInput):
            real_interlaced_critical_points([2.0, 1.0])

    def test_agrees_with_general_solver(self, rng):
        for _ in range(25):
            n = int(rng.integers(3, 25))
            x = np.sort(rng.normal(size=n) * 2)
            fast = real_interlaced_critical_points(x)
            general = np.sort(critical_points(RootPoly(x)).roots.real)
            np.testing.assert_allclose(fast, general, atol=1e-10)

    def test_extremes_match_full_computation(self, rng):
        x = np.sort(rng.exponential(size=40))
        full = real_interlaced_critical_points(x)
        lo, hi = interlaced_extremes(x)
        assert lo == pytest.approx(full[0], abs=1e-13)
        assert hi == pytest.approx(full[-1], abs=1e-13)


class TestInvariants:
    def test_gauss_lucas_sample(self, rng):
        for _ in range(50):
            n = int(rng.integers(3, 41))
            roots = rng.normal(size=n) + 1j * rng.normal(size=n)
            crit = critical_points(RootPoly(roots)).roots
            inside = convex_hull_contains(roots, crit, 1e-9)
            assert np.all(inside)

    def test_interlacing_is_exact(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 40))
            x = np.sort(rng.normal(size=n) * 3)
            eta = real_interlaced_critical_points(x)
            assert np.all(x[:-1] <= eta) and np.all(eta <= x[1:])

    def test_vieta_mean_identity(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 41))
            roots = rng.normal(size=n) + 1j * rng.normal(size=n)
            crit = critical_points(RootPoly(roots)).roots
            lhs = crit.sum()
            rhs = (n - 1) / n * roots.sum()
            assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))

    def test_aberth_companion_path_agreement(self, rng):
        for _ in range(25):
            n = int(rng.integers(2, 31))
            roots = rng.normal(size=n) + 1j * rng.normal(size=n)
            coeffs = expand_coefficients(RootPoly(roots))
            aberth = solve_all(coeffs).roots
            comp = companion_roots(coeffs)
            assert_multiset_close(aberth, comp, 1e-8)
