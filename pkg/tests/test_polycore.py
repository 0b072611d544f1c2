import json
import math

import numpy as np
import pytest

from spectralab.errors import NearPole, SizeMismatch, ZeroDegree
from spectralab.polycore import (
    RootPoly,
    WeightedLogDeriv,
    canonical_order,
    cloud_to_csv,
    cloud_to_json,
    derivative_coefficients,
    eval_log_deriv,
    evaluate,
    expand_coefficients,
    log_abs_log_deriv,
)


def horner(coeffs, z):
    out = 0.0 + 0.0j
    for c in coeffs[::-1]:
        out = out * z + c
    return out


def horner_magnitude(coeffs, z):
    # the natural error scale of Horner evaluation: sum |c_k| |z|^k
    out = 0.0
    for c in coeffs[::-1]:
        out = out * abs(z) + abs(c)
    return out


class TestExpand:
    def test_difference_of_squares(self):
        np.testing.assert_allclose(expand_coefficients(RootPoly([1, -1])), [-1, 0, 1])

    def test_empty_product(self):
        np.testing.assert_allclose(expand_coefficients(RootPoly([])), [1])

    def test_cubic_hand_expansion(self):
        np.testing.assert_allclose(expand_coefficients(RootPoly([1, 2, 3])),
                                   [-6, 11, -6, 1])

    def test_leading_scales_all(self):
        np.testing.assert_allclose(expand_coefficients(RootPoly([1, -1], leading=3.0)),
                                   [-3, 0, 3])


class TestEvaluate:
    def test_simple(self):
        assert evaluate(RootPoly([1, -1]), 2.0) == pytest.approx(3.0)

    def test_root_hit(self):
        assert evaluate(RootPoly([0]), 0.0) == 0.0

    def test_matches_constant_term(self):
        p = RootPoly([1, 2, 3])
        assert evaluate(p, 0.0) == pytest.approx(expand_coefficients(p)[0])


class TestDerivativeCoefficients:
    def test_cubic(self):
        np.testing.assert_allclose(derivative_coefficients(RootPoly([1, 2, 3])),
                                   [11, -12, 3])

    def test_double_root(self):
        a = 0.7
        np.testing.assert_allclose(derivative_coefficients(RootPoly([a, a])),
                                   [-2 * a, 2])

    def test_symmetric_pair(self):
        np.testing.assert_allclose(derivative_coefficients(RootPoly([1, -1])), [0, 2])

    def test_degree_zero_refused(self):
        with pytest.raises(ZeroDegree):
            derivative_coefficients(RootPoly([]))


class TestLogDeriv:
    def test_two_poles(self):
        w = WeightedLogDeriv([1, -1])
        assert eval_log_deriv(w, 2.0) == pytest.approx(4.0 / 3.0, rel=1e-14)

    def test_single_pole(self):
        assert eval_log_deriv(WeightedLogDeriv([0]), 2.0) == pytest.approx(0.5)

    def test_matches_coefficient_ratio(self):
        p = RootPoly([1, 2, 3])
        w = WeightedLogDeriv.from_rootpoly(p)
        val = eval_log_deriv(w, 0.0)
        assert val == pytest.approx(-11.0 / 6.0, rel=1e-14)
        ratio = horner(derivative_coefficients(p), 0.0) / horner(expand_coefficients(p), 0.0)
        assert val == pytest.approx(ratio, rel=1e-12)

    def test_near_pole_refused(self):
        with pytest.raises(NearPole):
            eval_log_deriv(WeightedLogDeriv([1.0]), 1.0 + 1e-14)

    def test_weight_length_checked(self):
        with pytest.raises(SizeMismatch):
            WeightedLogDeriv([1, 2], [1.0])


class TestLogAbsLogDeriv:
    def test_single_pole_at_e(self):
        assert log_abs_log_deriv(WeightedLogDeriv([0]), math.e) == pytest.approx(-1.0)

    def test_matches_plain_eval(self):
        w = WeightedLogDeriv([1, -1])
        assert log_abs_log_deriv(w, 2.0) == pytest.approx(math.log(4.0 / 3.0))

    def test_symmetric_pair_on_axis(self):
        # 1/(z-i) + 1/(z+i) = 2z/(z^2+1); at z=1 this is 1, so the log is 0
        w = WeightedLogDeriv([1j, -1j])
        assert log_abs_log_deriv(w, 1.0) == pytest.approx(0.0, abs=1e-14)

    def test_exact_cancellation_flags_neg_infinity(self):
        w = WeightedLogDeriv([1j, -1j])
        assert log_abs_log_deriv(w, 0.0) == float("-inf")

    def test_large_n_no_overflow(self):
        n = 10 ** 6
        roots = np.linspace(1.0, 2.0, n)
        w = WeightedLogDeriv(roots)
        val = log_abs_log_deriv(w, 0.0)
        # sum of n terms each in [-1, -1/2]: log of about 0.69n
        assert math.isfinite(val)
        assert val == pytest.approx(math.log(np.abs(np.sum(1.0 / (0.0 - roots)))), rel=1e-9)


class TestInvariants:
    def test_coefficient_eval_consistency(self, rng):
        for _ in range(20):
            deg = int(rng.integers(1, 51))
            roots = (rng.uniform(-10, 10, deg) + 1j * rng.uniform(-10, 10, deg))
            p = RootPoly(roots, leading=complex(rng.normal(), rng.normal()))
            coeffs = expand_coefficients(p)
            for z in rng.uniform(-20, 20, 5) + 1j * rng.uniform(-20, 20, 5):
                direct = evaluate(p, z)
                via_coeffs = horner(coeffs, z)
                assert abs(direct - via_coeffs) <= 1e-9 * horner_magnitude(coeffs, z)

    def test_derivative_identity_central_difference(self, rng):
        for _ in range(20):
            deg = int(rng.integers(1, 15))
            roots = rng.normal(size=deg) + 1j * rng.normal(size=deg)
            p = RootPoly(roots)
            dc = derivative_coefficients(p)
            z = complex(rng.normal() + 3.0, rng.normal() + 3.0)
            h = 1e-6 * max(1.0, abs(z))
            fd = (evaluate(p, z + h) - evaluate(p, z - h)) / (2 * h)
            assert horner(dc, z) == pytest.approx(fd, rel=1e-4)

    def test_log_deriv_identity_away_from_roots(self, rng):
        for _ in range(20):
            deg = int(rng.integers(2, 30))
            roots = rng.normal(size=deg) + 1j * rng.normal(size=deg)
            p = RootPoly(roots)
            w = WeightedLogDeriv.from_rootpoly(p)
            z = complex(5.0 + rng.uniform(0, 2), 5.0 + rng.uniform(0, 2))
            if np.min(np.abs(z - np.asarray(roots))) < 0.1:
                continue
            lhs = eval_log_deriv(w, z)
            rhs = horner(derivative_coefficients(p), z) / horner(expand_coefficients(p), z)
            assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_conjugation_symmetry(self, rng):
        for _ in range(20):
            roots = rng.normal(size=8)
            w = WeightedLogDeriv.from_rootpoly(RootPoly(roots))
            z = float(rng.normal() * 3 + 10)
            val = eval_log_deriv(w, z)
            assert abs(val.imag) <= 1e-12 * abs(val)


class TestSerialization:
    def test_canonical_order_is_lexicographic(self):
        pts = [1 + 1j, -1 + 0j, 1 - 1j, 0 + 0j]
        ordered = canonical_order(pts)
        np.testing.assert_allclose(ordered, [-1, 0, 1 - 1j, 1 + 1j])

    def test_csv_rows(self):
        text = cloud_to_csv([1 + 2j, -1.5])
        assert text.splitlines() == ["-1.5,0.0", "1.0,2.0"]

    def test_json_round_trip(self):
        data = json.loads(cloud_to_json([1 + 2j, 0]))
        assert data == [[0.0, 0.0], [1.0, 2.0]]
