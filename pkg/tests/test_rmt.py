import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import assert_multiset_close
from spectralab.errors import DegenerateSpectrum, WrongSize, ZeroPoint
from spectralab.randgen import RngStream, bernoulli_entries, gaussian_entries
from spectralab.rmt import (
    cross_term,
    discriminant_2x2,
    eigenvalues,
    generalized_schur,
    ginibre_intensity,
    ginibre_kernel,
    power_intensity,
    power_spectrum_sample,
    real_eig_probability,
    sample_ginibre,
    sample_product_ensemble,
    spherical_intensity,
    spherical_weight,
)
from spectralab.rootsolve import solve_all


class TestEigenvalues:
    def test_diagonal(self):
        s = eigenvalues(np.diag([1.0, 2.0j]))
        assert_multiset_close(s.eigenvalues, [1.0, 2.0j], 1e-14)
        assert s.residual <= 1e-12

    def test_swap_matrix(self):
        s = eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert_multiset_close(s.eigenvalues, [-1.0, 1.0], 1e-14)

    def test_companion_matches_rootsolve(self):
        coeffs = np.array([-6.0, 11.0, -6.0, 1.0])
        comp = np.zeros((3, 3), dtype=complex)
        comp[1:, :-1] = np.eye(2)
        comp[:, -1] = -coeffs[:-1]
        got = eigenvalues(comp).eigenvalues
        assert_multiset_close(got, solve_all(coeffs).roots, 1e-8)

    def test_similarity_invariance(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 33))
            a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
            s1 = eigenvalues(a).eigenvalues
            s2 = eigenvalues(q @ a @ q.conj().T).eigenvalues
            assert_multiset_close(s1, s2, 1e-8)

    def test_rejects_non_square(self):
        with pytest.raises(WrongSize):
            eigenvalues(np.ones((2, 3)))


class TestGinibreSampling:
    def test_spectral_radius_scaling(self):
        g = RngStream(101).generator()
        radii = []
        n = 64
        for _ in range(50):
            radii.append(np.abs(eigenvalues(sample_ginibre(g, n, 1.0)).eigenvalues).max())
        med = np.median(radii)
        assert 0.9 * math.sqrt(n) <= med <= 1.15 * math.sqrt(n)

    def test_unit_disk_fill_at_scaled_variance(self):
        g = RngStream(102).generator()
        n = 128
        fracs = []
        for _ in range(20):
            lam = eigenvalues(sample_ginibre(g, n, 1.0 / n)).eigenvalues
            fracs.append(np.mean(np.abs(lam) <= 1.05))
        assert np.mean(fracs) >= 0.98

    def test_deterministic_under_fixed_seed(self):
        a = sample_ginibre(RngStream(7, 3), 5, 1.0)
        b = sample_ginibre(RngStream(7, 3), 5, 1.0)
        assert np.array_equal(a, b)


class TestKernelIntensity:
    def test_kernel_at_origin(self):
        for n in (1, 5, 50):
            assert ginibre_kernel(n, 0.0, 0.0) == 1.0

    def test_intensity_at_origin(self):
        assert ginibre_intensity(10, 0.0) == pytest.approx(1.0 / math.pi, rel=1e-14)

    def test_intensity_matches_reference_density_n1(self, rng):
        for _ in range(10):
            z = complex(rng.normal(), rng.normal())
            assert ginibre_intensity(1, z) == pytest.approx(
                math.exp(-abs(z) ** 2) / math.pi, rel=1e-12)

    def test_interior_limit(self):
        assert ginibre_intensity(64, 2.0) == pytest.approx(1.0 / math.pi, abs=1e-6)

    def test_kernel_consistency_with_intensity(self, rng):
        for _ in range(10):
            n = int(rng.integers(1, 40))
            z = complex(rng.normal(), rng.normal())
            via_kernel = ginibre_kernel(n, z, z).real * math.exp(-abs(z) ** 2) / math.pi
            assert ginibre_intensity(n, z) == pytest.approx(via_kernel, rel=1e-10)

    def test_nonnegative_everywhere_sampled(self, rng):
        for _ in range(200):
            z = complex(rng.normal() * 3, rng.normal() * 3)
            assert ginibre_intensity(int(rng.integers(1, 64)), z) >= 0.0


class TestPowerIntensity:
    def test_single_matrix(self):
        assert power_intensity(1, 1.0) == pytest.approx(math.exp(-1) / math.pi, rel=1e-12)

    def test_median_limit(self):
        assert power_intensity(400, 1.0) == pytest.approx(1.0 / (2 * math.pi), rel=0.03)

    def test_limit_profile(self):
        worst = max(abs(power_intensity(1000, r) * 2 * math.pi * r * r - 1.0)
                    for r in (0.5, 1.0, 2.0))
        assert worst <= 0.10

    def test_origin_refused(self):
        with pytest.raises(ZeroPoint):
            power_intensity(5, 0.0)


class TestPowerSpectrum:
    def test_annulus_count_against_exact_intensity(self):
        # expected count in 1 <= |mu| <= e is the integral of the exact
        # finite-n intensity; the MC mean must agree within sampling error
        n, trials = 64, 400
        g = RngStream(103).generator()
        counts = []
        for _ in range(trials):
            mu = power_spectrum_sample(g, n).eigenvalues
            counts.append(np.sum((np.abs(mu) >= 1.0) & (np.abs(mu) <= math.e)))
        from scipy.special import gammaincc
        expected, _ = quad(lambda w: gammaincc(n, w), n, n * math.exp(2.0 / n))
        mean = float(np.mean(counts))
        stderr = float(np.std(counts, ddof=1) / math.sqrt(trials))
        assert abs(mean - expected) <= 4.0 * stderr

    def test_disjoint_annuli_nearly_uncorrelated(self):
        n, trials = 64, 800
        g = RngStream(104).generator()
        c1, c2 = [], []
        for _ in range(trials):
            r = np.abs(power_spectrum_sample(g, n).eigenvalues)
            c1.append(np.sum((r >= 1.0) & (r <= math.e)))
            c2.append(np.sum((r > math.e) & (r <= math.e ** 2)))
        rho = np.corrcoef(c1, c2)[0, 1]
        assert abs(rho) <= 0.1


class TestCrossTerm:
    def test_single_term(self):
        assert cross_term(1, 1.0, 1.0) == pytest.approx(
            math.exp(-2) / math.pi ** 2, rel=1e-12)

    def test_monotone_decay(self):
        vals = [cross_term(n, 1.0, 1.0) for n in (1, 4, 16, 64, 256)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_small_against_intensity_product(self):
        # the ratio decays like n^{-1/2}: direct evaluation gives 7.6% at
        # n=64 and 3.7% at n=256
        prod64 = power_intensity(64, 1.0) * power_intensity(64, 2.0)
        assert cross_term(64, 1.0, 2.0) <= 0.10 * prod64
        prod256 = power_intensity(256, 1.0) * power_intensity(256, 2.0)
        assert cross_term(256, 1.0, 2.0) <= 0.05 * prod256

    def test_origin_refused(self):
        with pytest.raises(ZeroPoint):
            cross_term(4, 0.0, 1.0)


class TestGeneralizedSchur:
    def test_k1_is_plain_schur(self, rng):
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        ch = generalized_schur([a])
        assert ch.k == 1
        assert np.linalg.norm(np.tril(ch.uppers[0], 0)) == 0.0
        assert_multiset_close(ch.diagonals[0], eigenvalues(a).eigenvalues, 1e-8)
        rec = ch.reconstruct(0)
        assert np.linalg.norm(rec - a) <= 1e-9 * np.linalg.norm(a)

    def test_diagonal_chain(self):
        d1 = np.diag([1.0 + 0j, 2.0, 3.0])
        d2 = np.diag([5.0 + 0j, 7.0, 11.0])
        ch = generalized_schur([d1, d2])
        for ell in range(2):
            assert np.linalg.norm(ch.uppers[ell]) <= 1e-12
            rec = ch.reconstruct(ell)
            assert np.linalg.norm(rec - [d1, d2][ell]) <= 1e-10
        assert_multiset_close(ch.product_eigenvalues(), [5.0, 14.0, 33.0], 1e-10)

    def test_two_ginibre_factors(self):
        g = RngStream(105).generator()
        mats = [sample_ginibre(g, 6, 1.0) for _ in range(2)]
        ch = generalized_schur(mats)
        for ell in range(2):
            err = np.linalg.norm(ch.reconstruct(ell) - mats[ell])
            assert err <= 1e-9 * np.linalg.norm(mats[ell])
        prod_eig = eigenvalues(mats[0] @ mats[1]).eigenvalues
        assert_multiset_close(ch.product_eigenvalues(), prod_eig, 1e-8)

    def test_chain_invariants_random(self):
        g = RngStream(106).generator()
        for _ in range(30):
            k = int(g.integers(1, 5))
            n = int(g.integers(2, 11))
            mats = [sample_ginibre(g, n, 1.0) for _ in range(k)]
            ch = generalized_schur(mats)
            for ell in range(k):
                u = ch.unitaries[ell]
                assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-10 * n
                assert np.linalg.norm(np.tril(ch.uppers[ell], 0)) == 0.0
                err = np.linalg.norm(ch.reconstruct(ell) - mats[ell])
                assert err <= 1e-9 * np.linalg.norm(mats[ell])
            prod = mats[0]
            for m in mats[1:]:
                prod = prod @ m
            assert_multiset_close(ch.product_eigenvalues(),
                                  eigenvalues(prod).eigenvalues, 1e-8)

    def test_degenerate_spectrum_refused(self):
        with pytest.raises(DegenerateSpectrum):
            generalized_schur([np.diag([1.0 + 0j, 1.0, 2.0])])


class TestProductEnsemble:
    def test_plain_ginibre_moduli_second_moment(self):
        # E sum |lambda|^2 = n(n+1)/2 for standard entries; quadrature oracle
        n = 16
        g = RngStream(107).generator()
        vals = [np.sum(np.abs(sample_product_ensemble(g, n, (1,)).eigenvalues) ** 2)
                for _ in range(300)]
        target, _ = quad(
            lambda r: ginibre_intensity(n, r) * r ** 2 * 2 * math.pi * r, 0, 3 * math.sqrt(n))
        assert target == pytest.approx(n * (n + 1) / 2, rel=1e-6)
        stderr = np.std(vals, ddof=1) / math.sqrt(len(vals))
        assert abs(np.mean(vals) - target) <= 4 * stderr

    def test_spherical_unit_disk_count(self):
        n = 32
        g = RngStream(108).generator()
        counts = [np.sum(np.abs(sample_product_ensemble(g, n, (-1, 1)).eigenvalues) <= 1.0)
                  for _ in range(100)]
        assert np.mean(counts) == pytest.approx(n / 2, abs=0.6)

    def test_pattern_only_matters_through_sum(self):
        from spectralab.measures import ks_two_sample
        n, trials = 16, 120
        g = RngStream(109).generator()
        ra, rb = [], []
        for _ in range(trials):
            ra.append(np.abs(sample_product_ensemble(g, n, (-1, 1, 1)).eigenvalues))
            rb.append(np.abs(sample_product_ensemble(g, n, (1, 1, -1)).eigenvalues))
        assert ks_two_sample(np.concatenate(ra), np.concatenate(rb)) < 0.08

    def test_bad_pattern_refused(self):
        with pytest.raises(WrongSize):
            sample_product_ensemble(RngStream(1), 4, (2,))


class TestSpherical:
    def test_intensity_at_origin(self):
        assert spherical_intensity(0.0, 9) == pytest.approx(9 / math.pi, rel=1e-14)

    def test_intensity_integrates_to_n(self):
        n = 13
        val, _ = quad(lambda r: spherical_intensity(r, n) * 2 * math.pi * r, 0, np.inf)
        assert val == pytest.approx(n, rel=1e-6)

    def test_weight_ratio(self):
        n = 7
        assert spherical_weight(0.0, n) / spherical_weight(1.0, n) == pytest.approx(2 ** (n + 1))


class TestRealEigenvalues:
    def test_single_gaussian_matrix(self):
        est = real_eig_probability(RngStream(110), 2, 1, gaussian_entries, 10 ** 4)
        assert 0.69 <= est.p_hat <= 0.72

    def test_exchangeable_half_bound(self):
        for nf in (1, 3):
            est = real_eig_probability(RngStream(111 + nf), 2, nf, gaussian_entries, 4000)
            assert est.p_hat >= 0.5 - 3.0 * est.stderr

    def test_atomic_entries_rank_one_bound(self):
        q = 0.5
        nf = 6
        est = real_eig_probability(RngStream(115), 2, nf, bernoulli_entries(q), 4000)
        bound = 1.0 - (1.0 - q ** 4) ** nf
        assert est.p_hat >= bound - 3.0 * est.stderr


class TestDiscriminant:
    def test_swap(self):
        assert discriminant_2x2([[0, 1], [1, 0]]) == 4.0

    def test_rotation(self):
        assert discriminant_2x2([[0, -1], [1, 0]]) == -4.0

    def test_paired_discriminants_sum_nonnegative(self, rng):
        # disc(M) + disc(row-swapped M) telescopes to (a+d)^2 + (b+c)^2
        for _ in range(200):
            a, b, c, d = rng.normal(size=4)
            swapped = [[c, d], [a, b]]
            total = discriminant_2x2([[a, b], [c, d]]) + discriminant_2x2(swapped)
            assert total == pytest.approx((a + d) ** 2 + (b + c) ** 2, rel=1e-9)
            assert total >= -1e-12

    def test_wrong_size(self):
        with pytest.raises(WrongSize):
            discriminant_2x2(np.eye(3))


class TestRepulsion:
    def test_nearest_neighbour_spacings_avoid_zero(self):
        n, trials = 128, 200
        g = RngStream(116).generator()
        close_fraction = []
        for _ in range(trials):
            lam = eigenvalues(sample_ginibre(g, n, 1.0 / n)).eigenvalues
            d = np.abs(lam[:, None] - lam[None, :])
            np.fill_diagonal(d, np.inf)
            nn = d.min(axis=1)
            close_fraction.append(np.mean(nn < 0.1 * nn.mean()))
        assert np.mean(close_fraction) <= 0.02
