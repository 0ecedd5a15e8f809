"""Spectral initialization and the initial-distance estimate."""

import numpy as np
import pytest

from robustreg.datagen import (DesignSpec, LowRankTruth, NoiseSpec,
                               gen_lowrank_problem)
from robustreg.problem import MatrixProblem
from robustreg.spectral import estimate_init_distance, spectral_init


def gaussian_problem(seed, d=20, r=2, n=4000, sigma_r=5.0):
    truth = LowRankTruth(d, d, r, kappa=1.0, sigma_r=sigma_r)
    return gen_lowrank_problem(truth, DesignSpec(), NoiseSpec("none"),
                               n=n, seed=seed)


class TestSpectralInit:
    def test_zero_responses_give_zero_factors(self, rng):
        prob = MatrixProblem(rng.normal(size=(10, 4, 4)), np.zeros(10))
        f = spectral_init(prob, r=2)
        np.testing.assert_array_equal(f.s, np.zeros(2))
        np.testing.assert_array_equal(f.reconstruct(), np.zeros((4, 4)))

    def test_standard_basis_measurements_match_moment_oracle(self, rng):
        # measurements = all 3x3 standard basis matrices; the moment sum
        # is then M*/9 entry by entry
        meas = np.zeros((9, 3, 3))
        for k in range(9):
            meas[k, k // 3, k % 3] = 1.0
        m_star = rng.normal(size=(3, 3))
        y = meas.reshape(9, -1) @ m_star.ravel()
        prob = MatrixProblem(meas, y)

        moment = np.zeros((3, 3))
        for k in range(9):
            moment += y[k] * meas[k]
        moment /= 9.0
        np.testing.assert_allclose(moment, m_star / 9.0, atol=1e-14)

        f = spectral_init(prob, r=3)
        np.testing.assert_allclose(f.reconstruct(), m_star / 9.0, atol=1e-12)

    def test_monte_carlo_initialization_accuracy(self):
        hits = 0
        for seed in range(30):
            prob = gaussian_problem(seed)
            f = spectral_init(prob, r=2)
            err = np.linalg.norm(f.reconstruct() - prob.truth)
            if err / 5.0 <= 0.5:  # sigma_r = 5
                hits += 1
        assert hits >= 27

    def test_moment_matrix_unbiasedness_improves_with_n(self):
        errors = {}
        for n in (1000, 10_000):
            acc = np.zeros((6, 6))
            truth = None
            for seed in range(20):
                prob = gaussian_problem(seed, d=6, r=2, n=n, sigma_r=3.0)
                truth = prob.truth
                acc += np.tensordot(prob.responses, prob.measurements,
                                    axes=(0, 0)) / prob.n
            errors[n] = np.max(np.abs(acc / 20 - truth))
        assert errors[10_000] < errors[1000]

    def test_right_orthogonal_equivariance(self, rng):
        prob = gaussian_problem(4, d=8, r=2, n=500)
        q, _ = np.linalg.qr(rng.normal(size=(8, 8)))
        rotated = MatrixProblem(prob.measurements @ q, prob.responses,
                                prob.truth @ q)
        f = spectral_init(prob, r=2)
        f_rot = spectral_init(rotated, r=2)
        np.testing.assert_allclose(f_rot.reconstruct(),
                                   f.reconstruct() @ q, atol=1e-10)

    def test_diagonal_covariance_unbiases_moment(self, rng):
        # all variances 4: without the covariance weights the moment sum
        # estimates 4 M*
        d, n = 6, 60_000
        diag = np.full(d * d, 4.0)
        truth = LowRankTruth(d, d, 1, kappa=1.0, sigma_r=3.0)
        prob = gen_lowrank_problem(truth, DesignSpec("diagonal-covariance",
                                                     diag=diag),
                                   NoiseSpec("none"), n=n, seed=2)
        f_plain = spectral_init(prob, r=1)
        f_weighted = spectral_init(prob, covariances=diag, r=1)
        scale_plain = f_plain.s[0] / 3.0
        scale_weighted = f_weighted.s[0] / 3.0
        assert abs(scale_weighted - 1.0) < 0.15
        assert abs(scale_plain - 4.0) < 0.6

    def test_singular_covariance_rejected(self, rng):
        prob = MatrixProblem(rng.normal(size=(5, 3, 3)), rng.normal(size=5))
        bad = np.ones(9)
        bad[0] = 0.0
        with pytest.raises(ValueError):
            spectral_init(prob, covariances=bad, r=1)

    def test_bad_covariance_shape_rejected(self, rng):
        prob = MatrixProblem(rng.normal(size=(5, 3, 3)), rng.normal(size=5))
        with pytest.raises(ValueError):
            spectral_init(prob, covariances=np.ones(5), r=1)


class TestInitDistance:
    def test_interpolation_gives_zero(self, rng):
        meas = rng.integers(-3, 4, size=(6, 2, 2)).astype(float)
        m = rng.integers(-2, 3, size=(2, 2)).astype(float)
        prob = MatrixProblem(meas, meas.reshape(6, -1) @ m.ravel())
        assert estimate_init_distance(prob, m) == 0.0

    def test_known_residuals(self):
        prob = MatrixProblem(np.zeros((2, 2, 2)), np.array([2.0, -2.0]))
        assert estimate_init_distance(prob, np.zeros((2, 2))) == 2.0

    def test_tracks_initial_distance(self):
        # noiseless: residual u_i = <M* - M0, X_i>, so mean |u| estimates
        # sqrt(2/pi) * ||M0 - M*||_F
        hits = 0
        for seed in range(20):
            prob = gaussian_problem(seed, d=10, r=2, n=2000)
            m0 = prob.truth + np.random.default_rng(seed).normal(
                scale=0.3, size=prob.shape)
            dist = np.linalg.norm(m0 - prob.truth)
            ratio = estimate_init_distance(prob, m0) / dist
            if 0.5 <= ratio <= 1.1:
                hits += 1
        assert hits >= 18
