"""Loss formulas, subgradients, and the assembled full sub-gradients,
checked against scalar sums and central finite differences."""

import numpy as np
import pytest

from robustreg.losses import (LossSpec, full_subgradient_mat,
                              full_subgradient_vec, loss_subgrad, loss_value,
                              objective)
from robustreg.problem import MatrixProblem, VectorProblem

ALL_SPECS = [LossSpec("absolute"), LossSpec("huber", 0.7),
             LossSpec("quantile", 0.3), LossSpec("square")]


class TestLossSpec:
    def test_huber_needs_positive_delta(self):
        with pytest.raises(ValueError):
            LossSpec("huber")
        with pytest.raises(ValueError):
            LossSpec("huber", 0.0)
        with pytest.raises(ValueError):
            LossSpec("huber", -1.0)

    def test_quantile_needs_open_unit_delta(self):
        for bad in (None, 0.0, 1.0, 1.5, -0.2):
            with pytest.raises(ValueError):
                LossSpec("quantile", bad)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            LossSpec("cauchy")

    def test_lipschitz_constants(self):
        assert LossSpec("absolute").lipschitz() == 1.0
        assert LossSpec("huber", 0.7).lipschitz() == pytest.approx(1.4)
        assert LossSpec("quantile", 0.3).lipschitz() == pytest.approx(0.7)
        assert LossSpec("square").lipschitz() is None


class TestScalarValues:
    def test_huber_values(self):
        spec = LossSpec("huber", 1.0)
        assert loss_value(spec, 0.0) == 0.0
        assert loss_value(spec, 2.0) == pytest.approx(3.0)
        assert loss_value(spec, 0.5) == pytest.approx(0.25)

    def test_quantile_value(self):
        assert loss_value(LossSpec("quantile", 0.3), -2.0) == pytest.approx(1.4)
        assert loss_value(LossSpec("quantile", 0.3), 2.0) == pytest.approx(0.6)

    def test_absolute_and_square(self):
        assert loss_value(LossSpec("absolute"), -3.0) == 3.0
        assert loss_value(LossSpec("square"), -3.0) == 9.0

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            loss_value(LossSpec("absolute"), float("nan"))
        with pytest.raises(ValueError):
            loss_subgrad(LossSpec("absolute"), float("inf"))


class TestScalarSubgrads:
    def test_sign_zero_is_zero(self):
        assert loss_subgrad(LossSpec("absolute"), 0.0) == 0.0

    def test_huber_at_kink_agrees_both_sides(self):
        spec = LossSpec("huber", 1.0)
        assert loss_subgrad(spec, 1.0) == pytest.approx(2.0)

    def test_huber_outside_band(self):
        assert loss_subgrad(LossSpec("huber", 0.5), -3.0) == pytest.approx(-1.0)

    def test_quantile_zero_is_zero(self):
        assert loss_subgrad(LossSpec("quantile", 0.3), 0.0) == 0.0

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
    def test_subgradient_inequality(self, spec, rng):
        us = rng.normal(scale=2.0, size=60)
        vs = rng.normal(scale=2.0, size=60)
        for u in us:
            psi = loss_subgrad(spec, u)
            fu = loss_value(spec, u)
            for v in vs:
                assert loss_value(spec, v) >= fu + psi * (v - u) - 1e-12

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
    def test_convexity_sampled(self, spec, rng):
        for _ in range(300):
            u, v = rng.normal(scale=3.0, size=2)
            lam = rng.uniform()
            mid = loss_value(spec, lam * u + (1 - lam) * v)
            assert mid <= (lam * loss_value(spec, u)
                           + (1 - lam) * loss_value(spec, v) + 1e-12)

    @pytest.mark.parametrize("spec", ALL_SPECS[:3], ids=lambda s: s.kind)
    def test_lipschitz_sampled(self, spec, rng):
        lip = spec.lipschitz()
        for _ in range(300):
            u, v = rng.normal(scale=3.0, size=2)
            assert (abs(loss_value(spec, u) - loss_value(spec, v))
                    <= lip * abs(u - v) + 1e-12)

    @pytest.mark.parametrize("delta", [0.25, 1.0, 3.5])
    def test_huber_branches_agree_exactly_at_delta(self, delta):
        quad = delta * delta
        lin = 2 * delta * delta - delta * delta
        assert quad == lin


class TestObjective:
    def test_zero_residuals(self):
        assert objective(LossSpec("absolute"), np.zeros(5)) == 0.0

    def test_absolute_sum(self):
        assert objective(LossSpec("absolute"),
                         np.array([1.0, -2.0, 3.0])) == 6.0

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
    def test_matches_scalar_sum_oracle(self, spec, rng):
        u = rng.normal(size=100)
        want = sum(loss_value(spec, v) for v in u)
        assert objective(spec, u) == pytest.approx(want, rel=1e-13)


def _vec_problem(rng, n=30, d=8):
    design = rng.normal(size=(n, d))
    beta_true = rng.normal(size=d)
    y = design @ beta_true + rng.normal(size=n)
    return VectorProblem(design, y, beta_true)


def _mat_problem(rng, n=40, d1=5, d2=4):
    meas = rng.normal(size=(n, d1, d2))
    m_true = rng.normal(size=(d1, d2))
    y = meas.reshape(n, -1) @ m_true.ravel() + rng.normal(size=n)
    return MatrixProblem(meas, y, m_true)


def _fd_gradient(f, x, h):
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e.flat[i] = h
        g.flat[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


class TestFullSubgradientVec:
    def test_interpolation_gives_zero(self, rng):
        # integer data keeps the residuals exactly zero in any
        # summation order
        design = rng.integers(-5, 6, size=(20, 5)).astype(float)
        beta = rng.integers(-3, 4, size=5).astype(float)
        prob = VectorProblem(design, design @ beta)
        g = full_subgradient_vec(LossSpec("absolute"), prob, beta)
        np.testing.assert_array_equal(g, np.zeros(5))

    def test_single_row_sign(self):
        prob = VectorProblem(np.array([[1.0, 0.0]]), np.array([0.0]))
        g = full_subgradient_vec(LossSpec("absolute"), prob,
                                 np.array([2.0, 0.0]))
        np.testing.assert_allclose(g, [1.0, 0.0])

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
    def test_matches_finite_differences(self, spec, rng):
        from robustreg.problem import residuals_vec
        prob = _vec_problem(rng)
        for _ in range(20):
            beta = rng.normal(size=prob.d)
            if np.min(np.abs(residuals_vec(prob, beta))) <= 1e-3:
                continue
            got = full_subgradient_vec(spec, prob, beta)

            def f(b):
                return objective(spec, residuals_vec(prob, b))

            want = _fd_gradient(f, beta, 1e-7)
            np.testing.assert_allclose(got, want, rtol=1e-5, atol=1e-6)

    def test_linearity_in_design_at_fixed_weights(self, rng):
        # at beta = 0 the residuals (hence psi-weights) do not depend on
        # the design, so scaling X must scale G exactly
        design = rng.normal(size=(15, 4))
        y = rng.normal(size=15)
        beta = np.zeros(4)
        spec = LossSpec("absolute")
        g1 = full_subgradient_vec(spec, VectorProblem(design, y), beta)
        g3 = full_subgradient_vec(spec, VectorProblem(3.0 * design, y), beta)
        np.testing.assert_allclose(g3, 3.0 * g1, rtol=1e-12)

    def test_dimension_mismatch(self, rng):
        prob = _vec_problem(rng)
        with pytest.raises(ValueError):
            full_subgradient_vec(LossSpec("absolute"), prob,
                                 np.zeros(prob.d + 1))


class TestFullSubgradientMat:
    def test_interpolation_gives_zero(self, rng):
        meas = rng.integers(-5, 6, size=(10, 3, 3)).astype(float)
        m = rng.integers(-3, 4, size=(3, 3)).astype(float)
        prob = MatrixProblem(meas, meas.reshape(10, -1) @ m.ravel())
        g = full_subgradient_mat(LossSpec("absolute"), prob, m)
        np.testing.assert_array_equal(g, np.zeros((3, 3)))

    def test_single_measurement_sign(self):
        e11 = np.zeros((1, 2, 2))
        e11[0, 0, 0] = 1.0
        prob = MatrixProblem(e11, np.array([0.0]))
        g = full_subgradient_mat(LossSpec("absolute"), prob,
                                 2.0 * e11[0])
        np.testing.assert_allclose(g, e11[0])

    def test_quantile_matches_finite_differences(self, rng):
        from robustreg.problem import residuals_mat
        spec = LossSpec("quantile", 0.5)
        prob = _mat_problem(rng)
        checked = 0
        for _ in range(20):
            m = rng.normal(size=prob.shape)
            if np.min(np.abs(residuals_mat(prob, m))) <= 1e-3:
                continue
            got = full_subgradient_mat(spec, prob, m)

            def f(mm):
                return objective(spec, residuals_mat(prob, mm))

            want = _fd_gradient(f, m, 1e-7)
            np.testing.assert_allclose(got, want, rtol=1e-5, atol=1e-6)
            checked += 1
        assert checked >= 10
