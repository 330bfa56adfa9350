import numpy as np
import pytest

from foreca.errors import DimensionError, InputError, SingularCovarianceError
from foreca.whitening import (
    WhiteningTransform,
    as_series_matrix,
    estimate_mean_cov,
    fit_whitener,
    unwhiten_loadings,
    whiten,
)


def random_series(seed, T=500, n=4):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((T, n)) @ rng.standard_normal((n, n)) + rng.normal(0, 5, n)


class TestMeanCov:

    def test_two_points(self):
        mean, cov = estimate_mean_cov([[0.0, 0.0], [2.0, 2.0]])
        np.testing.assert_array_equal(mean, [1.0, 1.0])
        np.testing.assert_array_equal(cov, [[1.0, 1.0], [1.0, 1.0]])

    def test_identical_rows(self):
        _, cov = estimate_mean_cov(np.tile([1.0, -2.0, 3.0], (10, 1)))
        np.testing.assert_array_equal(cov, 0.0)

    def test_large_white_sample(self):
        _, cov = estimate_mean_cov(np.random.default_rng(0).standard_normal((20_000, 3)))
        np.testing.assert_allclose(cov, np.eye(3), atol=0.03)

    def test_underdetermined(self):
        with pytest.raises(DimensionError):
            estimate_mean_cov(np.ones((1, 3)))

    def test_one_dimensional_input(self):
        assert as_series_matrix(np.arange(5.0)).shape == (5, 1)

    def test_non_finite(self):
        with pytest.raises(InputError):
            as_series_matrix([[1.0, np.inf]])


class TestFitWhitener:

    def test_standardized_input(self):
        rng = np.random.default_rng(1)
        Z = rng.standard_normal((1000, 3))
        Z -= Z.mean(axis=0)
        # exact orthonormalization so the sample covariance is I
        q, r = np.linalg.qr(Z)
        Z = q * np.sign(np.diag(r)) * np.sqrt(1000)
        t = fit_whitener(Z)
        np.testing.assert_allclose(t.inv_sqrt_cov, np.eye(3), atol=1e-10)
        assert t.rcond == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("seed", range(5))
    def test_whitened_covariance(self, seed):
        X = random_series(seed)
        t = fit_whitener(X)
        U = whiten(X, t)
        np.testing.assert_allclose(U.mean(axis=0), 0.0, atol=1e-10)
        np.testing.assert_allclose(U.T @ U / len(U), np.eye(4), atol=1e-8)
        np.testing.assert_allclose(t.inv_sqrt_cov @ t.covariance @ t.inv_sqrt_cov, np.eye(4), atol=1e-8)

    def test_duplicated_column(self):
        X = random_series(7)
        X[:, 3] = X[:, 1]
        with pytest.raises(SingularCovarianceError) as info:
            fit_whitener(X)
        assert set(info.value.columns) == {1, 3}

    def test_constant_column(self):
        X = random_series(8)
        X[:, 2] = 4.0
        with pytest.raises(SingularCovarianceError) as info:
            fit_whitener(X)
        assert list(info.value.columns) == [2]


class TestWhiten:

    def test_identity_transform(self):
        t = WhiteningTransform(np.zeros(2), np.eye(2), np.eye(2), 1.0)
        X = np.random.default_rng(0).standard_normal((20, 2))
        np.testing.assert_array_equal(whiten(X, t), X)

    def test_dimension_mismatch(self):
        t = fit_whitener(random_series(0))
        with pytest.raises(DimensionError):
            whiten(np.ones((10, 3)), t)


class TestUnwhitenLoadings:

    def test_identity_covariance(self):
        t = WhiteningTransform(np.zeros(3), np.eye(3), np.eye(3), 1.0)
        W = np.random.default_rng(1).standard_normal((2, 3))
        np.testing.assert_array_equal(unwhiten_loadings(W, t), W)

    def test_first_axis(self):
        t = fit_whitener(random_series(2))
        np.testing.assert_allclose(unwhiten_loadings(np.eye(4)[:1], t)[0], t.inv_sqrt_cov[0], atol=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_series_round_trip(self, seed):
        X = random_series(seed, n=3)
        t = fit_whitener(X)
        W_U = np.linalg.qr(np.random.default_rng(seed).standard_normal((3, 3)))[0][:2]
        W_X = unwhiten_loadings(W_U, t)
        np.testing.assert_allclose((X - t.mean) @ W_X.T, whiten(X, t) @ W_U.T, atol=1e-8)

    def test_dimension_mismatch(self):
        t = fit_whitener(random_series(3))
        with pytest.raises(DimensionError):
            unwhiten_loadings(np.ones((1, 2)), t)


def test_whitener_needs_more_rows_than_columns():
    with pytest.raises(DimensionError):
        fit_whitener(np.random.default_rng(0).standard_normal((3, 3)))
