import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foreca.core import (
    ForecaConfig,
    ForecaModel,
    em_run,
    em_step,
    fit_sequence,
    foreca_fit,
    foreca_one,
    transform,
    weighted_spectrum,
)
from foreca.errors import ContractError, DimensionError, InputError
from foreca.forecastability import h_objective, omega_series, spectral_entropy
from foreca.linalg import sym_eigen
from foreca.spectrum import FrequencyGrid, SpectralMatrixSequence, WosaConfig
from foreca.whitening import WhiteningTransform
from cases import mixture_4d, planted_pair, two_channel_instance, whitened_sequence
from oracles import angle_sweep_oracle, diagonal_sequence, entropy_direct, random_normalized_sequence


def flat_sequence(n, n_bins=16):
    return SpectralMatrixSequence(FrequencyGrid(2 * n_bins), np.tile(np.eye(n) / n_bins, (n_bins, 1, 1)), True)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def peaked_diagonal(n_bins=20):
    d1 = np.r_[8.0, 4.0, np.ones(n_bins - 2)]
    d2 = np.linspace(1.0, 2.0, n_bins)
    return diagonal_sequence([d1, d2]), d1 / d1.sum(), d2 / d2.sum()


class TestWeightedSpectrum:

    def test_flat_is_identity(self):
        rng = np.random.default_rng(0)
        seq = flat_sequence(3)
        np.testing.assert_allclose(weighted_spectrum(unit(rng.standard_normal(3)), seq), np.eye(3), atol=1e-14)

    def test_univariate_is_entropy(self):
        d = np.random.default_rng(1).exponential(size=12)
        d /= d.sum()
        seq = SpectralMatrixSequence(FrequencyGrid(24), d[:, None, None], True)
        assert weighted_spectrum(np.ones(1), seq)[0, 0] == pytest.approx(spectral_entropy(d), abs=1e-14)

    @pytest.mark.parametrize("seed", range(20))
    def test_psd_and_quadratic_form(self, seed):
        rng = np.random.default_rng(seed)
        seq = random_normalized_sequence(rng, 4, 30)
        w = unit(rng.standard_normal(4))
        sbar = weighted_spectrum(w, seq)
        assert sym_eigen(sbar).eigenvalues[0] >= -1e-10
        assert w @ sbar @ w == pytest.approx(h_objective(w, seq), abs=1e-12)

    def test_requires_normalized(self):
        seq = SpectralMatrixSequence(FrequencyGrid(4), np.ones((2, 1, 1)))
        with pytest.raises(ContractError):
            weighted_spectrum(np.ones(1), seq)


class TestEmStep:

    def test_diagonal_fixed_point(self):
        seq, d1, d2 = peaked_diagonal()
        # hand-loop oracle: channel 2's cross-entropy under channel 1's log-weights
        h1 = entropy_direct(d1)
        cross = -sum(b * np.log(a) for a, b in zip(d1, d2)) / np.log(len(d1))
        assert h1 < cross
        np.testing.assert_allclose(em_step(np.array([1.0, 0.0]), seq), [1.0, 0.0], atol=1e-14)

    def test_flat_objective_unchanged(self):
        seq = flat_sequence(3)
        w = unit([1.0, 2.0, -0.5])
        assert h_objective(em_step(w, seq), seq) == pytest.approx(h_objective(w, seq), abs=1e-14)

    @pytest.mark.parametrize("seed", range(20))
    def test_descent(self, seed):
        rng = np.random.default_rng(seed)
        seq = random_normalized_sequence(rng, 3, 20)
        w = unit(rng.uniform(-1, 1, 3))
        assert h_objective(em_step(w, seq), seq) <= h_objective(w, seq) + 1e-12

    def test_non_unit(self):
        with pytest.raises(InputError):
            em_step(np.array([1.0, 1.0]), flat_sequence(2))

    def test_wrong_dimension(self):
        with pytest.raises(DimensionError):
            em_step(np.array([1.0]), flat_sequence(2))


class TestEmRun:

    def test_start_at_fixed_point(self):
        seq, _, _ = peaked_diagonal()
        w, lam, trace = em_run(np.array([1.0, 0.0]), seq)
        assert trace.converged and trace.iterations <= 2
        np.testing.assert_allclose(w, [1.0, 0.0], atol=1e-14)

    def test_flat(self):
        w, lam, trace = em_run(np.array([0.3, -0.7, 0.2]), flat_sequence(3))
        assert trace.converged and trace.iterations <= 2
        assert lam == pytest.approx(1.0, abs=1e-14)
        assert np.allclose(trace.objective_values, 1.0, atol=1e-14)

    @pytest.mark.parametrize("seed", range(10))
    def test_sandwich(self, seed):
        X, w0 = mixture_4d(seed)
        seq = whitened_sequence(X)
        _, _, trace = em_run(w0, seq)
        h = trace.objective_values
        for i, bound in enumerate(trace.bounds):
            assert h[i] >= bound - 1e-12
            assert bound >= h[i + 1] - 1e-12

    @pytest.mark.parametrize("seed", range(10))
    def test_stationary_after_convergence(self, seed):
        X, w0 = mixture_4d(seed)
        seq = whitened_sequence(X)
        w, lam, trace = em_run(w0, seq)
        assert trace.converged
        assert min(np.linalg.norm(em_step(w, seq) - w), np.linalg.norm(em_step(w, seq) + w)) < 1e-8
        assert lam == pytest.approx(sym_eigen(weighted_spectrum(w, seq)).eigenvalues[0], abs=1e-8)

    def test_unconverged_is_reported(self):
        X, w0 = mixture_4d(0)
        _, _, trace = em_run(w0, whitened_sequence(X), tol=1e-300, max_iter=3)
        assert not trace.converged and trace.iterations == 3
        assert len(trace.objective_values) == 4

    def test_zero_start(self):
        with pytest.raises(InputError):
            em_run(np.zeros(2), flat_sequence(2))

    @pytest.mark.parametrize("seed", range(5))
    def test_planted_beats_angle_sweep(self, seed):
        X, _ = planted_pair(seed, T=1024)
        seq = whitened_sequence(X)
        _, lam, _ = em_run(np.array([1.0, 0.0]), seq)
        # sign-symmetric: running from e2 too covers both basins
        _, lam2, _ = em_run(np.array([0.0, 1.0]), seq)
        assert min(lam, lam2) <= angle_sweep_oracle(seq)[1] + 1e-6


class TestForecaOne:

    @pytest.mark.parametrize("seed", [0, 1, 17])
    def test_flat(self, seed):
        fit = foreca_one(flat_sequence(3), seed=seed)
        assert fit.omega == pytest.approx(0.0, abs=1e-14)

    def test_deterministic(self):
        seq = whitened_sequence(mixture_4d(3)[0])
        a, b = foreca_one(seq, seed=5), foreca_one(seq, seed=5)
        assert a.w.tobytes() == b.w.tobytes()
        assert a.omega == b.omega and a.restart == b.restart

    @pytest.mark.parametrize("seed", range(20))
    def test_global_optimum_n2(self, seed):
        seq = two_channel_instance(seed)
        fit = foreca_one(seq)
        assert fit.lambda_min <= angle_sweep_oracle(seq)[1] + 1e-6

    @pytest.mark.parametrize("seed", range(5))
    def test_planted_direction(self, seed):
        X, R = planted_pair(seed)
        U_seq = whitened_sequence(X)
        fit = foreca_one(U_seq)
        model = foreca_fit(X, 1)
        c = R.T @ model.loadings_original[0]
        assert abs(c[0]) / np.linalg.norm(c) > 0.99
        assert fit.omega == pytest.approx(model.omega[0], abs=1e-12)

    def test_omega_is_one_minus_lambda(self):
        fit = foreca_one(whitened_sequence(mixture_4d(4)[0]))
        assert abs(fit.omega - (1 - fit.lambda_min)) < 1e-8
        assert fit.omega == pytest.approx(1 - fit.trace.objective_values[-1], abs=1e-8)

    def test_zero_restarts(self):
        with pytest.raises(InputError):
            foreca_one(flat_sequence(2), n_restarts=0)


class TestForecaFit:

    def test_white_noise(self):
        X = np.random.default_rng(0).standard_normal((2048, 3))
        model = foreca_fit(X, 3)
        assert np.all(model.omega < 0.05)
        np.testing.assert_allclose(model.loadings_whitened @ model.loadings_whitened.T, np.eye(3), atol=1e-8)

    @pytest.mark.parametrize("seed", range(5))
    def test_planted(self, seed):
        X, R = planted_pair(seed)
        model = foreca_fit(X, 2)
        c = R.T @ model.loadings_original[0]
        assert abs(c[0]) / np.linalg.norm(c) > 0.99
        assert model.omega[0] > model.omega[1] + 0.1

    def test_single_column(self):
        y = mixture_4d(1)[0][:, 0]
        model = foreca_fit(y[:, None], 1)
        assert model.omega[0] == pytest.approx(float(omega_series(y)), abs=1e-10)

    def test_sorted_and_consistent(self):
        model = foreca_fit(mixture_4d(2)[0], 4)
        assert isinstance(model, ForecaModel)
        assert np.all(np.diff(model.omega) <= 0)
        np.testing.assert_allclose(model.omega, 1 - model.lambda_min, atol=1e-8)
        assert model.n == 4 and model.n_components == 4

    @pytest.mark.parametrize("K", [0, 5])
    def test_bad_component_count(self, K):
        with pytest.raises(DimensionError):
            foreca_fit(mixture_4d(0)[0], K)

    def test_deflation_orthogonality(self):
        fits = fit_sequence(whitened_sequence(mixture_4d(6)[0]), 4)
        W = np.array([f.w for f in fits])
        np.testing.assert_allclose(W @ W.T, np.eye(4), atol=1e-8)


class TestTransform:

    @pytest.mark.parametrize("seed", range(3))
    def test_training_components_white(self, seed):
        X = mixture_4d(seed)[0]
        model = foreca_fit(X, 3)
        Y = transform(X, model)
        assert Y.shape == (len(X), 3)
        np.testing.assert_allclose(Y.T @ Y / len(Y), np.eye(3), atol=1e-6)

    @pytest.mark.parametrize("seed", range(3))
    def test_component_omega_matches_model(self, seed):
        X = mixture_4d(seed)[0]
        model = foreca_fit(X, 4)
        Y = transform(X, model)
        for k in range(4):
            assert abs(float(omega_series(Y[:, k])) - model.omega[k]) < 0.02

    def test_identity_model(self):
        X = np.random.default_rng(0).standard_normal((50, 2)) + 3.0
        t = WhiteningTransform(X.mean(axis=0), np.eye(2), np.eye(2), 1.0)
        W = np.array([[1.0, 0.0]])
        model = ForecaModel(W, W, np.zeros(1), np.ones(1), (), t, ForecaConfig(), 32, 5)
        np.testing.assert_allclose(transform(X, model)[:, 0], X[:, 0] - X[:, 0].mean(), atol=1e-14)

    def test_dimension_mismatch(self):
        model = foreca_fit(mixture_4d(0)[0], 1)
        with pytest.raises(DimensionError):
            transform(np.ones((100, 3)), model)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_descent_random_sequences(seed):
    rng = np.random.default_rng(seed)
    seq = random_normalized_sequence(rng, int(rng.integers(2, 6)), int(rng.integers(2, 40)))
    _, _, trace = em_run(rng.uniform(-1, 1, seq.dim), seq, max_iter=50)
    assert trace.is_monotone(1e-12)


def test_config_validation():
    with pytest.raises(InputError):
        ForecaConfig(tol=0.0)
    with pytest.raises(InputError):
        ForecaConfig(max_iter=0)
    assert ForecaConfig().wosa == WosaConfig()
