"""Forecastable component analysis: EM-like eigenvector iteration and deflation.

For a normalized cross-spectrum ``S_j`` (summing to ``I``) and a unit vector
``w``, ``p_j = w' S_j w`` is a distribution over frequency bins. Fixing the
log-weights at the current iterate gives the PSD matrix

    Sbar(w) = -sum_j S_j log p_j / log(n_bins)

whose quadratic form at ``w`` is the normalized spectral entropy of ``w' U``.
Replacing ``w`` by the smallest eigenvector of ``Sbar(w)`` never increases
that entropy (Gibbs' inequality), and at a fixed point
``omega = 1 - lambda_min(Sbar)``.

Random starts are reproducible: restart ``r`` of component ``k`` draws from
``numpy.random.default_rng([seed, k, r])``.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionError, ForecaError, InputError, NumericalFailure
from .forecastability import h_objective
from .linalg import fix_sign, min_eigpair, orthonormal_complement, qform
from .spectrum import (
    SpectralMatrixSequence,
    WosaConfig,
    combo_density,
    renormalize_sequence,
    wosa_cross_spectrum,
)
from .whitening import WhiteningTransform, as_series_matrix, fit_whitener, unwhiten_loadings, whiten

LOG_CLAMP = 1e-300


@dataclass(frozen=True)
class ForecaConfig:
    n_restarts: int = 5
    tol: float = 1e-8
    max_iter: int = 200
    seed: int = 0
    wosa: WosaConfig = field(default_factory=WosaConfig)
    rcond_tol: float = 1e-12

    def __post_init__(self):
        if self.n_restarts < 1:
            raise InputError("need at least one restart")
        if self.max_iter < 1:
            raise InputError("max_iter must be positive")
        if not self.tol > 0:
            raise InputError("tol must be positive")


@dataclass
class EmTrace:
    """History of one EM run.

    ``objective_values[i]`` is the entropy at iterate ``w_i``; ``bounds[i]``
    is the smallest eigenvalue of ``Sbar(w_i)``, which equals the quadratic
    form of ``w_{i+1}`` in that matrix and so sits between consecutive
    objective values.
    """

    objective_values: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    final_gap: float = math.inf

    def is_monotone(self, atol=1e-12):
        h = np.asarray(self.objective_values)
        return bool(np.all(np.diff(h) <= atol))


@dataclass(frozen=True)
class ComponentFit:
    w: np.ndarray
    omega: float
    lambda_min: float
    trace: EmTrace
    restart: int


@dataclass(frozen=True)
class ForecaModel:
    """Fitted loadings; row ``k`` of each loading matrix is component ``k``.

    Components are sorted by ``omega`` (descending).
    """

    loadings_whitened: np.ndarray
    loadings_original: np.ndarray
    omega: np.ndarray
    lambda_min: np.ndarray
    traces: tuple
    whitener: WhiteningTransform
    config: ForecaConfig
    segment_length: int
    restarts_used: int
    columns: Optional[tuple] = None

    @property
    def n(self):
        return self.loadings_whitened.shape[1]

    @property
    def n_components(self):
        return self.loadings_whitened.shape[0]


def _check_unit(w, seq):
    w = np.asarray(w, dtype=float)
    if w.shape != (seq.dim,):
        raise DimensionError(f"w has shape {w.shape}, sequence dimension is {seq.dim}")
    if abs(np.linalg.norm(w) - 1.0) > 1e-10:
        raise InputError("w must have unit norm")
    return w


def weighted_spectrum(w, seq):
    """``-sum_j S_j log(w' S_j w) / log(n_bins)``, per-bin weights clamped at 1e-300."""
    combo_density(w, seq)  # contract checks
    p = np.einsum("a,jab,b->j", w, seq.matrices, w)
    logp = np.log(np.maximum(p, LOG_CLAMP))
    sbar = -np.einsum("j,jab->ab", logp, seq.matrices) / math.log(seq.n_bins)
    return 0.5 * (sbar + sbar.T)


def _gap(w_new, w):
    return min(np.linalg.norm(w_new - w), np.linalg.norm(w_new + w))


def _update(w, seq):
    lam, v = min_eigpair(weighted_spectrum(w, seq))
    if v @ w < 0:
        v = -v
    return v, lam


def em_step(w, seq):
    """One update: smallest eigenvector of ``Sbar(w)``, sign-aligned to ``w``."""
    w = _check_unit(w, seq)
    return _update(w, seq)[0]


def em_run(w0, seq, tol=1e-8, max_iter=200):
    """Iterate :func:`em_step` until the sign-aligned step is below ``tol``.

    Returns
    -------
    w : ndarray
        Final iterate.
    lambda_min : float
        ``w' Sbar(w) w`` at the final iterate, i.e. its normalized entropy.
    trace : EmTrace
        Not converging within ``max_iter`` is reported here, not raised.
    """
    w = np.asarray(w0, dtype=float)
    if w.shape != (seq.dim,):
        raise DimensionError(f"w0 has shape {w.shape}, sequence dimension is {seq.dim}")
    norm = np.linalg.norm(w)
    if not norm > 0 or not np.isfinite(norm):
        raise InputError("w0 must be a nonzero finite vector")
    w = w / norm

    trace = EmTrace(objective_values=[h_objective(w, seq)])
    for i in range(max_iter):
        w_new, bound = _update(w, seq)
        if not np.all(np.isfinite(w_new)) or not np.isfinite(bound):
            raise NumericalFailure(f"NaN in EM update at iteration {i}", iteration=i)
        h_new = h_objective(w_new, seq)
        if not np.isfinite(h_new):
            raise NumericalFailure(f"NaN objective at iteration {i}", iteration=i)
        trace.bounds.append(float(bound))
        trace.objective_values.append(h_new)
        trace.iterations = i + 1
        trace.final_gap = float(_gap(w_new, w))
        w = w_new
        if trace.final_gap < tol:
            trace.converged = True
            break
    lambda_min = qform(w, weighted_spectrum(w, seq))
    return w, lambda_min, trace


def _start(seed, component, restart, n):
    rng = np.random.default_rng([seed, component, restart])
    w0 = rng.uniform(-1.0, 1.0, size=n)
    return w0 / np.linalg.norm(w0)


def foreca_one(seq, n_restarts=5, seed=0, tol=1e-8, max_iter=200, component=0):
    """Best of ``n_restarts`` EM runs from uniform random starts.

    The winner has the smallest final objective; ties go to the lowest
    restart index.
    """
    if n_restarts < 1:
        raise InputError("need at least one restart")
    if not seq.normalized:
        raise InputError("foreca_one needs a normalized spectral matrix sequence")
    best = None
    failures = []
    for r in range(n_restarts):
        try:
            w, lam, trace = em_run(_start(seed, component, r, seq.dim), seq, tol, max_iter)
        except NumericalFailure as exc:
            failures.append(f"restart {r}: {exc}")
            continue
        if best is None or lam < best[1]:
            best = (w, lam, trace, r)
    if best is None:
        raise ForecaError("all restarts failed: " + "; ".join(failures))
    w, lam, trace, r = best
    return ComponentFit(w=fix_sign(w), omega=1.0 - lam, lambda_min=lam, trace=trace, restart=r)


def deflate(seq, basis):
    """Restrict a sequence to the subspace spanned by the orthonormal columns of ``basis``."""
    mats = np.einsum("ai,jab,bk->jik", basis, seq.matrices, basis)
    mats = 0.5 * (mats + np.transpose(mats, (0, 2, 1)))
    return SpectralMatrixSequence(seq.grid, mats, normalized=seq.normalized)


def fit_sequence(seq, n_components, config=None):
    """Extract ``n_components`` loadings from a normalized sequence by deflation.

    Returns the unsorted list of :class:`ComponentFit` with ``w`` expressed
    in the coordinates of ``seq``.
    """
    config = config or ForecaConfig()
    n = seq.dim
    if not 1 <= n_components <= n:
        raise DimensionError(f"n_components must lie in [1, {n}], got {n_components}")
    basis = np.eye(n)
    current = seq
    fits = []
    for k in range(n_components):
        if current.dim == 1:
            w_local, lam, trace = em_run(np.ones(1), current, config.tol, config.max_iter)
            fit = ComponentFit(np.ones(1), 1.0 - lam, lam, trace, 0)
        else:
            fit = foreca_one(current, config.n_restarts, config.seed, config.tol, config.max_iter, component=k)
        w = basis @ fit.w
        fits.append(ComponentFit(w, fit.omega, fit.lambda_min, fit.trace, fit.restart))
        if k + 1 < n_components:
            comp = orthonormal_complement(fit.w)
            current = deflate(current, comp)
            basis = basis @ comp
    return fits


def foreca_fit(X, n_components, config=None, columns=None):
    """Fit ForeCA to a ``T x n`` series.

    Whitens ``X``, estimates and renormalizes the WOSA cross-spectrum of the
    whitened series once, then extracts components one at a time, each in
    the orthogonal complement of the previous ones.
    """
    config = config or ForecaConfig()
    X = as_series_matrix(X)
    n = X.shape[1]
    if not 1 <= n_components <= n:
        raise DimensionError(f"n_components must lie in [1, {n}], got {n_components}")
    whitener = fit_whitener(X, config.rcond_tol)
    U = whiten(X, whitener)
    seq = renormalize_sequence(wosa_cross_spectrum(U, config.wosa), config.rcond_tol)
    fits = fit_sequence(seq, n_components, config)

    order = sorted(range(len(fits)), key=lambda i: -fits[i].omega)
    fits = [fits[i] for i in order]
    W_U = np.array([f.w for f in fits])
    return ForecaModel(
        loadings_whitened=W_U,
        loadings_original=unwhiten_loadings(W_U, whitener),
        omega=np.array([f.omega for f in fits]),
        lambda_min=np.array([f.lambda_min for f in fits]),
        traces=tuple(f.trace for f in fits),
        whitener=whitener,
        config=config,
        segment_length=seq.grid.segment_length,
        restarts_used=config.n_restarts,
        columns=tuple(columns) if columns is not None else None,
    )


def transform(X, model):
    """Component series ``(X - mean) W_X'``, shape ``T x K``."""
    X = as_series_matrix(X)
    if X.shape[1] != model.n:
        raise DimensionError(f"X has {X.shape[1]} columns, model expects {model.n}")
    return (X - model.whitener.mean) @ model.loadings_original.T
