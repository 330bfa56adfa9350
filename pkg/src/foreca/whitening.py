"""Mean/covariance estimation and symmetric whitening.

The covariance uses denominator ``T``; the factor cancels between
``whiten`` and ``unwhiten_loadings``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError, SingularCovarianceError
from .linalg import as_symmetric, inv_sqrt_psd, sym_eigen


@dataclass(frozen=True)
class WhiteningTransform:
    mean: np.ndarray
    covariance: np.ndarray
    inv_sqrt_cov: np.ndarray
    rcond: float

    @property
    def dim(self):
        return self.mean.shape[0]


def as_series_matrix(X):
    """Validate a ``T x n`` observation matrix (1-D input becomes one column)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionError(f"expected a T x n matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError("observations contain non-finite values")
    return X


def estimate_mean_cov(X):
    """Sample mean and covariance (denominator ``T``); needs ``T >= 2``."""
    X = as_series_matrix(X)
    if X.shape[0] < 2:
        raise DimensionError(f"need at least 2 observations, got {X.shape[0]}")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = Xc.T @ Xc / X.shape[0]
    return mean, 0.5 * (cov + cov.T)


def _suspect_columns(cov, rcond_tol):
    """Indices of near-constant columns, or those loading on the null direction."""
    var = np.diag(cov)
    top = var.max() if var.size else 0.0
    constant = [i for i, v in enumerate(var) if v <= rcond_tol * top]
    if constant:
        return constant
    eig = sym_eigen(cov)
    null = eig.eigenvectors[:, 0]
    return [i for i, x in enumerate(null) if abs(x) > 0.1]


def fit_whitener(X, rcond_tol=1e-12):
    """Estimate the whitening transform ``U = (X - mean) cov^-1/2``.

    Raises
    ------
    SingularCovarianceError
        With ``columns`` set to the near-constant or collinear columns.
    """
    X = as_series_matrix(X)
    T, n = X.shape
    if T <= n:
        raise DimensionError(f"need more observations than columns, got T={T}, n={n}")
    mean, cov = estimate_mean_cov(X)
    try:
        R = inv_sqrt_psd(cov, rcond_tol)
    except SingularCovarianceError as exc:
        cols = _suspect_columns(cov, rcond_tol)
        raise SingularCovarianceError(
            f"covariance is singular; near-constant or collinear columns: {cols}",
            eigenvalue=exc.eigenvalue,
            columns=cols,
        ) from exc
    eigenvalues = sym_eigen(cov).eigenvalues
    return WhiteningTransform(mean, cov, R, float(eigenvalues[0] / eigenvalues[-1]))


def whiten(X, transform):
    X = as_series_matrix(X)
    if X.shape[1] != transform.dim:
        raise DimensionError(f"X has {X.shape[1]} columns, transform expects {transform.dim}")
    return (X - transform.mean) @ transform.inv_sqrt_cov


def unwhiten_loadings(W_U, transform):
    """Map whitened-space loadings (rows) to loadings on the original columns."""
    W_U = np.atleast_2d(np.asarray(W_U, dtype=float))
    if W_U.shape[1] != transform.dim:
        raise DimensionError(f"loadings have {W_U.shape[1]} columns, transform expects {transform.dim}")
    return W_U @ as_symmetric(transform.inv_sqrt_cov)
