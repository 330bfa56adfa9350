"""Dense symmetric linear algebra kernels.

Everything downstream (whitening, spectral renormalization, the EM update)
reduces to eigenproblems of small real symmetric matrices, so the
eigensolver here is a plain cyclic Jacobi method: slow for large ``n`` but
deterministic and accurate to working precision.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError, NumericalFailure, SingularCovarianceError

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
# relative slack when deciding which entry of an eigenvector is "largest"
_SIGN_TIE_RTOL = 1e-10


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]


def as_symmetric(A, atol=1e-8):
    """Validate ``A`` as a finite square matrix and return its exact symmetric part.

    Asymmetry larger than ``atol`` (relative to the largest entry) is an
    input error rather than something to silently average away.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and np.max(np.abs(A - A.T)) > atol * scale:
        raise InputError("matrix is not symmetric")
    return 0.5 * (A + A.T)


def fix_sign(v):
    """Flip ``v`` so its largest-magnitude entry is positive.

    Near-ties (within a relative 1e-10) go to the lowest index, which keeps
    vectors like (1, -1)/sqrt(2) stable under rounding noise.
    """
    v = np.asarray(v, dtype=float)
    mag = np.abs(v)
    top = mag.max() if v.size else 0.0
    if top == 0.0:
        return v.copy()
    i = int(np.flatnonzero(mag >= top * (1.0 - _SIGN_TIE_RTOL))[0])
    return -v if v[i] < 0 else v.copy()


def _offdiag_norm(A):
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def sym_eigen(A):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps run in fixed row-major pivot order until the off-diagonal
    Frobenius norm drops below ``JACOBI_TOL`` times ``max(1, ||A||_F)``.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Symmetric matrix; only its symmetric part is used.

    Returns
    -------
    EigenDecomposition
        Ascending eigenvalues and orthonormal eigenvectors, each with its
        largest-magnitude entry positive.
    """
    a = as_symmetric(A).copy()
    n = a.shape[0]
    v = np.eye(n)
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) <= threshold:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(apq) < 1e-18 * (abs(a[p, p]) + abs(a[q, q])):
                    # below rounding of the diagonal; rotating would overflow tau
                    a[p, q] = a[q, p] = 0.0
                    continue
                # Golub & Van Loan sym.schur2: pick the smaller rotation angle
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
                rotated = True
        if not rotated:
            break
    else:
        if _offdiag_norm(a) > threshold:
            raise NumericalFailure(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")

    order = np.argsort(np.diag(a), kind="stable")
    eigenvalues = np.diag(a)[order].copy()
    eigenvectors = v[:, order]
    for i in range(n):
        eigenvectors[:, i] = fix_sign(eigenvectors[:, i])
    eigenvalues.flags.writeable = False
    eigenvectors.flags.writeable = False
    return EigenDecomposition(eigenvalues, eigenvectors)


def min_eigpair(A):
    """Smallest eigenvalue and its unit eigenvector (sign convention applied).

    This is the minimizer of ``w' A w`` over the unit sphere.
    """
    eig = sym_eigen(A)
    w = eig.eigenvectors[:, 0].copy()
    w /= np.linalg.norm(w)
    return float(eig.eigenvalues[0]), w


def inv_sqrt_psd(A, rcond_tol=1e-12):
    """Symmetric inverse square root ``V diag(lambda^-1/2) V'`` of a PD matrix.

    Raises
    ------
    SingularCovarianceError
        If ``lambda_min / lambda_max < rcond_tol``.
    """
    eig = sym_eigen(A)
    lam = eig.eigenvalues
    lam_max = lam[-1]
    if lam_max <= 0.0 or lam[0] / lam_max < rcond_tol:
        raise SingularCovarianceError(
            f"matrix is singular: smallest eigenvalue {lam[0]:.6g} "
            f"(largest {lam_max:.6g}, rcond tolerance {rcond_tol:g})",
            eigenvalue=float(lam[0]),
        )
    V = eig.eigenvectors
    R = (V / np.sqrt(lam)) @ V.T
    return 0.5 * (R + R.T)


def orthonormal_complement(W):
    """Orthonormal basis of the complement of the column space of ``W``.

    Built from the Householder QR of ``W`` (fixed pivot order), so the result
    depends only on ``W``. Each column carries the eigenvector sign
    convention.

    Parameters
    ----------
    W : array_like, shape (n, k)
        Orthonormal columns, ``k < n``. A 1-D input is treated as one column.

    Returns
    -------
    ndarray, shape (n, n - k)
    """
    W = np.asarray(W, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    if W.ndim != 2:
        raise DimensionError("W must be a vector or a matrix")
    n, k = W.shape
    if k >= n:
        raise DimensionError(f"need k < n for a complement, got k={k}, n={n}")
    if not np.all(np.isfinite(W)):
        raise InputError("W has non-finite entries")
    if np.max(np.abs(W.T @ W - np.eye(k))) > 1e-10:
        raise InputError("columns of W are not orthonormal")

    R = W.copy()
    Q = np.eye(n)
    for j in range(k):
        x = R[j:, j]
        norm_x = np.linalg.norm(x)
        alpha = -norm_x if x[0] >= 0 else norm_x
        u = x.copy()
        u[0] -= alpha
        norm_u = np.linalg.norm(u)
        if norm_u == 0.0:
            continue
        u /= norm_u
        R[j:, :] -= 2.0 * np.outer(u, u @ R[j:, :])
        Q[:, j:] -= 2.0 * np.outer(Q[:, j:] @ u, u)

    B = Q[:, k:].copy()
    for i in range(B.shape[1]):
        B[:, i] = fix_sign(B[:, i])
    return B


def qform(w, A):
    """Quadratic form ``w' A w``."""
    w = np.asarray(w, dtype=float)
    A = np.asarray(A, dtype=float)
    if w.ndim != 1 or A.shape != (w.shape[0], w.shape[0]):
        raise DimensionError(f"cannot form w'Aw with w {w.shape} and A {A.shape}")
    return float(w @ A @ w)
