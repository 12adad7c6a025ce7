"""Dense complex-matrix kernels used throughout the optimizer.

Provides the Hermitian generalized eigendecomposition, column-major
vectorization and Kronecker helpers, the phase-only (unit-modulus)
projection and the clamped diagonal extraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConditioningError, DimensionError

#: Relative ridge added before factorizing (near-)definite matrices.
RIDGE_EPS = 1e-10

#: Relative tolerance for Hermitian-symmetry input checks.
HERMITIAN_RTOL = 1e-10


def ridge(matrix, eps=RIDGE_EPS):
    """Return ``matrix + eps * (trace/dim) * I``.

    Keeps nearly singular positive semi-definite matrices factorizable
    without noticeably perturbing well conditioned ones.  A zero matrix is
    returned unchanged (there is nothing to regularize against).
    """
    m = np.asarray(matrix)
    scale = float(np.real(np.trace(m))) / m.shape[0]
    if scale == 0.0:
        return m
    return m + (eps * scale) * np.eye(m.shape[0], dtype=m.dtype)


def hermitianize(matrix):
    """Average away floating-point Hermitian asymmetry."""
    m = np.asarray(matrix)
    return 0.5 * (m + m.conj().T)


def is_hermitian(matrix, rtol=HERMITIAN_RTOL):
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return np.linalg.norm(m - m.conj().T) <= rtol * max(np.linalg.norm(m), 1.0)


def cholesky_logdet(matrix):
    """``log det`` of a Hermitian positive-definite matrix via Cholesky."""
    try:
        chol = np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError as exc:
        smallest = float(np.linalg.eigvalsh(hermitianize(matrix))[0])
        raise ConditioningError(
            f"matrix is not positive definite (smallest eigenvalue {smallest:.6e})"
        ) from exc
    return 2.0 * float(np.sum(np.log(np.real(np.diag(chol)))))


def inv_psd(matrix, eps=RIDGE_EPS):
    """Inverse of a ridged Hermitian (near-)positive-definite matrix."""
    m = ridge(hermitianize(matrix), eps)
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        smallest = float(np.linalg.eigvalsh(m)[0])
        raise ConditioningError(
            f"matrix is not positive definite after ridge "
            f"(smallest eigenvalue {smallest:.6e})"
        ) from exc
    inv_chol = scipy.linalg.solve_triangular(
        chol, np.eye(m.shape[0], dtype=m.dtype), lower=True
    )
    return inv_chol.conj().T @ inv_chol


@dataclass
class GevdResult:
    """Dominant generalized eigenpairs of a Hermitian pencil.

    ``eigvals`` are real and sorted descending; column ``k`` of ``eigvecs``
    pairs with ``eigvals[k]`` and the columns are B-orthonormal.
    """

    eigvals: np.ndarray
    eigvecs: np.ndarray


def hermitian_gevd(a, b, d, eps=RIDGE_EPS):
    """Dominant eigenpairs of the Hermitian pencil ``A v = lam B v``.

    Implemented by Cholesky whitening of ``B`` (ridged first), a standard
    Hermitian eigendecomposition of the whitened matrix and a back
    transformation; this is what LAPACK's ``hegvd`` driver does under
    ``scipy.linalg.eigh``.

    Parameters
    ----------
    a : ndarray of shape (M, M)
        Hermitian matrix.
    b : ndarray of shape (M, M)
        Hermitian positive-definite matrix (after ridge).
    d : int
        Number of dominant eigenpairs to return, ``1 <= d <= M``.

    Returns
    -------
    GevdResult
        ``d`` dominant pairs, eigenvalues descending, eigenvectors
        B-orthonormal (``v_i^H B v_j = delta_ij``).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"A must be square, got shape {a.shape}")
    if b.shape != a.shape:
        raise DimensionError(f"A and B shapes differ: {a.shape} vs {b.shape}")
    if not 1 <= d <= a.shape[0]:
        raise DimensionError(f"d = {d} outside [1, {a.shape[0]}]")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("pencil matrices must have finite entries")
    if not is_hermitian(a):
        raise ValueError("A is not Hermitian within tolerance")
    if not is_hermitian(b):
        raise ValueError("B is not Hermitian within tolerance")

    b_r = ridge(b, eps)
    try:
        np.linalg.cholesky(b_r)
    except np.linalg.LinAlgError as exc:
        smallest = float(np.linalg.eigvalsh(hermitianize(b_r))[0])
        raise ConditioningError(
            f"B is not positive definite after ridge "
            f"(smallest pivot {smallest:.6e})"
        ) from exc

    eigvals, eigvecs = scipy.linalg.eigh(a, b_r)
    order = np.argsort(eigvals)[::-1]
    sel = order[:d]
    return GevdResult(np.real(eigvals[sel]).copy(), eigvecs[:, sel].copy())


def vec(matrix):
    """Stack the columns of ``matrix`` into a single vector."""
    return np.asarray(matrix).ravel(order="F")


def unvec(vector, rows, cols):
    """Inverse of :func:`vec`: reshape a stacked vector back to a matrix."""
    v = np.asarray(vector)
    if v.size != rows * cols:
        raise DimensionError(f"cannot reshape length {v.size} into {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def kron(a, b):
    """Kronecker product, dims ``(r_a r_b) x (c_a c_b)``."""
    return np.kron(np.asarray(a), np.asarray(b))


def phase_project(matrix):
    """Keep only the phase of every entry, producing unit-modulus output.

    Zero entries map to 1 (phase zero) so the projection is deterministic.
    """
    m = np.asarray(matrix, dtype=complex)
    mag = np.abs(m)
    safe = np.where(mag > 0.0, mag, 1.0)
    return np.where(mag > 0.0, m / safe, 1.0 + 0.0j)


def positive_part_diag(matrix):
    """Diagonal matrix of ``max(0, Re(M[k, k]))``; off-diagonals discarded."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return np.diag(np.maximum(0.0, np.real(np.diag(m))))
