"""Complex-matrix kernels shared by every solver module.

Everything here is a pure function over numpy arrays. Inputs are
symmetrized ((A + A^H) / 2) before any decomposition so that round-off
drift accumulated over solver sweeps never leaks into the eigenvalues.
Capacity logarithms are base 2 throughout.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

logger = logging.getLogger(__name__)

# Eigenvalues below this fraction of the largest one count as zero when
# splitting a spectrum into its non-zero part.
RANK_CUT = 1e-12

# Smallest eigenvalue must exceed n * eps * largest, i.e. survive round-off.
_EPS = float(np.finfo(float).eps)

_LOG2_E = 1.0 / np.log(2.0)


@dataclass(frozen=True)
class HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def rank(self, rel_cut: float = RANK_CUT) -> int:
        """Number of eigenvalues above *rel_cut* times the largest one."""
        return int(np.count_nonzero(self.eigenvalues > nonzero_threshold(self.eigenvalues, rel_cut)))


def as_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Return *a* as a finite complex square array or raise ValueError."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def nonzero_threshold(eigenvalues: np.ndarray, rel_cut: float = RANK_CUT) -> float:
    """Absolute cut below which an eigenvalue is treated as zero."""
    if eigenvalues.size == 0:
        return 0.0
    top = float(np.max(eigenvalues))
    return rel_cut * top if top > 0.0 else 0.0


def eig_hermitian(a: np.ndarray) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix with eigenvalues sorted descending.

    Raises ValueError for non-square or non-finite input.
    """
    arr = symmetrize(as_square(a))
    w, v = linalg.eigh(arr)
    order = np.argsort(w)[::-1]
    return HermitianEig(eigenvalues=w[order].real.copy(), eigenvectors=v[:, order])


def logdet_pd(a: np.ndarray) -> float:
    """log2 det(a) for Hermitian positive definite *a*, via Cholesky.

    Raises ValueError if *a* is not positive definite.
    """
    arr = symmetrize(as_square(a))
    if arr.shape[0] == 0:
        return 0.0
    try:
        c, _ = linalg.cho_factor(arr, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise ValueError(f"matrix is not positive definite: {exc}") from exc
    diag = np.real(np.diag(c))
    if np.any(diag <= 0.0):
        raise ValueError("matrix is not positive definite")
    return float(2.0 * np.sum(np.log(diag)) * _LOG2_E)


def logdet_eye_plus(a: np.ndarray) -> float:
    """log2 det(I + a) for Hermitian PSD *a*."""
    arr = as_square(a)
    return logdet_pd(np.eye(arr.shape[0]) + arr)


def _pd_eig(a: np.ndarray) -> HermitianEig:
    eig = eig_hermitian(a)
    if eig.eigenvalues.size and (
        eig.eigenvalues[-1] <= 0.0
        or eig.eigenvalues[-1] <= eig.eigenvalues.size * _EPS * eig.eigenvalues[0]
    ):
        raise ValueError(
            f"matrix is not positive definite (min eigenvalue {eig.eigenvalues[-1]:.3e})"
        )
    return eig


def inv_sqrt_pd(a: np.ndarray) -> np.ndarray:
    """Hermitian inverse square root of a positive definite matrix."""
    eig = _pd_eig(a)
    u = eig.eigenvectors
    return symmetrize((u / np.sqrt(eig.eigenvalues)) @ u.conj().T)


def sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix; tiny negative eigenvalues clip to zero."""
    eig = eig_hermitian(a)
    u = eig.eigenvectors
    return symmetrize((u * np.sqrt(np.clip(eig.eigenvalues, 0.0, None))) @ u.conj().T)


def is_psd(a: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff the smallest eigenvalue of sym(a) is at least -tol."""
    arr = as_square(a)
    if arr.shape[0] == 0:
        return True
    w = linalg.eigh(symmetrize(arr), eigvals_only=True)
    return bool(w[0] >= -tol)


def project_psd(a: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm (negative eigenvalues dropped)."""
    eig = eig_hermitian(a)
    u = eig.eigenvectors
    return symmetrize((u * np.clip(eig.eigenvalues, 0.0, None)) @ u.conj().T)


def trace_real(a: np.ndarray) -> float:
    return float(np.real(np.trace(a)))
