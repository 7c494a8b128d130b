"""Dense complex linear algebra used by every model.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here
is a pure function; nothing mutates its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
LOG_FLOOR = 1e-300


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


@dataclass(frozen=True)
class HermitianEigenDecomposition:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply_function(self, f) -> np.ndarray:
        """Return ``V f(Λ) V†``."""
        v = self.eigenvectors
        return (v * f(self.eigenvalues)) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(getattr(m, "mat", m), dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def hermitian_defect(m: np.ndarray) -> float:
    """Largest entry of the anti-Hermitian part ``(M - M†)/2``."""
    return float(np.max(np.abs(m - dagger(m)))) / 2.0


def symmetrize(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = as_matrix(m)
    defect = hermitian_defect(a)
    if defect > tol:
        raise NotHermitianError(f"matrix is not Hermitian: anti-Hermitian part {defect:.3e} > {tol:.1e}")
    return (a + dagger(a)) / 2.0


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(mats: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` gives the local dimensions in tensor-product order. The kept
    subsystems stay in their original relative order.
    """
    a = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive: {dims}")
    if int(np.prod(dims)) != a.shape[0]:
        raise ValueError(f"dims {dims} do not match matrix dimension {a.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError(f"keep must be a nonempty subset of 0..{len(dims) - 1}, got {keep}")

    n = len(dims)
    t = a.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for i in range(n):
        if i not in keep:
            cols[i] = rows[i]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    reduced = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(d, d)


def eigh(h, tol: float = HERMITIAN_TOL) -> HermitianEigenDecomposition:
    a = symmetrize(h, tol)
    w, v = np.linalg.eigh(a)
    return HermitianEigenDecomposition(w, v)


def expm_generator(h, t: float, decomposition: HermitianEigenDecomposition | None = None) -> np.ndarray:
    """Unitary ``exp(-i h t)`` through the spectral decomposition of ``h``."""
    dec = decomposition if decomposition is not None else eigh(h)
    return dec.apply_function(lambda lam: np.exp(-1j * lam * t))


def logm_psd(m, floor: float = LOG_FLOOR, tol: float = PSD_TOL) -> np.ndarray:
    """Natural log of a positive-semidefinite matrix.

    Eigenvalues below ``floor`` are raised to ``floor`` first.
    """
    dec = eigh(m)
    if dec.eigenvalues[0] < -tol:
        raise NotPSDError(f"matrix is not positive semidefinite: eigenvalue {dec.eigenvalues[0]:.3e}")
    return dec.apply_function(lambda lam: np.log(np.maximum(lam, floor)))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0]), "fro"))
