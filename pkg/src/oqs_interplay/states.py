"""Physical states and operators.

Qubit basis order is ``[|e>, |g>]``: index 0 is the excited level, so
``sigma_z = diag(1, -1)`` and ``sigma_minus = |g><e|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .numerics import HERMITIAN_TOL, PSD_TOL, as_matrix, commutator, eigh, hermitian_defect

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
EXCITED = np.array([[1, 0], [0, 0]], dtype=complex)
GROUND = np.array([[0, 0], [0, 1]], dtype=complex)

TRACE_TOL = 1e-10
BLOCH_TOL = 1e-9


class InvalidStateError(ValueError):
    """A density matrix violates one of its defining bounds."""


@dataclass(frozen=True)
class DensityMatrix:
    mat: np.ndarray
    subsystem_dims: tuple[int, ...] = ()

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
        dims = tuple(int(d) for d in self.subsystem_dims) or (m.shape[0],)
        if int(np.prod(dims)) != m.shape[0]:
            raise InvalidStateError(f"subsystem dims {dims} do not multiply to dimension {m.shape[0]}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)
        object.__setattr__(self, "subsystem_dims", dims)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def validate(rho: DensityMatrix, tol: float = HERMITIAN_TOL) -> DensityMatrix:
    """Check Hermiticity, unit trace and positivity; return ``rho`` unchanged."""
    m = rho.mat
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("density matrix has non-finite entries")
    defect = hermitian_defect(m)
    if defect > tol:
        raise InvalidStateError(f"Hermiticity violated: anti-Hermitian part {defect:.3e} > {tol:.1e}")
    tr = np.trace(m)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace violated: |Tr rho - 1| = {abs(tr - 1.0):.3e} > {TRACE_TOL:.1e}")
    lam_min = eigh(m, tol).eigenvalues[0]
    if lam_min < -PSD_TOL:
        raise InvalidStateError(f"negative eigenvalue {lam_min:.3e} < -{PSD_TOL:.1e}")
    return rho


def density_matrix(m, dims: Sequence[int] = ()) -> DensityMatrix:
    """Wrap and validate a matrix, symmetrizing away sub-tolerance drift."""
    a = as_matrix(m)
    rho = DensityMatrix(a, tuple(dims))
    validate(rho)
    return DensityMatrix((a + a.conj().T) / 2.0, rho.subsystem_dims)


@dataclass(frozen=True)
class BlochVector:
    r_x: float
    r_y: float
    r_z: float

    def __post_init__(self):
        if self.norm > 1.0 + BLOCH_TOL:
            raise InvalidStateError(f"Bloch vector norm {self.norm:.12f} exceeds 1 (unphysical)")

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.r_x**2 + self.r_y**2 + self.r_z**2))

    def as_array(self) -> np.ndarray:
        return np.array([self.r_x, self.r_y, self.r_z], dtype=float)


# Bloch vector of the maximally negative single-qubit state.
NS1 = BlochVector(0.50, 0.56, -0.66)


def from_bloch(b: BlochVector) -> DensityMatrix:
    m = 0.5 * (IDENTITY + b.r_x * SIGMA_X + b.r_y * SIGMA_Y + b.r_z * SIGMA_Z)
    return density_matrix(m, (2,))


def to_bloch(rho) -> BlochVector:
    m = as_matrix(rho)
    if m.shape != (2, 2):
        raise ValueError(f"Bloch vector needs a single-qubit state, got dimension {m.shape[0]}")
    return BlochVector(
        float(np.real(np.trace(SIGMA_X @ m))),
        float(np.real(np.trace(SIGMA_Y @ m))),
        float(np.real(np.trace(SIGMA_Z @ m))),
    )


def thermal_qubit(beta: float, omega: float) -> DensityMatrix:
    """Gibbs state of ``(omega/2) sigma_z``."""
    x = beta * omega
    # p_g = 1/(1 + e^{-x}), written to avoid overflow for either sign of x
    if x >= 0:
        q = np.exp(-x)
        p_e, p_g = q / (1.0 + q), 1.0 / (1.0 + q)
    else:
        q = np.exp(x)
        p_e, p_g = 1.0 / (1.0 + q), q / (1.0 + q)
    return density_matrix(np.diag([p_e, p_g]), (2,))


def gibbs_weights(energies: np.ndarray, beta: float) -> np.ndarray:
    e = np.asarray(energies, dtype=float)
    logw = -beta * e
    w = np.exp(logw - logw.max())
    return w / w.sum()


def gibbs_state(h, beta: float) -> DensityMatrix:
    dec = eigh(h)
    p = gibbs_weights(dec.eigenvalues, beta)
    return density_matrix(dec.apply_function(lambda _: p))


@dataclass(frozen=True)
class CollectiveSpinOps:
    """Spin ``j = N/2`` matrices in the ``m = j, j-1, ..., -j`` basis."""

    n_spins: int
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jp: np.ndarray = field(repr=False)
    jm: np.ndarray = field(repr=False)

    @property
    def j(self) -> float:
        return self.n_spins / 2.0

    def casimir_defect(self) -> float:
        c = self.jx @ self.jx + self.jy @ self.jy + self.jz @ self.jz
        d = self.jz.shape[0]
        return float(np.max(np.abs(c - self.j * (self.j + 1) * np.eye(d))))

    def algebra_defect(self) -> float:
        pairs = [(self.jx, self.jy, self.jz), (self.jy, self.jz, self.jx), (self.jz, self.jx, self.jy)]
        return max(float(np.max(np.abs(commutator(a, b) - 1j * c))) for a, b, c in pairs)


def dicke_operators(n_spins: int) -> CollectiveSpinOps:
    if n_spins < 1:
        raise ValueError("n_spins must be at least 1")
    j = n_spins / 2.0
    m = j - np.arange(n_spins + 1)
    # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one row above |m>
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return CollectiveSpinOps(n_spins, jx, jy, jz, jp, jm)


@dataclass(frozen=True)
class FockSpace:
    n_max: int
    annihilate: np.ndarray
    create: np.ndarray

    @property
    def number(self) -> np.ndarray:
        return self.create @ self.annihilate

    @property
    def dim(self) -> int:
        return self.n_max + 1


def fock_space(n_max: int) -> FockSpace:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    a = np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1).astype(complex)
    return FockSpace(n_max, a, a.conj().T)


def thermal_fock(beta: float, omega_c: float, n_max: int) -> tuple[DensityMatrix, float]:
    """Truncated thermal mode state and the Boltzmann weight lost past ``n_max``."""
    if beta <= 0:
        raise ValueError("thermal_fock needs beta > 0; use vacuum_fock for the ground state")
    x = beta * omega_c
    p = np.exp(-x * np.arange(n_max + 1))
    tail = float(np.exp(-x * (n_max + 1)))
    return density_matrix(np.diag(p / p.sum()), (n_max + 1,)), tail


def vacuum_fock(n_max: int) -> DensityMatrix:
    p = np.zeros(n_max + 1)
    p[0] = 1.0
    return density_matrix(np.diag(p), (n_max + 1,))


def mean_occupation(rho: DensityMatrix) -> float:
    n = np.arange(rho.dim)
    return float(np.real(np.diag(rho.mat)) @ n)
