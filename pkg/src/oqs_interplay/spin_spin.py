"""Collision model with partial-swap ancilla memory, and the central spin model."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from .numerics import HermitianEigenDecomposition, eigh, expm_generator, kron, partial_trace
from .quantifiers import QuadratureSpec, entropy_production_joint, qubit_summary
from .records import QuantifierRecord, RunOutput
from .states import (
    IDENTITY,
    NS1,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochVector,
    DensityMatrix,
    density_matrix,
    dicke_operators,
    from_bloch,
    gibbs_state,
    thermal_qubit,
)


def joint_record(
    abscissa: float,
    joint: np.ndarray,
    env_initial: DensityMatrix,
    dims: tuple[int, int],
    omega0: float,
    quadrature: QuadratureSpec,
) -> tuple[QuantifierRecord, DensityMatrix]:
    """Quantifiers of the system factor of a (system, environment) state."""
    rho_s = density_matrix(partial_trace(joint, dims, [0]), (dims[0],))
    delta, entropy, work = qubit_summary(rho_s, omega0, quadrature)
    sigma = entropy_production_joint(joint, env_initial, dims=dims).sigma
    return QuantifierRecord(float(abscissa), delta, entropy, sigma, work), rho_s


# ---------------------------------------------------------------- collision model


@dataclass(frozen=True)
class CollisionConfig:
    omega_s: float
    omega_r: float
    beta: float
    g_sr: float
    tau: float
    theta: float
    n_collisions: int
    initial_state: BlochVector = NS1

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not 0.0 <= self.theta <= np.pi / 2 + 1e-12:
            raise ValueError("theta out of range [0, pi/2]")
        if self.n_collisions < 1:
            raise ValueError("n_collisions must be at least 1")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")


def collision_hamiltonian(cfg: CollisionConfig) -> np.ndarray:
    h_s = 0.5 * cfg.omega_s * kron(SIGMA_Z, IDENTITY)
    h_r = 0.5 * cfg.omega_r * kron(IDENTITY, SIGMA_Z)
    h_sr = cfg.g_sr * (kron(SIGMA_X, SIGMA_X) + kron(SIGMA_Y, SIGMA_Y))
    return h_s + h_r + h_sr


def collision_unitary(cfg: CollisionConfig) -> np.ndarray:
    """System-ancilla propagator over one collision, basis order S ⊗ R."""
    return expm_generator(collision_hamiltonian(cfg), cfg.tau)


def swap_generator() -> np.ndarray:
    """``(σ·σ + I)/2``, which is the two-qubit SWAP."""
    dot = sum(kron(p, p) for p in (SIGMA_X, SIGMA_Y, SIGMA_Z))
    return 0.5 * (dot + np.eye(4))


def partial_swap_unitary(theta: float) -> np.ndarray:
    if not 0.0 <= theta <= np.pi / 2 + 1e-12:
        raise ValueError("theta out of range [0, pi/2]")
    return np.cos(theta) * np.eye(4) - 1j * np.sin(theta) * swap_generator()


def collision_joint_states(cfg: CollisionConfig) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(n, ρ'_{S A_n})`` with ``n = 0`` the uncollided product state.

    Between collisions the used ancilla meets a fresh one through the partial
    swap, and only the fresh one is kept, so memory is carried by the
    (system, next ancilla) pair alone.
    """
    u = collision_unitary(cfg)
    u_dag = u.conj().T
    swap = kron(IDENTITY, partial_swap_unitary(cfg.theta))
    swap_dag = swap.conj().T
    ancilla = thermal_qubit(cfg.beta, cfg.omega_r).mat

    joint = kron(from_bloch(cfg.initial_state).mat, ancilla)
    yield 0, joint
    for n in range(1, cfg.n_collisions + 1):
        joint = u @ joint @ u_dag
        yield n, joint
        # (S, A_n, A_{n+1}); drop A_n after the ancilla-ancilla swap
        triple = swap @ kron(joint, ancilla) @ swap_dag
        joint = partial_trace(triple, [2, 2, 2], [0, 2])


def run_collision(cfg: CollisionConfig, quadrature: QuadratureSpec = QuadratureSpec()) -> RunOutput:
    """Quantifiers after each collision; Σ is per collision, not cumulative."""
    ancilla = thermal_qubit(cfg.beta, cfg.omega_r)
    records = []
    for n, joint in collision_joint_states(cfg):
        density_matrix(joint, (2, 2))
        rec, _ = joint_record(n, joint, ancilla, (2, 2), cfg.omega_s, quadrature)
        records.append(rec)
    meta = {"model": "collision", **_flat(asdict(cfg))}
    return RunOutput(records, meta)


def one_collision_superoperator(cfg: CollisionConfig) -> np.ndarray:
    """Matrix of ``ρ ↦ Tr_R[U (ρ ⊗ ρ_R) U†]`` on row-major ``vec(ρ)``."""
    u = collision_unitary(cfg)
    ancilla = thermal_qubit(cfg.beta, cfg.omega_r).mat
    cols = []
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = 1.0
        basis = e.reshape(2, 2)
        out = partial_trace(u @ kron(basis, ancilla) @ u.conj().T, [2, 2], [0])
        cols.append(out.reshape(4))
    return np.column_stack(cols)


def markovian_fixed_point(cfg: CollisionConfig) -> DensityMatrix:
    """Eigenvalue-1 eigenoperator of the one-collision map, trace-normalized."""
    w, v = np.linalg.eig(one_collision_superoperator(cfg))
    k = int(np.argmin(np.abs(w - 1.0)))
    m = v[:, k].reshape(2, 2)
    m = m / np.trace(m)
    return density_matrix((m + m.conj().T) / 2, (2,))


# ---------------------------------------------------------------- central spin model


@dataclass(frozen=True)
class CentralSpinConfig:
    omega0: float
    omega: float
    beta: float
    epsilon: float
    n_bath: int
    t_grid: tuple[float, ...] = field(default=())
    initial_state: BlochVector = NS1

    def __post_init__(self):
        if self.n_bath < 1:
            raise ValueError("n_bath must be at least 1")
        t = np.asarray(self.t_grid, dtype=float)
        if t.size == 0 or t[0] < 0 or np.any(np.diff(t) <= 0):
            raise ValueError("t_grid must be nonempty, start at t >= 0 and increase strictly")
        object.__setattr__(self, "t_grid", tuple(float(x) for x in t))


def central_spin_hamiltonian(cfg: CentralSpinConfig) -> np.ndarray:
    ops = dicke_operators(cfg.n_bath)
    d = cfg.n_bath + 1
    n = float(cfg.n_bath)
    h = (
        0.5 * cfg.omega0 * kron(SIGMA_Z, np.eye(d))
        + (cfg.omega / n) * kron(IDENTITY, ops.jz)
        + (cfg.epsilon / np.sqrt(n)) * (kron(SIGMA_X, ops.jx) + kron(SIGMA_Y, ops.jy))
    )
    return h


def central_spin_bath_state(cfg: CentralSpinConfig) -> DensityMatrix:
    ops = dicke_operators(cfg.n_bath)
    return gibbs_state((cfg.omega / cfg.n_bath) * ops.jz, cfg.beta)


class SpectralPropagator:
    """Evolves ``ρ(t) = e^{-iHt} ρ e^{iHt}`` from a single diagonalization."""

    def __init__(self, h: np.ndarray, rho0: np.ndarray):
        self.decomposition: HermitianEigenDecomposition = eigh(h)
        v = self.decomposition.eigenvectors
        self._v = v
        self._rho_eig = v.conj().T @ rho0 @ v
        lam = self.decomposition.eigenvalues
        self._gaps = lam[:, None] - lam[None, :]

    def state(self, t: float) -> np.ndarray:
        phase = np.exp(-1j * self._gaps * t)
        rho = self._v @ (self._rho_eig * phase) @ self._v.conj().T
        return 0.5 * (rho + rho.conj().T)


def run_central_spin(cfg: CentralSpinConfig, quadrature: QuadratureSpec = QuadratureSpec()) -> RunOutput:
    bath = central_spin_bath_state(cfg)
    dims = (2, cfg.n_bath + 1)
    rho0 = kron(from_bloch(cfg.initial_state).mat, bath.mat)
    prop = SpectralPropagator(central_spin_hamiltonian(cfg), rho0)
    records = []
    for t in cfg.t_grid:
        rec, _ = joint_record(t, prop.state(t), bath, dims, cfg.omega0, quadrature)
        records.append(rec)
    meta = {"model": "central-spin", **_flat(asdict(cfg))}
    return RunOutput(records, meta)


def _flat(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if k == "t_grid":
            out["t_start"], out["t_stop"], out["n_samples"] = v[0], v[-1], len(v)
        elif k == "initial_state":
            out[k] = "{r_x},{r_y},{r_z}".format(**v)
        else:
            out[k] = v
    return out
