"""Non-Markovian amplitude damping, generalized amplitude damping, Jaynes-Cummings."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .numerics import kron
from .quantifiers import QuadratureSpec, entropy_production_fixed_point, qubit_summary
from .records import QuantifierRecord, RunOutput
from .spin_spin import SpectralPropagator, _flat, joint_record
from .states import (
    EXCITED,
    GROUND,
    IDENTITY,
    NS1,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    BlochVector,
    DensityMatrix,
    density_matrix,
    fock_space,
    from_bloch,
    thermal_fock,
    thermal_qubit,
    vacuum_fock,
)

LEAKAGE_WARN = 1e-6


def _check_grid(t_grid) -> tuple[float, ...]:
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0 or t[0] < 0 or np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be nonempty, start at t >= 0 and increase strictly")
    return tuple(float(x) for x in t)


# ---------------------------------------------------------------- NMAD


@dataclass(frozen=True)
class NmadConfig:
    omega0: float
    lam: float
    gamma0: float
    t_grid: tuple[float, ...] = field(default=())
    reg_epsilon: float = 1e-9
    initial_state: BlochVector = NS1

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not self.gamma0 > 0:
            raise ValueError("gamma0 must be positive")
        if not 0 < self.reg_epsilon < 0.5:
            raise ValueError("reg_epsilon must lie in (0, 0.5)")
        object.__setattr__(self, "t_grid", _check_grid(self.t_grid))


def g_function(lam: float, gamma0: float, t):
    """Excited-amplitude decay function of a resonant Lorentzian vacuum bath.

    ``l`` is taken complex, so the underdamped case (λ < 2γ₀) turns the
    hyperbolic functions into trigonometric ones without branching.
    """
    t = np.asarray(t, dtype=float)
    l = np.sqrt(complex(lam * lam - 2.0 * gamma0 * lam))
    if abs(l) < 1e-12 * max(lam, 1.0):
        g = np.exp(-lam * t / 2) * (1 + lam * t / 2)
    else:
        # cosh/sinh split into two decaying exponentials so that λ ≫ γ₀ does not overflow
        g = 0.5 * ((1 + lam / l) * np.exp(0.5 * (l - lam) * t)
                   + (1 - lam / l) * np.exp(-0.5 * (l + lam) * t))
    g = np.where(t == 0, 1.0, np.asarray(g, dtype=complex))
    if np.max(np.abs(g.imag), initial=0.0) <= 1e-12:
        g = g.real
    return g if g.ndim else g.item()


def nmad_rates(lam: float, gamma0: float, t, dt: float = 1e-6):
    """Decay rate γ(t) and shift S(t) from ``-2 Ġ/G`` (diagnostic only; singular at G = 0)."""
    t = np.asarray(t, dtype=float)
    g = np.asarray(g_function(lam, gamma0, t), dtype=complex)
    gdot = (np.asarray(g_function(lam, gamma0, t + dt), dtype=complex)
            - np.asarray(g_function(lam, gamma0, np.maximum(t - dt, 0.0)), dtype=complex))
    gdot = gdot / (t + dt - np.maximum(t - dt, 0.0))
    ratio = gdot / g
    return -2 * ratio.real, -2 * ratio.imag


def nmad_state(rho0: np.ndarray, g: complex) -> np.ndarray:
    """Apply the amplitude-damping channel with decoherence amplitude ``g``."""
    p_e = rho0[0, 0].real * abs(g) ** 2
    coh = rho0[0, 1] * np.conj(g)
    return np.array([[p_e, coh], [np.conj(coh), 1.0 - p_e]], dtype=complex)


def nmad_choi(g: complex) -> np.ndarray:
    """Choi matrix ``Σ_ij |i><j| ⊗ Φ(|i><j|)`` of the channel at amplitude ``g``."""
    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1.0
            # linear extension of nmad_state, which is affine on Hermitian inputs
            p_e = e[0, 0] * abs(g) ** 2
            out = np.array([[p_e, e[0, 1] * np.conj(g)], [e[1, 0] * g, np.trace(e) - p_e]])
            choi += kron(e, out)
    return choi


def nmad_fixed_point(reg_epsilon: float) -> np.ndarray:
    return (1 - reg_epsilon) * GROUND + reg_epsilon * EXCITED


def run_nmad(cfg: NmadConfig, quadrature: QuadratureSpec = QuadratureSpec()) -> RunOutput:
    rho0 = nmad_state(from_bloch(cfg.initial_state).mat, 1.0)
    star = nmad_fixed_point(cfg.reg_epsilon)
    gs = np.atleast_1d(g_function(cfg.lam, cfg.gamma0, np.array(cfg.t_grid)))
    records = []
    for t, g in zip(cfg.t_grid, gs):
        rho = density_matrix(nmad_state(rho0, g), (2,))
        delta, entropy, work = qubit_summary(rho, cfg.omega0, quadrature)
        sigma = entropy_production_fixed_point(rho0, rho.mat, star)
        records.append(QuantifierRecord(t, delta, entropy, sigma, work))
    meta = {"model": "nmad", **_flat(asdict(cfg)), "fixed_point": "(1-reg_epsilon)|g><g| + reg_epsilon|e><e|"}
    return RunOutput(records, meta)


# ---------------------------------------------------------------- GAD


@dataclass(frozen=True)
class GadConfig:
    omega0: float
    beta: float
    gamma: float
    t_grid: tuple[float, ...] = field(default=())
    dt: float = 1e-3
    initial_state: BlochVector = NS1

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")
        t = _check_grid(self.t_grid)
        object.__setattr__(self, "t_grid", t)
        spacing = min(np.diff(t)) if len(t) > 1 else np.inf
        if not 0 < self.dt <= spacing + 1e-15:
            raise ValueError("dt must be positive and no larger than the grid spacing")

    @property
    def n_thermal(self) -> float:
        x = self.beta * self.omega0
        return float(np.exp(-x) / -np.expm1(-x))


def _dissipator(l: np.ndarray, rho: np.ndarray) -> np.ndarray:
    ld = l.conj().T
    ldl = ld @ l
    return l @ rho @ ld - 0.5 * (ldl @ rho + rho @ ldl)


def gad_generator(cfg: GadConfig, rho) -> np.ndarray:
    """Right-hand side ``dρ/dt`` of the finite-temperature damping master equation."""
    m = np.asarray(getattr(rho, "mat", rho), dtype=complex)
    h = 0.5 * cfg.omega0 * SIGMA_Z
    n_th = cfg.n_thermal
    return (
        -1j * (h @ m - m @ h)
        + cfg.gamma * (n_th + 1) * _dissipator(SIGMA_MINUS, m)
        + cfg.gamma * n_th * _dissipator(SIGMA_PLUS, m)
    )


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_integrate(f: Callable[[np.ndarray], np.ndarray], y0: np.ndarray, t_grid, dt: float, linear: bool = False):
    """Classical fixed-step RK4 of an autonomous ODE, sampled on ``t_grid``.

    Each interval between samples is covered by ``ceil(Δt/dt)`` equal steps.
    For a linear ``f`` (``linear=True``) one step is the same matrix every
    time; it is formed once by stepping the identity and then applied per step.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    y = np.array(y0, dtype=complex)
    step_maps: dict[float, np.ndarray] = {}
    t = 0.0
    out = []
    for target in t_grid:
        n_steps = int(np.ceil((target - t) / dt - 1e-9))
        if n_steps > 0:
            h = (target - t) / n_steps
            if linear:
                if h not in step_maps:
                    step_maps[h] = rk4_step(f, np.eye(y.size, dtype=complex), h)
                p = step_maps[h]
                for _ in range(n_steps):
                    y = p @ y
            else:
                for _ in range(n_steps):
                    y = rk4_step(f, y, h)
        t = target
        out.append(y.copy())
    return out


def gad_liouvillian(cfg: GadConfig) -> np.ndarray:
    """The generator as a 4x4 matrix on row-major ``vec(ρ)``."""
    cols = []
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = 1.0
        cols.append(gad_generator(cfg, e.reshape(2, 2)).reshape(4))
    return np.column_stack(cols)


def gad_trajectory(cfg: GadConfig) -> list[DensityMatrix]:
    liouv = gad_liouvillian(cfg)
    rho0 = from_bloch(cfg.initial_state).mat.reshape(4)
    states = rk4_integrate(lambda y: liouv @ y, rho0, cfg.t_grid, cfg.dt, linear=True)
    return [density_matrix(y.reshape(2, 2), (2,)) for y in states]


def gad_closed_form(cfg: GadConfig, t: float) -> BlochVector:
    """Exact Bloch vector of the damping master equation at time ``t``."""
    n_th = cfg.n_thermal
    rate = cfg.gamma * (2 * n_th + 1)
    z_inf = -1.0 / (2 * n_th + 1)
    b = cfg.initial_state
    z = z_inf + (b.r_z - z_inf) * np.exp(-rate * t)
    # ρ_eg = (x - iy)/2 picks up e^{-iω0 t}, so x + iy rotates as e^{+iω0 t}
    c = (b.r_x + 1j * b.r_y) * np.exp(-0.5 * rate * t + 1j * cfg.omega0 * t)
    return BlochVector(float(c.real), float(c.imag), float(z))


def gad_steady_state(cfg: GadConfig) -> DensityMatrix:
    return thermal_qubit(cfg.beta, cfg.omega0)


def run_gad(cfg: GadConfig, quadrature: QuadratureSpec = QuadratureSpec()) -> RunOutput:
    states = gad_trajectory(cfg)
    star = gad_steady_state(cfg)
    rho0 = from_bloch(cfg.initial_state).mat
    records = []
    for t, rho in zip(cfg.t_grid, states):
        delta, entropy, work = qubit_summary(rho, cfg.omega0, quadrature)
        sigma = entropy_production_fixed_point(rho0, rho.mat, star)
        records.append(QuantifierRecord(t, delta, entropy, sigma, work))
    meta = {"model": "gad", **_flat(asdict(cfg)), "n_thermal": cfg.n_thermal}
    return RunOutput(records, meta)


# ---------------------------------------------------------------- Jaynes-Cummings


@dataclass(frozen=True)
class JcmConfig:
    omega0: float
    omega_c: float
    beta: float
    g: float
    n_max: int = 32
    t_grid: tuple[float, ...] = field(default=())
    initial_state: BlochVector = NS1

    def __post_init__(self):
        if self.n_max < 4:
            raise ValueError("n_max must be at least 4")
        if self.g < 0:
            raise ValueError("g must be non-negative")
        object.__setattr__(self, "t_grid", _check_grid(self.t_grid))


def jcm_hamiltonian(cfg: JcmConfig) -> np.ndarray:
    fock = fock_space(cfg.n_max)
    eye_f = np.eye(fock.dim)
    return (
        0.5 * cfg.omega0 * kron(SIGMA_Z, eye_f)
        + cfg.omega_c * kron(IDENTITY, fock.number)
        + cfg.g * (kron(SIGMA_PLUS, fock.annihilate) + kron(SIGMA_MINUS, fock.create))
    )


def jcm_excitation_number(n_max: int) -> np.ndarray:
    fock = fock_space(n_max)
    return kron(EXCITED, np.eye(fock.dim)) + kron(IDENTITY, fock.number)


def jcm_bath_state(cfg: JcmConfig) -> tuple[DensityMatrix, float]:
    if np.isinf(cfg.beta):
        return vacuum_fock(cfg.n_max), 0.0
    return thermal_fock(cfg.beta, cfg.omega_c, cfg.n_max)


def jcm_joint_states(cfg: JcmConfig):
    bath, _ = jcm_bath_state(cfg)
    rho0 = kron(from_bloch(cfg.initial_state).mat, bath.mat)
    prop = SpectralPropagator(jcm_hamiltonian(cfg), rho0)
    for t in cfg.t_grid:
        yield t, prop.state(t)


def run_jcm(cfg: JcmConfig, quadrature: QuadratureSpec = QuadratureSpec()) -> RunOutput:
    bath, tail = jcm_bath_state(cfg)
    dims = (2, cfg.n_max + 1)
    top = np.zeros(cfg.n_max + 1)
    top[-1] = 1.0
    top_proj = kron(IDENTITY, np.diag(top))
    leakage = 0.0
    records = []
    for t, joint in jcm_joint_states(cfg):
        rec, _ = joint_record(t, joint, bath, dims, cfg.omega0, quadrature)
        records.append(rec)
        leakage = max(leakage, float(np.real(np.trace(top_proj @ joint))))
    meta = {"model": "jcm", **_flat(asdict(cfg)), "truncation_tail_weight": tail, "max_top_fock_population": leakage}
    if leakage > LEAKAGE_WARN:
        meta["warning"] = f"population of |n_max> reached {leakage:.3e}; increase n_max"
    return RunOutput(records, meta)
