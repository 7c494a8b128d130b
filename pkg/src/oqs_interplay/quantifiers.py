"""Non-classical volume, entropies, entropy production and ergotropy."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numerics import LOG_FLOOR, as_matrix, eigh, partial_trace
from .states import SIGMA_X, SIGMA_Y, SIGMA_Z, BlochVector, InvalidStateError, to_bloch

SQRT3 = np.sqrt(3.0)
SUPPORT_TOL = 1e-12
RANK_TOL = 1e-14


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre nodes in cos(theta) times a uniform grid in phi."""

    n_theta: int = 64
    n_phi: int = 128

    def __post_init__(self):
        if self.n_theta < 8:
            raise ValueError(f"n_theta must be >= 8, got {self.n_theta}")
        if self.n_phi < 16:
            raise ValueError(f"n_phi must be >= 16, got {self.n_phi}")


# ---------------------------------------------------------------- Wigner / delta


def wigner_kernel(theta: float, phi: float) -> np.ndarray:
    """Spin-1/2 Stratonovich-Weyl kernel, normalized so that ``∫ Δ dΩ = I``."""
    n = (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
    return (np.eye(2) + SQRT3 * (n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z)) / (4 * np.pi)


def wigner_function(rho, theta, phi) -> np.ndarray | float:
    """``W = Tr[ρ Δ(θ, φ)]``; broadcasts over array-valued angles."""
    m = as_matrix(rho)
    if m.shape != (2, 2):
        raise ValueError(f"spin Wigner function needs a qubit state, got dimension {m.shape[0]}")
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    n = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)
    return _wigner_on_directions(m, n)


def _wigner_on_directions(m: np.ndarray, n: np.ndarray):
    # Tr[ρ Δ] contracted directly against the kernel's Pauli components
    paulis = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
    kernel = (np.eye(2)[None] + SQRT3 * np.einsum("...k,kij->...ij", n, paulis)) / (4 * np.pi)
    w = np.einsum("ij,...ji->...", m, kernel)
    if np.max(np.abs(np.imag(w)), initial=0.0) > 1e-12:
        raise ValueError("Wigner function has an imaginary part; input is not Hermitian")
    w = np.real(w)
    return float(w) if w.ndim == 0 else w


def sphere_nodes(q: QuadratureSpec):
    """Fixed-frame nodes ``(theta, phi, weight)`` with weights summing to 4π."""
    u, wu = np.polynomial.legendre.leggauss(q.n_theta)
    phi = 2 * np.pi * np.arange(q.n_phi) / q.n_phi
    theta = np.arccos(u)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    weights = np.outer(wu, np.full(q.n_phi, 2 * np.pi / q.n_phi))
    return tt, pp, weights


def _frame(axis: np.ndarray) -> np.ndarray:
    """Orthonormal columns (e1, e2, axis)."""
    z = axis / np.linalg.norm(axis)
    trial = np.array([1.0, 0.0, 0.0]) if abs(z[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    x = trial - (trial @ z) * z
    x /= np.linalg.norm(x)
    return np.column_stack([x, np.cross(z, x), z])


def _aligned_nodes(r: np.ndarray, q: QuadratureSpec):
    """Unit directions and weights with the pole along ``r``.

    The cos(theta) range is split at the latitude where W changes sign, so
    each Gauss-Legendre panel sees a smooth integrand.
    """
    r_norm = float(np.linalg.norm(r))
    rot = _frame(r) if r_norm > 0 else np.eye(3)
    a = SQRT3 * r_norm
    if a > 1.0:
        kink = -1.0 / a
        n_lo = max(4, q.n_theta // 2)
        panels = [(-1.0, kink, n_lo), (kink, 1.0, max(4, q.n_theta - n_lo))]
    else:
        panels = [(-1.0, 1.0, q.n_theta)]
    us, ws = [], []
    for lo, hi, k in panels:
        x, w = np.polynomial.legendre.leggauss(k)
        us.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
        ws.append(0.5 * (hi - lo) * w)
    u, wu = np.concatenate(us), np.concatenate(ws)
    phi = 2 * np.pi * np.arange(q.n_phi) / q.n_phi
    s = np.sqrt(np.clip(1 - u**2, 0.0, None))
    local = np.stack(
        [s[:, None] * np.cos(phi)[None, :], s[:, None] * np.sin(phi)[None, :], np.broadcast_to(u[:, None], (u.size, q.n_phi))],
        axis=-1,
    )
    n = local @ rot.T
    weights = np.outer(wu, np.full(q.n_phi, 2 * np.pi / q.n_phi))
    return n, weights


def nonclassical_volume(rho, q: QuadratureSpec = QuadratureSpec(), aligned: bool = True) -> float:
    """``δ = ∫|W| dΩ - 1`` by quadrature over the sphere.

    With ``aligned=False`` a fixed-frame tensor grid is used; that converges
    only algebraically because |W| has a kink, and is kept for comparison.
    """
    m = as_matrix(rho)
    if aligned:
        r = to_bloch(m).as_array()
        n, weights = _aligned_nodes(r, q)
        w = _wigner_on_directions(m, n)
    else:
        tt, pp, weights = sphere_nodes(q)
        w = wigner_function(m, tt, pp)
    # pairwise summation keeps the result independent of evaluation order
    delta = float(np.sum((weights * np.abs(w)).ravel())) - 1.0
    if delta < -1e-9:
        raise ArithmeticError(f"quadrature gave delta = {delta:.3e}; increase the node count")
    return max(delta, 0.0)


def closed_form_delta(r_norm: float) -> float:
    """Exact non-classical volume of a qubit with Bloch radius ``r_norm``."""
    if not 0.0 <= r_norm <= 1.0 + 1e-9:
        raise ValueError(f"Bloch radius must lie in [0, 1], got {r_norm}")
    a = SQRT3 * r_norm
    if a <= 1.0:
        return 0.0
    return (a + 1.0 / a) / 2.0 - 1.0


# ---------------------------------------------------------------- entropies


def _entropy_from_eigenvalues(lam: np.ndarray) -> float:
    lam = lam[lam > 0]
    return float(max(-np.sum(lam * np.log(lam)), 0.0))


def von_neumann_entropy(rho) -> float:
    """``-Tr ρ ln ρ`` in nats, with ``0 ln 0 = 0``."""
    return _entropy_from_eigenvalues(eigh(as_matrix(rho)).eigenvalues)


def _log_on_support(sigma: np.ndarray, rho: np.ndarray, floor: float, support_tol: float):
    """Return ``Tr[ρ ln σ]``, or ``-inf`` when ρ leaks out of σ's support."""
    dec = eigh(sigma)
    lam, v = dec.eigenvalues, dec.eigenvectors
    weights = np.real(np.einsum("ji,jk,ki->i", v.conj(), rho, v))
    outside = lam <= floor
    if np.sum(np.abs(weights[outside])) > support_tol:
        return -np.inf
    inside = ~outside
    return float(np.sum(weights[inside] * np.log(lam[inside])))


def _support_log(sigma: np.ndarray, floor: float):
    """Matrix log restricted to the support, and the projector onto the kernel."""
    dec = eigh(sigma)
    lam, v = dec.eigenvalues, dec.eigenvectors
    inside = lam > floor
    log_lam = np.where(inside, np.log(np.where(inside, lam, 1.0)), 0.0)
    null = v[:, ~inside]
    return (v * log_lam) @ v.conj().T, null @ null.conj().T


def relative_entropy(rho, sigma, floor: float = LOG_FLOOR, support_tol: float = SUPPORT_TOL) -> float:
    """``S(ρ‖σ) = Tr[ρ ln ρ] - Tr[ρ ln σ]``; ``inf`` if supports are incompatible."""
    a, b = as_matrix(rho), as_matrix(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    cross = _log_on_support(b, a, floor, support_tol)
    if np.isinf(cross):
        return np.inf
    return max(-von_neumann_entropy(a) - cross, 0.0)


def _two_party_dims(rho_ab, dims: Sequence[int] | None) -> tuple[int, ...]:
    if dims is None:
        dims = getattr(rho_ab, "subsystem_dims", None)
    if dims is None or len(dims) < 2:
        raise ValueError("a bipartite state needs at least two subsystem dimensions")
    return tuple(int(d) for d in dims)


def _bipartition(dims: tuple[int, ...], split: int) -> tuple[int, int]:
    if not 1 <= split < len(dims):
        raise ValueError(f"split must lie in 1..{len(dims) - 1}, got {split}")
    return int(np.prod(dims[:split])), int(np.prod(dims[split:]))


def mutual_information(rho_ab, split: int = 1, dims: Sequence[int] | None = None) -> float:
    """``I(A:B) = S(A) + S(B) - S(AB)`` across the cut before subsystem ``split``."""
    dims = _two_party_dims(rho_ab, dims)
    d_a, d_b = _bipartition(dims, split)
    m = as_matrix(rho_ab)
    rho_a = partial_trace(m, [d_a, d_b], [0])
    rho_b = partial_trace(m, [d_a, d_b], [1])
    return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(m)


@dataclass(frozen=True)
class EntropyProduction:
    """Joint-state entropy production and its two-term decomposition."""

    sigma: float
    mutual_information: float
    environment_relative_entropy: float


def entropy_production_joint(
    rho_se,
    rho_e_initial,
    split: int = 1,
    dims: Sequence[int] | None = None,
    agreement_tol: float = 1e-8,
    floor: float = LOG_FLOOR,
    support_tol: float = SUPPORT_TOL,
) -> EntropyProduction:
    """``Σ = S(ρ'_SE ‖ ρ'_S ⊗ ρ_E)`` checked against ``I(S:E) + S(ρ'_E‖ρ_E)``.

    The log of the product reference is taken factor by factor,
    ``ln(A ⊗ B) = ln A ⊗ I + I ⊗ ln B``, so reference spectra spanning many
    decades (cold baths) do not lose their small eigenvalues to round-off.
    """
    dims = _two_party_dims(rho_se, dims)
    d_s, d_e = _bipartition(dims, split)
    m = as_matrix(rho_se)
    env0 = as_matrix(rho_e_initial)
    if env0.shape != (d_e, d_e):
        raise ValueError(f"initial environment has dimension {env0.shape[0]}, expected {d_e}")
    rho_s = partial_trace(m, [d_s, d_e], [0])
    rho_e = partial_trace(m, [d_s, d_e], [1])

    # compact route: Tr[ρ ln ρ] - Tr[ρ ln(ρ_S ⊗ ρ_E)] traced in the joint space
    ln_s, null_s = _support_log(rho_s, floor)
    ln_e, null_e = _support_log(env0, floor)
    if np.real(np.trace(null_e @ rho_e)) > support_tol or np.real(np.trace(null_s @ rho_s)) > support_tol:
        return EntropyProduction(np.inf, mutual_information(m, 1, (d_s, d_e)), np.inf)
    ln_ref = np.kron(ln_s, np.eye(d_e)) + np.kron(np.eye(d_s), ln_e)
    s_joint = von_neumann_entropy(m)
    compact = -s_joint - float(np.real(np.sum(m * ln_ref.T)))

    # decomposition route
    s_s, s_e = von_neumann_entropy(rho_s), von_neumann_entropy(rho_e)
    info = s_s + s_e - s_joint
    env_rel = relative_entropy(rho_e, env0, floor, support_tol)
    if abs(compact - (info + env_rel)) > agreement_tol * max(1.0, abs(compact)):
        raise ArithmeticError(
            f"entropy production routes disagree: {compact:.15g} vs {info + env_rel:.15g}"
        )
    return EntropyProduction(float(compact), float(info), float(env_rel))


def entropy_production_fixed_point(rho_initial, rho_evolved, rho_star, rank_tol: float = RANK_TOL) -> float:
    """``Σ = S(ρ‖ρ*) - S(ρ'‖ρ*)`` for maps with a global fixed point ``ρ*``."""
    a, b, star = as_matrix(rho_initial), as_matrix(rho_evolved), as_matrix(rho_star)
    if not a.shape == b.shape == star.shape:
        raise ValueError("states must share one dimension")
    lam_min = eigh(star).eigenvalues[0]
    if lam_min <= rank_tol:
        raise ValueError(
            f"fixed point is rank deficient (min eigenvalue {lam_min:.3e}); "
            "regularize it, e.g. (1-eps)|g><g| + eps|e><e|"
        )
    return relative_entropy(a, star) - relative_entropy(b, star)


# ---------------------------------------------------------------- ergotropy


def passive_state(rho, h) -> np.ndarray:
    """Populations sorted high-to-low placed on energies sorted low-to-high."""
    m, hm = as_matrix(rho), as_matrix(h)
    if m.shape != hm.shape:
        raise ValueError(f"dimension mismatch: {m.shape} vs {hm.shape}")
    r = eigh(m).eigenvalues
    r = np.sort(r, kind="stable")[::-1]
    energies = eigh(hm)
    v = energies.eigenvectors
    return (v * r) @ v.conj().T


def passive_energy(rho, h) -> float:
    r = np.sort(eigh(as_matrix(rho)).eigenvalues)[::-1]
    eps = eigh(as_matrix(h)).eigenvalues
    return float(r @ eps)


def ergotropy_general(rho, h) -> float:
    m, hm = as_matrix(rho), as_matrix(h)
    energy = float(np.real(np.trace(m @ hm)))
    return max(energy - passive_energy(m, hm), 0.0)


def ergotropy_qubit(b: BlochVector, omega0: float) -> float:
    return max(0.5 * omega0 * (b.r_z + b.norm), 0.0)


# ---------------------------------------------------------------- helpers


def qubit_summary(rho, omega0: float, q: QuadratureSpec = QuadratureSpec()) -> tuple[float, float, float]:
    """``(δ, S, 𝒲)`` of a reduced qubit state with Hamiltonian ``(ω0/2)σ_z``."""
    m = as_matrix(rho)
    if m.shape != (2, 2):
        raise InvalidStateError(f"expected a qubit, got dimension {m.shape[0]}")
    delta = nonclassical_volume(m, q)
    entropy = von_neumann_entropy(m)
    work = ergotropy_general(m, 0.5 * omega0 * SIGMA_Z)
    return delta, entropy, work
