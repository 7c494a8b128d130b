import numpy as np
import pytest

from oqs_interplay.numerics import kron, partial_trace, unitarity_defect
from oqs_interplay.quantifiers import closed_form_delta, ergotropy_qubit
from oqs_interplay.spin_spin import (
    CentralSpinConfig,
    CollisionConfig,
    SpectralPropagator,
    central_spin_bath_state,
    central_spin_hamiltonian,
    collision_joint_states,
    collision_unitary,
    markovian_fixed_point,
    one_collision_superoperator,
    partial_swap_unitary,
    run_central_spin,
    run_collision,
    swap_generator,
)
from oqs_interplay.states import NS1, SIGMA_Z, from_bloch

FIG2 = dict(omega_s=1.5, omega_r=1.0, beta=50.0, g_sr=0.5, tau=0.5, theta=0.98 * np.pi / 2)
NS1_DELTA = closed_form_delta(NS1.norm)
NS1_ENTROPY = 0.0019037594490128574  # -Σ p ln p with p = (1 ± |r|)/2


def trace_distance(a, b):
    return 0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b)))


# ---------------------------------------------------------------- collision


def test_config_validation():
    with pytest.raises(ValueError, match="theta out of range"):
        CollisionConfig(**{**FIG2, "theta": 2.0}, n_collisions=5)
    with pytest.raises(ValueError):
        CollisionConfig(**{**FIG2, "tau": 0.0}, n_collisions=5)
    with pytest.raises(ValueError):
        CollisionConfig(**FIG2, n_collisions=0)


def test_collision_unitary_cases():
    cfg = CollisionConfig(**{**FIG2, "g_sr": 0.0}, n_collisions=1)
    local = lambda w: np.diag(np.exp(-1j * 0.5 * w * np.array([1, -1]) * cfg.tau))
    assert np.allclose(collision_unitary(cfg), kron(local(1.5), local(1.0)), atol=1e-14)
    cfg = CollisionConfig(**{**FIG2, "tau": 1e-300}, n_collisions=1)
    assert np.allclose(collision_unitary(cfg), np.eye(4))


def test_collision_unitary_conserves_excitations():
    u = collision_unitary(CollisionConfig(**FIG2, n_collisions=1))
    n_ex = kron(SIGMA_Z, np.eye(2)) + kron(np.eye(2), SIGMA_Z)
    assert np.max(np.abs(u @ n_ex - n_ex @ u)) <= 1e-10
    assert unitarity_defect(u) <= 1e-10


def test_swap_generator_is_swap():
    swap = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            swap[2 * j + i, 2 * i + j] = 1
    assert np.array_equal(swap_generator(), swap.astype(complex))


def test_partial_swap_limits():
    assert np.allclose(partial_swap_unitary(0.0), np.eye(4))
    assert np.allclose(partial_swap_unitary(np.pi / 2), -1j * swap_generator(), atol=1e-15)
    assert unitarity_defect(partial_swap_unitary(0.7)) <= 1e-12
    with pytest.raises(ValueError):
        partial_swap_unitary(2.0)


def test_no_coupling_keeps_records_constant():
    out = run_collision(CollisionConfig(**{**FIG2, "g_sr": 0.0}, n_collisions=10))
    first = out[0]
    for rec in out:
        assert rec.delta == pytest.approx(first.delta, abs=1e-12)
        assert rec.entropy == pytest.approx(first.entropy, abs=1e-12)
        assert rec.ergotropy == pytest.approx(first.ergotropy, abs=1e-12)
        assert abs(rec.sigma) <= 1e-12


def test_record_layout():
    out = run_collision(CollisionConfig(**FIG2, n_collisions=3))
    assert [r.abscissa for r in out] == [0.0, 1.0, 2.0, 3.0]
    assert out[0].delta == pytest.approx(NS1_DELTA, abs=1e-10)
    assert out[0].entropy == pytest.approx(NS1_ENTROPY, abs=1e-12)
    assert out[0].ergotropy == pytest.approx(ergotropy_qubit(NS1, 1.5), abs=1e-12)
    assert abs(out[0].sigma) <= 1e-12


def _markovian(n):
    return CollisionConfig(**{**FIG2, "theta": 0.0}, n_collisions=n)


def test_markovian_engine_equals_iterated_map():
    cfg = _markovian(60)
    sup = one_collision_superoperator(cfg)
    vec = from_bloch(NS1).mat.reshape(4)
    for n, joint in collision_joint_states(cfg):
        if n > 0:
            vec = sup @ vec
        rho_s = partial_trace(joint, [2, 2], [0])
        assert np.max(np.abs(rho_s - vec.reshape(2, 2))) <= 1e-10


def test_markovian_approach_to_fixed_point():
    cfg = _markovian(150)
    star = markovian_fixed_point(cfg).mat
    sup = one_collision_superoperator(cfg)
    assert np.allclose((sup @ star.reshape(4)).reshape(2, 2), star, atol=1e-14)
    dists = [trace_distance(partial_trace(j, [2, 2], [0]), star) for n, j in collision_joint_states(cfg) if n > 0]
    assert all(b <= a + 1e-15 for a, b in zip(dists, dists[1:]))
    assert dists[-1] < 1e-6
    # contractivity: the distance between successive states never grows
    states = [partial_trace(j, [2, 2], [0]) for _, j in collision_joint_states(cfg)]
    steps = [trace_distance(a, b) for a, b in zip(states, states[1:])]
    assert all(b <= a + 1e-15 for a, b in zip(steps, steps[1:]))
    assert steps[-1] < 1e-6


def test_markovian_entropy_production_nonnegative():
    out = run_collision(_markovian(100))
    assert min(out.series("sigma")) >= -1e-9


def test_collision_run_is_deterministic():
    cfg = CollisionConfig(**FIG2, n_collisions=20)
    assert [r.as_tuple() for r in run_collision(cfg)] == [r.as_tuple() for r in run_collision(cfg)]


# ---------------------------------------------------------------- central spin


def test_central_spin_single_bath_spin():
    w0, w, eps = 1.5, 0.8, 0.3
    cfg = CentralSpinConfig(w0, w, 1.0, eps, 1, (0.0,))
    # basis |e,up>, |e,down>, |g,up>, |g,down>
    expected = np.diag([w0 / 2 + w / 2, w0 / 2 - w / 2, -w0 / 2 + w / 2, -w0 / 2 - w / 2]).astype(complex)
    expected[1, 2] = expected[2, 1] = eps
    assert np.allclose(central_spin_hamiltonian(cfg), expected, atol=1e-15)


def test_central_spin_hamiltonian_structure():
    cfg = CentralSpinConfig(1.5, 1.0, 1.0, 0.0, 6, (0.0,))
    h = central_spin_hamiltonian(cfg)
    assert np.count_nonzero(h - np.diag(np.diag(h))) == 0
    h = central_spin_hamiltonian(CentralSpinConfig(1.5, 1.0, 1.0, 0.5, 6, (0.0,)))
    assert np.max(np.abs(h - h.conj().T)) == 0.0


def test_central_spin_initial_record():
    cfg = CentralSpinConfig(1.5, 1.0, 100.0, 0.5, 50, (0.0, 1.0))
    rec = run_central_spin(cfg)[0]
    assert rec.delta == pytest.approx(NS1_DELTA, abs=1e-10)
    assert rec.entropy == pytest.approx(NS1_ENTROPY, abs=1e-10)
    assert rec.ergotropy == pytest.approx(0.75 * (-0.66 + NS1.norm), abs=1e-10)
    assert abs(rec.sigma) <= 1e-12


def test_central_spin_uncoupled_is_static():
    cfg = CentralSpinConfig(1.5, 1.0, 2.0, 0.0, 8, tuple(np.linspace(0, 10, 7)))
    out = run_central_spin(cfg)
    for name in ("delta", "entropy", "ergotropy"):
        assert np.ptp(out.series(name)) <= 1e-12
    assert np.max(np.abs(out.series("sigma"))) <= 1e-12


def test_central_spin_conservation_small_bath():
    cfg = CentralSpinConfig(1.5, 1.0, 3.0, 0.5, 10, tuple(np.linspace(0, 30, 31)))
    h = central_spin_hamiltonian(cfg)
    rho0 = kron(from_bloch(NS1).mat, central_spin_bath_state(cfg).mat)
    prop = SpectralPropagator(h, rho0)
    e0, p0 = np.trace(rho0 @ h).real, np.trace(rho0 @ rho0).real
    for t in cfg.t_grid:
        rho = prop.state(t)
        assert abs(np.trace(rho @ h).real - e0) <= 1e-8
        assert abs(np.trace(rho @ rho).real - p0) <= 1e-8


def test_spectral_propagator_matches_direct_unitary():
    cfg = CentralSpinConfig(1.5, 1.0, 3.0, 0.5, 4, (0.0,))
    h = central_spin_hamiltonian(cfg)
    rho0 = kron(from_bloch(NS1).mat, central_spin_bath_state(cfg).mat)
    import scipy.linalg

    u = scipy.linalg.expm(-1j * h * 2.3)
    assert np.allclose(SpectralPropagator(h, rho0).state(2.3), u @ rho0 @ u.conj().T, atol=1e-12)
