import numpy as np
import pytest

from conftest import random_state, small_config, zero_si
from fdhybf.channels import draw_channel_set
from fdhybf.covariance import (
    assemble_covariances,
    assemble_covariances_from_t,
    compute_wsr,
    partner_of,
    transmit_covariance,
)
from fdhybf.errors import ConditioningError, DivergenceError, PencilSizeError
from fdhybf.linalg import cholesky_logdet, hermitian_gevd, hermitianize, kron, phase_project, ridge, unvec
from fdhybf.optimizer import (
    SigmaPair,
    SolverOptions,
    _bisect_power,
    analog_beamformer_pencil,
    bisect_multiplier,
    compute_gradients,
    compute_sigma_matrices,
    run_hybf,
    solve_transmit_block,
    update_analog_beamformer,
    update_analog_combiner,
    update_digital_beamformer,
    update_power_allocation,
)


def subspace_gap(u, v):
    """Largest principal-angle sine between two orthonormalized spans."""
    qu, _ = np.linalg.qr(u)
    qv, _ = np.linalg.qr(v)
    sv = np.linalg.svd(qu.conj().T @ qv, compute_uv=False)
    return float(np.sqrt(max(0.0, 1.0 - np.min(sv) ** 2)))


# ---------------------------------------------------------------- gradients


def receiver_rate_sum(channels, t_covs, noise, analog_rx, weights, receivers):
    ws = assemble_covariances_from_t(channels, t_covs, noise, analog_rx)
    total = 0.0
    for m in receivers:
        total += weights[m] * (
            cholesky_logdet(ridge(ws.r[m])) - cholesky_logdet(ridge(ws.rbar[m]))
        )
    return total


def fd_hermitian_gradient(fun, t, step=1e-5):
    """Central-difference Hermitian matrix gradient: df = Tr(G dT)."""
    n = t.shape[0]
    grad = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            if i == j:
                delta = np.zeros((n, n), dtype=complex)
                delta[i, i] = 1.0
                grad[i, i] = (fun(t + step * delta) - fun(t - step * delta)) / (2 * step)
            else:
                d_re = np.zeros((n, n), dtype=complex)
                d_re[i, j] = d_re[j, i] = 1.0
                d_im = np.zeros((n, n), dtype=complex)
                d_im[i, j] = 1.0j
                d_im[j, i] = -1.0j
                re = (fun(t + step * d_re) - fun(t - step * d_re)) / (4 * step)
                im = (fun(t + step * d_im) - fun(t - step * d_im)) / (4 * step)
                grad[i, j] = re + 1.0j * im
                grad[j, i] = re - 1.0j * im
    return grad


def test_gradients_empty_cross_sums_for_single_pair():
    cfg = small_config(K=1, n_tx=3, n_rx=3, m_tx=2, m_rx=2)
    channels = draw_channel_set(np.random.default_rng(0), cfg)
    state = random_state(cfg, np.random.default_rng(1))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    for a in range(2):
        np.testing.assert_array_equal(grads[a].a_hat, 0.0)


def test_gradients_b_hat_vanishes_without_loopback():
    cfg = small_config(K=1, n_tx=3, n_rx=3, m_tx=2, m_rx=2)
    channels = zero_si(draw_channel_set(np.random.default_rng(2), cfg))
    state = random_state(cfg, np.random.default_rng(3))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    for a in range(2):
        np.testing.assert_array_equal(grads[a].b_hat, 0.0)
        # with loopback present the sum is exactly the node's own congruence
    channels2 = draw_channel_set(np.random.default_rng(2), cfg)
    ws2 = assemble_covariances(channels2, state, cfg.sigma2)
    grads2 = compute_gradients(channels2, ws2, state, cfg.weights)
    for a in range(2):
        from fdhybf.linalg import inv_psd

        delta = inv_psd(ws2.rbar[a]) - inv_psd(ws2.r[a])
        f = state.analog_rx[a]
        h = channels2.get(a, a)
        expected = cfg.weights[a] * (h.conj().T @ f.conj().T @ delta @ f @ h)
        np.testing.assert_allclose(grads2[a].b_hat, hermitianize(expected), atol=1e-12)


def test_gradients_match_finite_differences():
    cfg = small_config(K=2, n_tx=4, n_rx=4, m_tx=2, m_rx=2, d=1,
                       weights=[1.0, 0.7, 1.3, 0.9], sigma2=0.5)
    rng = np.random.default_rng(4)
    channels = draw_channel_set(rng, cfg)
    state = random_state(cfg, rng)
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    t_covs = [transmit_covariance(state, b) for b in range(4)]
    half = 2
    for a in range(4):
        srv = partner_of(a, 4)
        opp = range(half, 4) if a < half else range(0, half)
        own = range(0, half) if a < half else range(half, 4)

        def partial_sum(receivers):
            def fun(t_a):
                covs = list(t_covs)
                covs[a] = t_a
                return receiver_rate_sum(channels, covs, cfg.sigma2,
                                         state.analog_rx, cfg.weights, receivers)
            return fun

        fd_a = fd_hermitian_gradient(partial_sum([m for m in opp if m != srv]), t_covs[a])
        fd_b = fd_hermitian_gradient(partial_sum(list(own)), t_covs[a])
        assert np.linalg.norm(fd_a + grads[a].a_hat) <= 1e-3 * max(np.linalg.norm(grads[a].a_hat), 1e-6)
        assert np.linalg.norm(fd_b + grads[a].b_hat) <= 1e-3 * max(np.linalg.norm(grads[a].b_hat), 1e-6)


def test_gradients_are_psd():
    cfg = small_config()
    channels = draw_channel_set(np.random.default_rng(5), cfg)
    state = random_state(cfg, np.random.default_rng(6))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    for gp in compute_gradients(channels, ws, state, cfg.weights):
        assert np.linalg.eigvalsh(gp.a_hat)[0] >= -1e-10
        assert np.linalg.eigvalsh(gp.b_hat)[0] >= -1e-10


# ------------------------------------------------------- digital beamformer


def test_digital_update_scalar_is_unity():
    cfg = small_config(K=1, n_tx=1, n_rx=1, m_tx=1, m_rx=1, d=1)
    channels = draw_channel_set(np.random.default_rng(7), cfg)
    state = random_state(cfg, np.random.default_rng(8))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    v = update_digital_beamformer(0, channels, ws, grads, state)
    assert abs(v[0, 0]) == pytest.approx(1.0, abs=1e-12)


def test_digital_update_svd_oracle_interference_free():
    cfg = small_config(K=1, n_tx=4, n_rx=4, m_tx=4, m_rx=4, d=2, sigma2=0.3)
    channels = zero_si(draw_channel_set(np.random.default_rng(9), cfg))
    state = random_state(cfg, np.random.default_rng(10))
    for a in range(2):
        state.analog_tx[a] = np.eye(4, dtype=complex)
        state.analog_rx[a] = np.eye(4, dtype=complex)
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    v = update_digital_beamformer(0, channels, ws, grads, state)
    # oracle: top right singular directions of the noise-whitened channel
    h = channels.get(1, 0)
    _, _, vh = np.linalg.svd(h / np.sqrt(cfg.sigma2[1]))
    assert subspace_gap(v, vh[:2].conj().T) < 1e-6


def test_digital_update_matches_bruteforce_pencil():
    cfg = small_config()
    channels = draw_channel_set(np.random.default_rng(11), cfg)
    state = random_state(cfg, np.random.default_rng(12))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    from fdhybf.optimizer import _transmit_pencil

    for a in range(cfg.num_nodes):
        v = update_digital_beamformer(a, channels, ws, grads, state)
        a_side, b0, gram = _transmit_pencil(a, channels, ws, grads, state)
        b_side = b0 + state.multiplier[a] * gram
        vals, vecs = np.linalg.eig(np.linalg.inv(ridge(b_side)) @ a_side)
        top = vecs[:, np.argsort(vals.real)[::-1][: cfg.d[a]]]
        assert subspace_gap(v, top) < 1e-6
        np.testing.assert_allclose(np.linalg.norm(v, axis=0), 1.0, atol=1e-12)


def test_gevd_scale_invariance_of_selected_subspace():
    cfg = small_config(n_tx=6, n_rx=6, m_tx=4, m_rx=4, d=2)
    channels = draw_channel_set(np.random.default_rng(13), cfg)
    state = random_state(cfg, np.random.default_rng(14))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    from fdhybf.optimizer import _transmit_pencil

    a_side, b0, gram = _transmit_pencil(0, channels, ws, grads, state)
    b_side = hermitianize(b0 + gram)
    base = hermitian_gevd(a_side, b_side, 2).eigvecs
    scaled = hermitian_gevd(a_side, 3.7 * b_side, 2).eigvecs
    assert subspace_gap(base, scaled) < 1e-8


# -------------------------------------------------------- analog beamformer


def test_analog_update_single_element_is_one():
    cfg = small_config(K=1, n_tx=1, n_rx=1, m_tx=1, m_rx=1, d=1)
    channels = draw_channel_set(np.random.default_rng(15), cfg)
    state = random_state(cfg, np.random.default_rng(16))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    g = update_analog_beamformer(0, channels, ws, grads, state)
    assert abs(g[0, 0]) == pytest.approx(1.0, abs=1e-12)


def test_analog_update_matches_dense_pencil_oracle():
    import scipy.linalg

    cfg = small_config(K=2, n_tx=6, n_rx=6, m_tx=3, m_rx=3, d=2, sigma2=0.3)
    channels = draw_channel_set(np.random.default_rng(2), cfg)
    from fdhybf.optimizer import initialize_state

    state = initialize_state(channels, cfg, np.random.default_rng(3))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    for a in range(cfg.num_nodes):
        served, x, vv, penal = analog_beamformer_pencil(a, channels, ws, grads, state)
        a_side = kron(hermitianize(served.T), x)
        b_side = kron(hermitianize(vv.T), penal)
        _, vecs = scipy.linalg.eigh(a_side, ridge(b_side))
        dense = phase_project(unvec(vecs[:, -1], 6, 3))
        fact = update_analog_beamformer(a, channels, ws, grads, state)
        rot = dense[0, 0] / fact[0, 0]
        assert np.max(np.abs(dense - rot * fact)) < 1e-4


def test_analog_update_identity_b_side_oracle():
    # zero gradients and unitary effective digital stage make the pencil's
    # B side the identity; the result is the dominant eigenvector of A
    cfg = small_config(K=1, n_tx=3, n_rx=3, m_tx=3, m_rx=3, d=3, sigma2=0.4)
    channels = zero_si(draw_channel_set(np.random.default_rng(17), cfg))
    state = random_state(cfg, np.random.default_rng(18))
    rng = np.random.default_rng(19)
    for a in range(2):
        z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        q, _ = np.linalg.qr(z)
        state.digital_tx[a] = q
        state.stream_power[a] = np.eye(3)
        state.multiplier[a] = 1.0
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    np.testing.assert_array_equal(grads[0].a_hat, 0.0)
    np.testing.assert_array_equal(grads[0].b_hat, 0.0)
    served, x, vv, penal = analog_beamformer_pencil(0, channels, ws, grads, state)
    np.testing.assert_allclose(vv, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(penal, np.eye(3), atol=1e-12)
    a_side = kron(hermitianize(served.T), x)
    _, vecs = np.linalg.eigh(a_side)
    dense = phase_project(unvec(vecs[:, -1], 3, 3))
    fact = update_analog_beamformer(0, channels, ws, grads, state)
    rot = dense[0, 0] / fact[0, 0]
    assert np.max(np.abs(dense - rot * fact)) < 1e-6


def test_analog_update_unit_modulus_and_size_cap():
    cfg = small_config()
    channels = draw_channel_set(np.random.default_rng(20), cfg)
    state = random_state(cfg, np.random.default_rng(21))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    g = update_analog_beamformer(0, channels, ws, grads, state)
    np.testing.assert_allclose(np.abs(g), 1.0, atol=4e-16)
    with pytest.raises(PencilSizeError):
        update_analog_beamformer(0, channels, ws, grads, state,
                                 SolverOptions(max_kron_dim=4))


# ---------------------------------------------------------- analog combiner


def test_combiner_degenerate_pencil_deterministic():
    from fdhybf.covariance import CovarianceWorkspace

    base = np.eye(4, dtype=complex) * 0.7
    ws = CovarianceWorkspace(
        r=[np.eye(2, dtype=complex)], rbar=[np.eye(2, dtype=complex)],
        s=[np.zeros((2, 2), dtype=complex)], r_ant=[base], rbar_ant=[base])
    f1 = update_analog_combiner(0, ws)
    f2 = update_analog_combiner(0, ws)
    np.testing.assert_array_equal(f1, f2)
    assert f1.shape == (2, 4)


def test_combiner_rank_one_signal_oracle():
    from fdhybf.covariance import CovarianceWorkspace

    rng = np.random.default_rng(22)
    u = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    u /= np.linalg.norm(u)
    rbar = np.eye(4, dtype=complex)
    r = rbar + 5.0 * np.outer(u, u.conj())
    ws = CovarianceWorkspace(
        r=[np.eye(2, dtype=complex)], rbar=[np.eye(2, dtype=complex)],
        s=[np.zeros((2, 2), dtype=complex)], r_ant=[r], rbar_ant=[rbar])
    top = hermitian_gevd(r, rbar, 1).eigvecs[:, 0]
    cos = abs(top.conj() @ u)
    assert cos == pytest.approx(1.0, abs=1e-10)
    f = update_analog_combiner(0, ws)
    np.testing.assert_allclose(np.abs(f), 1.0, atol=4e-16)
    expected = phase_project(u.conj()[None, :])[0]
    rot = expected[0] / f[0, 0]  # eigenvectors carry an arbitrary global phase
    np.testing.assert_allclose(rot * f[0], expected, atol=1e-8)


# ------------------------------------------------------------ sigma and power


def test_sigma_matrices_scalar_case():
    cfg = small_config(K=1, n_tx=1, n_rx=1, m_tx=1, m_rx=1, d=1, sigma2=0.25)
    channels = zero_si(draw_channel_set(np.random.default_rng(23), cfg))
    state = random_state(cfg, np.random.default_rng(24))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    sig = compute_sigma_matrices(0, channels, ws, grads, state)
    f = state.analog_rx[1][0, 0]
    h = channels.get(1, 0)[0, 0]
    g = state.analog_tx[0][0, 0]
    v = state.digital_tx[0][0, 0]
    rbar = 0.25 * abs(f) ** 2
    assert sig.signal[0, 0].real == pytest.approx(abs(f * h * g * v) ** 2 / rbar, rel=1e-9)


def test_sigma_penalty_identity_for_metric_orthonormal_digital():
    cfg = small_config(K=1, n_tx=4, n_rx=4, m_tx=3, m_rx=2, d=2)
    channels = zero_si(draw_channel_set(np.random.default_rng(25), cfg))
    state = random_state(cfg, np.random.default_rng(26))
    g = state.analog_tx[0]
    chol = np.linalg.cholesky(g.conj().T @ g)
    q, _ = np.linalg.qr(chol.conj().T @ state.digital_tx[0])
    state.digital_tx[0] = np.linalg.solve(chol.conj().T, q)
    state.multiplier[0] = 1.0
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    sig = compute_sigma_matrices(0, channels, ws, grads, state)
    np.testing.assert_allclose(sig.penalty, np.eye(2), atol=1e-10)


def test_sigma_matrices_hermitian():
    cfg = small_config()
    channels = draw_channel_set(np.random.default_rng(27), cfg)
    state = random_state(cfg, np.random.default_rng(28))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    for a in range(cfg.num_nodes):
        sig = compute_sigma_matrices(a, channels, ws, grads, state)
        np.testing.assert_allclose(sig.signal, sig.signal.conj().T, atol=1e-10)
        np.testing.assert_allclose(sig.penalty, sig.penalty.conj().T, atol=1e-10)


def test_power_allocation_scalar_cases():
    p1 = update_power_allocation(0, SigmaPair(np.array([[1.0 + 0j]]),
                                              np.array([[2.0 + 0j]])), 1.0)
    assert p1[0, 0] == pytest.approx(0.0)
    p2 = update_power_allocation(0, SigmaPair(np.array([[10.0 + 0j]]),
                                              np.array([[0.5 + 0j]])), 1.0)
    assert p2[0, 0] == pytest.approx(1.9, rel=1e-8)


def test_power_allocation_matches_water_filling_oracle():
    gamma = np.array([4.0, 1.5, 0.3])
    mu0 = np.array([0.5, 0.8, 2.0])
    w = 1.3
    for lam in (0.0, 0.25, 1.0, 7.5):
        sig = SigmaPair(np.diag(gamma).astype(complex),
                        np.diag(mu0 + lam).astype(complex))
        p = np.diag(update_power_allocation(0, sig, w))
        oracle = np.maximum(0.0, w / (mu0 + lam) - 1.0 / gamma)
        np.testing.assert_allclose(p, oracle, atol=1e-8)


def test_power_allocation_dead_streams_and_singular_penalty():
    sig = SigmaPair(np.zeros((2, 2), dtype=complex), np.eye(2, dtype=complex))
    np.testing.assert_array_equal(update_power_allocation(0, sig, 1.0), 0.0)
    with pytest.raises(ConditioningError):
        update_power_allocation(0, SigmaPair(np.eye(2, dtype=complex),
                                             np.zeros((2, 2), dtype=complex)), 1.0)


# ------------------------------------------------------------------ bisection


def scalar_setup(c, gamma, budget, sigma2=1.0):
    """Scalar node whose subproblem matrices are fully hand-computable."""
    cfg = small_config(K=1, n_tx=1, n_rx=1, m_tx=1, m_rx=1, d=1,
                       sigma2=sigma2, power=[budget, budget])
    channels = zero_si(draw_channel_set(np.random.default_rng(30), cfg))
    state = random_state(cfg, np.random.default_rng(31))
    # rescale the cross channel so the signal quadratic form equals gamma
    f = state.analog_rx[1][0, 0]
    g = state.analog_tx[0][0, 0]
    v = state.digital_tx[0][0, 0]
    rbar = sigma2 * abs(f) ** 2
    target = np.sqrt(gamma * rbar) / abs(f * g * v)
    channels.matrices[(1, 0)] = np.array([[target + 0j]])
    ws = assemble_covariances(channels, state, cfg.sigma2)
    from fdhybf.optimizer import GradientPair

    grads = [GradientPair(np.array([[c + 0j]]), np.zeros((1, 1), dtype=complex)),
             GradientPair(np.zeros((1, 1), dtype=complex), np.zeros((1, 1), dtype=complex))]
    return cfg, channels, state, ws, grads


def test_bisect_scalar_closed_form():
    c, gamma, budget = 0.4, 9.0, 0.8
    cfg, channels, state, ws, grads = scalar_setup(c, gamma, budget)
    opts = SolverOptions()
    lam, p = bisect_multiplier(0, channels, ws, grads, state, opts, 1.0, budget)
    lam_expected = 1.0 / (budget + 1.0 / gamma) - c
    assert lam == pytest.approx(lam_expected, rel=1e-4)
    realized = p[0, 0]  # unit-modulus scalar stages: power equals the level
    assert abs(realized - budget) <= 1e-6 * budget


def test_bisect_inactive_constraint_returns_zero():
    # strong penalty makes the unconstrained optimum small
    c, gamma, budget = 5.0, 2.0, 10.0
    cfg, channels, state, ws, grads = scalar_setup(c, gamma, budget)
    lam, p = bisect_multiplier(0, channels, ws, grads, state, SolverOptions(), 1.0, budget)
    assert lam == 0.0
    assert p[0, 0] == pytest.approx(max(0.0, 1.0 / c - 1.0 / gamma), rel=1e-8)


def test_power_monotone_in_multiplier():
    cfg = small_config()
    channels = draw_channel_set(np.random.default_rng(32), cfg)
    state = random_state(cfg, np.random.default_rng(33))
    ws = assemble_covariances(channels, state, cfg.sigma2)
    grads = compute_gradients(channels, ws, state, cfg.weights)
    sig0 = compute_sigma_matrices(0, channels, ws, grads, state, multiplier=0.0)
    gv = state.analog_tx[0] @ state.digital_tx[0]
    gram = gv.conj().T @ gv
    powers = []
    for lam in np.linspace(0.0, 5.0, 30):
        sig = SigmaPair(sig0.signal, sig0.penalty + lam * gram)
        p = update_power_allocation(0, sig, 1.0)
        powers.append(float(np.real(np.diag(p) @ np.diag(gram))))
    assert all(b <= a + 1e-10 for a, b in zip(powers, powers[1:]))


def test_bisect_divergence_on_degenerate_penalty():
    signal = np.eye(2, dtype=complex)
    penalty0 = np.zeros((2, 2), dtype=complex)
    stream_gram = np.zeros((2, 2), dtype=complex)
    with pytest.raises(DivergenceError):
        _bisect_power(0, signal, penalty0, stream_gram, 1.0, 1.0, SolverOptions())


# -------------------------------------------------------------------- solver


def test_run_hybf_zero_channels_terminates_immediately():
    cfg = small_config()
    channels = draw_channel_set(np.random.default_rng(34), cfg)
    for key in list(channels.matrices):
        channels.matrices[key] = np.zeros_like(channels.matrices[key])
    res = run_hybf(channels, cfg, cfg.solver, np.random.default_rng(35))
    assert res.iterations == 1
    assert res.wsr_trace == [0.0]
    assert res.final_wsr == 0.0


def test_run_hybf_deterministic():
    cfg = small_config()
    channels = draw_channel_set(np.random.default_rng(36), cfg)
    r1 = run_hybf(channels, cfg, cfg.solver, np.random.default_rng(37), seed=5, snr_db=0.0)
    r2 = run_hybf(channels, cfg, cfg.solver, np.random.default_rng(37), seed=5, snr_db=0.0)
    assert r1.wsr_trace == r2.wsr_trace
    assert r1.node_powers == r2.node_powers
    assert r1.final_wsr == r2.final_wsr
    assert r1.iterations == r2.iterations


def test_run_hybf_constraints_at_exit():
    cfg = small_config(K=2, n_tx=6, n_rx=6, m_tx=3, m_rx=3, d=1, sigma2=0.2)
    channels = draw_channel_set(np.random.default_rng(38), cfg)
    res = run_hybf(channels, cfg, cfg.solver, np.random.default_rng(39))
    for a in range(cfg.num_nodes):
        assert res.node_powers[a] <= cfg.power[a] * (1 + 1e-6)
    assert res.final_wsr >= res.wsr_trace[0] - 1e-9


def test_run_hybf_square_unconstrained_matches_digital():
    from fdhybf.benchmarks import run_fully_digital_fd

    cfg = small_config(K=1, n_tx=6, n_rx=6, m_tx=6, m_rx=6, d=2, sigma2=0.1)
    for s in range(3):
        channels = zero_si(draw_channel_set(np.random.default_rng(40 + s), cfg))
        hy = run_hybf(channels, cfg, cfg.solver, np.random.default_rng(50 + s))
        fd = run_fully_digital_fd(channels, cfg, cfg.solver, np.random.default_rng(s))
        assert hy.final_wsr >= fd.final_wsr * 0.98
