"""Alternating weighted-sum-rate maximization for the full-duplex network.

Each outer iteration sweeps the nodes cyclically.  A node's update block
relinearizes the other links' rates around the current operating point
(gradient matrices), proposes a new analog beamformer (vectorized
generalized-eigenvector update plus phase projection) and analog combiner,
and then solves its digital directions, per-stream powers and
power-constraint multiplier jointly (generalized dominant eigenvectors
plus water-filling under a bisection on the multiplier).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .covariance import (
    BeamformerState,
    assemble_covariances,
    compute_wsr,
    partner_of,
    transmit_covariance,
)
from .errors import ConditioningError, DivergenceError, PencilSizeError
from .linalg import (
    RIDGE_EPS,
    cholesky_logdet,
    hermitian_gevd,
    hermitianize,
    inv_psd,
    kron,
    phase_project,
    ridge,
    unvec,
)

#: Hard cap on multiplier-bracket doublings before declaring divergence.
MAX_BRACKET_DOUBLINGS = 60

#: Hard cap on bisection steps (the interval shrinks by 2 each step).
MAX_BISECT_STEPS = 200


@dataclass
class SolverOptions:
    """Knobs of the outer loop and the multiplier search."""

    max_outer_iters: int = 200
    wsr_rel_tol: float = 1e-4
    bisection_tol: float = 1e-6
    multiplier_growth: float = 2.0
    ridge_eps: float = RIDGE_EPS
    max_kron_dim: int = 4096

    def __post_init__(self):
        for name in ("max_outer_iters", "wsr_rel_tol", "bisection_tol",
                     "multiplier_growth", "ridge_eps", "max_kron_dim"):
            if getattr(self, name) <= 0:
                raise ValueError(f"SolverOptions.{name} must be positive")


@dataclass
class GradientPair:
    """Per-node linearization matrices of the non-concave rate terms.

    ``a_hat`` collects the congruence terms of the other-pair receivers in
    the set opposite the node; ``b_hat`` those of the node's own set,
    including its own loopback.  Both are Hermitian PSD, shape N_t x N_t.
    """

    a_hat: np.ndarray
    b_hat: np.ndarray


@dataclass
class SigmaPair:
    """d x d matrices of one node's power-allocation subproblem.

    ``signal`` weighs the served link through the whitened channel;
    ``penalty`` combines the interference linearization and the multiplier.
    """

    signal: np.ndarray
    penalty: np.ndarray


@dataclass
class TrialResult:
    """Outcome of one solver run on one channel realization."""

    wsr_trace: list
    final_wsr: float
    iterations: int
    scheme: str
    seed: int
    snr_db: float
    node_powers: tuple


def _combined_intf_noise_inv(workspace, state, node, eps=RIDGE_EPS):
    """``F^H (F rbar_ant F^H)^-1 F`` with the node's current combiner."""
    f = state.analog_rx[node]
    rbar = hermitianize(f @ workspace.rbar_ant[node] @ f.conj().T)
    return f.conj().T @ inv_psd(rbar, eps) @ f


def compute_gradients(channels, workspace, state, weights, eps=RIDGE_EPS,
                      nodes=None):
    """Linearization matrices of every node's transmit covariance.

    Each receiver ``m`` with nonzero weight contributes the congruence
    ``w_m H_ma^H F_m^H (rbar_m^-1 - r_m^-1) F_m H_ma`` to the transmitters
    it hears; receivers with zero weight contribute nothing.  ``nodes``
    restricts which transmitters get their pair computed (the returned
    list still has one entry per node, ``None`` where skipped).
    """
    num = channels.num_nodes
    half = num // 2
    active = [m for m in range(num) if weights[m] != 0.0]
    kernels = [None] * num
    if active and len({workspace.r[m].shape for m in active}) == 1:
        # uniform combiner size: one batched LAPACK call for all inverses
        stack = np.stack([ridge(workspace.rbar[m], eps) for m in active]
                         + [ridge(workspace.r[m], eps) for m in active])
        try:
            inverses = np.linalg.inv(stack)
        except np.linalg.LinAlgError as exc:
            raise ConditioningError(
                f"singular receive covariance after ridge: {exc}") from exc
        for i, m in enumerate(active):
            delta = inverses[i] - inverses[len(active) + i]
            f = state.analog_rx[m]
            kernels[m] = weights[m] * (f.conj().T @ delta @ f)
    else:
        for m in active:
            delta = inv_psd(workspace.rbar[m], eps) - inv_psd(workspace.r[m], eps)
            f = state.analog_rx[m]
            kernels[m] = weights[m] * (f.conj().T @ delta @ f)

    wanted = set(range(num)) if nodes is None else set(nodes)
    grads = []
    for a in range(num):
        if a not in wanted:
            grads.append(None)
            continue
        srv = partner_of(a, num)
        own = range(0, half) if a < half else range(half, num)
        opp = range(half, num) if a < half else range(0, half)
        n_t = state.analog_tx[a].shape[0]
        a_hat = np.zeros((n_t, n_t), dtype=complex)
        for m in opp:
            if m == srv or kernels[m] is None:
                continue
            h = channels.get(m, a)
            a_hat = a_hat + h.conj().T @ kernels[m] @ h
        b_hat = np.zeros((n_t, n_t), dtype=complex)
        for m in own:
            if kernels[m] is None:
                continue
            h = channels.get(m, a)
            b_hat = b_hat + h.conj().T @ kernels[m] @ h
        grads.append(GradientPair(hermitianize(a_hat), hermitianize(b_hat)))
    return grads


def _penalty_matrix(grads, node, multiplier, n_t):
    gp = grads[node]
    return hermitianize(gp.a_hat + gp.b_hat) + multiplier * np.eye(n_t)


def _transmit_pencil(node, channels, workspace, grads, state, eps=RIDGE_EPS):
    """Matrices of one node's transmit subproblem.

    Returns ``(a_side, b0, gram)``: the serving link's whitened quadratic
    form ``G^H H^H F^H rbar^-1 F H G``, the multiplier-free penalty
    ``G^H (a_hat + b_hat) G`` and the coupling ``G^H G`` through which the
    multiplier enters.
    """
    srv = partner_of(node, channels.num_nodes)
    k_srv = _combined_intf_noise_inv(workspace, state, srv, eps)
    g = state.analog_tx[node]
    hg = channels.get(srv, node) @ g
    a_side = hermitianize(hg.conj().T @ k_srv @ hg)
    gp = grads[node]
    b0 = hermitianize(g.conj().T @ hermitianize(gp.a_hat + gp.b_hat) @ g)
    gram = hermitianize(g.conj().T @ g)
    return a_side, b0, gram


def _unit_columns(v):
    return v / np.linalg.norm(v, axis=0, keepdims=True)

#: Relative eigenvalue cutoff below which a direction of ``G^H G`` is
#: treated as unreachable through the analog stage.
EFFECTIVE_RANK_RTOL = 1e-9


def _live_subspace(gram):
    """Split directions by effective analog gain.

    The analog update can return (numerically) rank-deficient beamformers;
    digital directions in the null space of ``G`` carry no rate and no
    power, so the transmit subproblem is solved on the orthogonal
    complement.  Returns ``(live, dead)`` orthonormal bases.
    """
    eigvals, eigvecs = np.linalg.eigh(gram)
    keep = eigvals > EFFECTIVE_RANK_RTOL * float(eigvals[-1])
    return eigvecs[:, keep], eigvecs[:, ~keep]


def _solve_directions(a_side, b0, gram, lam, d, eps=RIDGE_EPS):
    """Dominant pencil directions at one multiplier value.

    Returns unit-norm columns; when the analog stage is rank deficient the
    trailing columns are dead (null-of-G) directions flagged by the second
    return value, a boolean per-stream liveness mask.
    """
    live, dead = _live_subspace(gram)
    n_live = min(d, live.shape[1])
    a_r = hermitianize(live.conj().T @ a_side @ live)
    b_r = hermitianize(live.conj().T @ (b0 + lam * gram) @ live)
    res = hermitian_gevd(a_r, b_r, n_live, eps)
    v = _unit_columns(live @ res.eigvecs)
    alive = np.ones(d, dtype=bool)
    if n_live < d:
        v = np.hstack([v, dead[:, : d - n_live]])
        alive[n_live:] = False
    return v, alive


def update_digital_beamformer(node, channels, workspace, grads, state, eps=RIDGE_EPS):
    """New digital beamformer: dominant generalized eigenvectors.

    Pencil ``(G^H H^H F^H rbar^-1 F H G, G^H (a_hat + b_hat + lam I) G)``
    through the serving receiver, columns rescaled to unit norm.
    """
    a_side, b0, gram = _transmit_pencil(node, channels, workspace, grads, state, eps)
    d = state.digital_tx[node].shape[1]
    v, _ = _solve_directions(a_side, b0, gram, state.multiplier[node], d, eps)
    return v


def analog_beamformer_pencil(node, channels, workspace, grads, state,
                             eps=RIDGE_EPS):
    """Factor matrices of the vectorized analog-beamformer eigenproblem.

    The stationarity condition in ``vec(G)`` reads
    ``(served^T kron x) vec(G) = lam ((V V^H)^T kron penal) vec(G)`` with
    ``x`` the whitened serving-channel quadratic form, ``served`` the
    digital covariance shrunk by the current rate response and ``penal``
    the linearization-plus-multiplier matrix.  Returns
    ``(served, x, vv, penal)``; both pencil sides are exact Kronecker
    products of these factors.
    """
    srv = partner_of(node, channels.num_nodes)
    k_srv = _combined_intf_noise_inv(workspace, state, srv, eps)
    h = channels.get(srv, node)
    x = hermitianize(h.conj().T @ k_srv @ h)

    g = state.analog_tx[node]
    v_eff = state.digital_tx[node] @ np.sqrt(state.stream_power[node])
    gv = g @ v_eff
    q = hermitianize(np.eye(gv.shape[1]) + gv.conj().T @ x @ gv)
    served = hermitianize(v_eff @ np.linalg.solve(q, v_eff.conj().T))
    vv = hermitianize(v_eff @ v_eff.conj().T)
    penal = _penalty_matrix(grads, node, state.multiplier[node], g.shape[0])
    return served, x, vv, penal


def update_analog_beamformer(node, channels, workspace, grads, state,
                             options=None, eps=RIDGE_EPS):
    """New analog beamformer via the vectorized eigenproblem.

    Both sides of the vectorized pencil are Kronecker products, so its
    generalized eigenpairs factor: eigenvalues multiply and eigenvectors
    are Kronecker products of the factor pencils' eigenvectors.  The
    dominant ``vec(G)`` is therefore the product of the two factor
    dominants (all factor pencils are positive semi-definite), solved at
    factor size instead of materializing the ``(N_t M_t)^2`` pencil.  The
    reshaped dominant vector is phase-projected onto the unit-modulus
    constraint set.
    """
    options = options or SolverOptions()
    n_t, m_t = state.analog_tx[node].shape
    dim = n_t * m_t
    if dim > options.max_kron_dim:
        raise PencilSizeError(
            f"vectorized analog pencil has dimension {dim} > cap "
            f"{options.max_kron_dim}; reduce antennas or RF chains"
        )
    if float(np.real(np.trace(state.stream_power[node]))) == 0.0:
        # node is silent; both pencil sides vanish, keep the current phases
        return state.analog_tx[node]
    served, x, vv, penal = analog_beamformer_pencil(
        node, channels, workspace, grads, state, eps)
    # kron factor pencils: (served^T, vv^T) acts on the chain index and
    # (x, penal) on the antenna index
    chain = hermitian_gevd(hermitianize(served.T), hermitianize(vv.T), 1, eps)
    antenna = hermitian_gevd(x, penal, 1, eps)
    g_vec = kron(chain.eigvecs[:, 0], antenna.eigvecs[:, 0])
    return phase_project(unvec(g_vec, n_t, m_t))


def update_analog_combiner(node, workspace, eps=RIDGE_EPS):
    """New analog combiner: dominant generalized eigenvectors of the
    antenna-level pencil, transposed to rows and phase-projected."""
    m_r = workspace.r[node].shape[0]
    res = hermitian_gevd(workspace.r_ant[node], workspace.rbar_ant[node], m_r, eps)
    return phase_project(res.eigvecs.conj().T)


def compute_sigma_matrices(node, channels, workspace, grads, state,
                           multiplier=None, eps=RIDGE_EPS):
    """The node's power-allocation pair at the current beamformers."""
    srv = partner_of(node, channels.num_nodes)
    k_srv = _combined_intf_noise_inv(workspace, state, srv, eps)
    gv = state.analog_tx[node] @ state.digital_tx[node]
    y = channels.get(srv, node) @ gv
    signal = hermitianize(y.conj().T @ k_srv @ y)
    lam = state.multiplier[node] if multiplier is None else multiplier
    penal = _penalty_matrix(grads, node, lam, state.analog_tx[node].shape[0])
    penalty = hermitianize(gv.conj().T @ penal @ gv)
    return SigmaPair(signal, penalty)


def update_power_allocation(node, sigma, weight, eps=RIDGE_EPS):
    """Per-stream powers ``max(0, Re(w penalty^-1 - signal^-1)_kk)``.

    A singular signal matrix means some streams carry no usable channel;
    their inverse level is infinite and the clamp allocates them zero power.
    A singular penalty matrix leaves the subproblem unbounded and raises.
    """
    inv_penalty = inv_psd(sigma.penalty, eps)
    try:
        inv_signal_diag = np.real(np.diag(inv_psd(sigma.signal, eps)))
    except ConditioningError:
        inv_signal_diag = np.full(sigma.signal.shape[0], np.inf)
    levels = weight * np.real(np.diag(inv_penalty)) - inv_signal_diag
    return np.diag(np.maximum(0.0, levels))


#: Probe multiplier standing in for the ``lam -> 0+`` limit when the
#: multiplier-free penalty matrix is singular.
ZERO_MULTIPLIER_PROBE = 1e-12


def _bisect_power(node, signal, penalty0, stream_gram, weight, budget, options):
    """Fixed-direction multiplier search on the realized transmit power.

    ``signal``/``penalty0`` are the node's d x d subproblem matrices at
    zero multiplier and ``stream_gram = V^H G^H G V`` couples the
    multiplier and weighs the per-stream powers.  Returns ``(lam, P)``.
    """
    gram_diag = np.real(np.diag(stream_gram))

    def allocate(lam):
        sigma = SigmaPair(signal, hermitianize(penalty0 + lam * stream_gram))
        try:
            p_mat = update_power_allocation(node, sigma, weight, options.ridge_eps)
        except ConditioningError:
            return None, math.inf
        return p_mat, float(np.diag(p_mat) @ gram_diag)

    p_zero, pw_zero = allocate(0.0)
    if pw_zero <= budget:
        return 0.0, p_zero
    if not math.isfinite(pw_zero):
        # singular penalty at zero: probe the limit from above; only dead
        # streams survive the clamp there, so a feasible probe means the
        # constraint is inactive
        p_probe, pw_probe = allocate(ZERO_MULTIPLIER_PROBE)
        if pw_probe <= budget:
            return 0.0, p_probe

    hi = 1.0
    p_hi, pw_hi = allocate(hi)
    doublings = 0
    while pw_hi > budget:
        doublings += 1
        if doublings > MAX_BRACKET_DOUBLINGS:
            raise DivergenceError(
                f"node {node}: no multiplier bracket after "
                f"{MAX_BRACKET_DOUBLINGS} doublings (degenerate penalty matrix)"
            )
        hi *= options.multiplier_growth
        p_hi, pw_hi = allocate(hi)
    lo = hi / options.multiplier_growth if doublings else 0.0

    half_band = 0.5 * options.bisection_tol * budget
    lam, p_mat, pw = hi, p_hi, pw_hi
    for _ in range(MAX_BISECT_STEPS):
        if abs(pw - budget) <= half_band:
            return lam, p_mat
        mid = 0.5 * (lo + hi)
        p_mid, pw_mid = allocate(mid)
        if pw_mid > budget:
            lo = mid
        else:
            hi = mid
            lam, p_mat, pw = mid, p_mid, pw_mid
    raise DivergenceError(
        f"node {node}: multiplier bisection did not reach the power band"
    )


def bisect_multiplier(node, channels, workspace, grads, state, options,
                      weight, budget):
    """Smallest multiplier whose power allocation meets the budget.

    Returns ``(lam, P)`` with either ``lam = 0`` and realized power within
    the budget, or realized power inside the relative ``bisection_tol``
    band around the budget.  The upper bracket is found by growing the
    multiplier from 1 until the constraint holds.  Beamformer directions
    stay fixed during the search.
    """
    sig0 = compute_sigma_matrices(node, channels, workspace, grads, state,
                                  multiplier=0.0, eps=options.ridge_eps)
    gv = state.analog_tx[node] @ state.digital_tx[node]
    stream_gram = hermitianize(gv.conj().T @ gv)
    return _bisect_power(node, sig0.signal, sig0.penalty, stream_gram,
                         weight, budget, options)


def solve_transmit_block(node, channels, workspace, grads, state, options,
                         weight, budget):
    """Exact joint update of one node's digital directions, powers and
    multiplier for the current linearization.

    The dominant-eigenvector directions depend on the multiplier through
    the penalty side of the pencil, so the search re-solves the pencil at
    every multiplier probe; this keeps each node update a true ascent step
    of the minorized objective, which a stale-multiplier direction update
    does not guarantee.  Returns ``(V, lam, P)``.

    In the eigenbasis the power subproblem is exactly diagonal, so each
    probe computes the water-filling levels in closed form from the
    eigenvalues and the eigenvector scaling instead of inverting the
    subproblem matrices.
    """
    eps = options.ridge_eps
    a_side, b0, gram = _transmit_pencil(node, channels, workspace, grads,
                                        state, eps)
    d = state.digital_tx[node].shape[1]
    live, dead = _live_subspace(gram)
    n_live = min(d, live.shape[1])
    a_r = hermitianize(live.conj().T @ a_side @ live)
    b0_r = hermitianize(live.conj().T @ b0 @ live)
    gram_r = hermitianize(live.conj().T @ gram @ live)
    tr_b0 = float(np.real(np.trace(b0_r)))
    tr_gram = float(np.real(np.trace(gram_r)))
    eye_r = np.eye(live.shape[1])

    def trial(lam):
        b_r = b0_r + lam * gram_r
        shift = eps * (tr_b0 + lam * tr_gram) / live.shape[1]
        try:
            eigvals, eigvecs = scipy.linalg.eigh(a_r, b_r + shift * eye_r)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            return None, None, math.inf
        order = np.argsort(eigvals)[::-1][:n_live]
        mu = np.real(eigvals[order])
        vt = eigvecs[:, order]  # B-orthonormal columns
        sq = np.real(np.sum(vt.conj() * vt, axis=0))  # squared column norms
        with np.errstate(divide="ignore"):
            levels_live = np.where(mu > 0.0,
                                   np.maximum(0.0, sq * (weight - 1.0 / mu)),
                                   0.0)
        v = _unit_columns(live @ vt)
        gram_w = np.real(np.einsum("ij,jk,ki->i", v.conj().T, gram, v))
        pw = float(levels_live @ gram_w)
        levels = np.zeros(d)
        levels[:n_live] = levels_live
        if n_live < d:
            v = np.hstack([v, dead[:, : d - n_live]])
        return v, np.diag(levels), pw

    def refine_fixed_directions(v_best):
        # eigenvector swap can make the power jump across the band; pin the
        # feasible directions and refine the multiplier alone
        gains = np.real(np.einsum("ij,jk,ki->i", v_best.conj().T, gram, v_best))
        alive = gains > EFFECTIVE_RANK_RTOL * float(np.max(gains, initial=1.0))
        v_live = v_best[:, alive]
        signal = hermitianize(v_live.conj().T @ a_side @ v_live)
        penalty0 = hermitianize(v_live.conj().T @ b0 @ v_live)
        stream_gram = hermitianize(v_live.conj().T @ gram @ v_live)
        lam, p_live = _bisect_power(node, signal, penalty0, stream_gram,
                                    weight, budget, options)
        levels = np.zeros(v_best.shape[1])
        levels[alive] = np.diag(p_live)
        return v_best, lam, np.diag(levels)

    v_zero, p_zero, pw_zero = trial(0.0)
    if pw_zero <= budget:
        return v_zero, 0.0, p_zero
    if not math.isfinite(pw_zero):
        v_probe, p_probe, pw_probe = trial(ZERO_MULTIPLIER_PROBE)
        if pw_probe <= budget:
            return v_probe, 0.0, p_probe

    # warm-start the bracket at the node's previous multiplier; it barely
    # moves between sweeps once the run settles
    hi = state.multiplier[node] if state.multiplier[node] > 0.0 else 1.0
    v_hi, p_hi, pw_hi = trial(hi)
    steps = 0
    while pw_hi > budget:
        steps += 1
        if steps > MAX_BRACKET_DOUBLINGS:
            raise DivergenceError(
                f"node {node}: no multiplier bracket after "
                f"{MAX_BRACKET_DOUBLINGS} doublings (degenerate penalty matrix)"
            )
        hi *= options.multiplier_growth
        v_hi, p_hi, pw_hi = trial(hi)
    if steps:
        lo = hi / options.multiplier_growth
    else:
        # feasible immediately: walk the lower edge down to an infeasible
        # multiplier (power at zero already exceeded the budget)
        lo = hi / options.multiplier_growth
        while lo > 0.0:
            v_lo, p_lo, pw_lo = trial(lo)
            if pw_lo > budget:
                break
            hi, v_hi, p_hi, pw_hi = lo, v_lo, p_lo, pw_lo
            steps += 1
            if steps > MAX_BRACKET_DOUBLINGS:
                lo = 0.0
                break
            lo /= options.multiplier_growth
        else:
            lo = 0.0

    half_band = 0.5 * options.bisection_tol * budget
    lam, v_best, p_best, pw = hi, v_hi, p_hi, pw_hi
    for _ in range(MAX_BISECT_STEPS):
        if abs(pw - budget) <= half_band:
            return v_best, lam, p_best
        if hi - lo <= 1e-14 * max(hi, 1.0):
            return refine_fixed_directions(v_best)
        mid = 0.5 * (lo + hi)
        v_mid, p_mid, pw_mid = trial(mid)
        if pw_mid > budget:
            lo = mid
        else:
            hi = mid
            lam, v_best, p_best, pw = mid, v_mid, p_mid, pw_mid
    raise DivergenceError(
        f"node {node}: multiplier bisection did not reach the power band"
    )


def _random_unit_modulus(rng, rows, cols):
    return np.exp(2j * np.pi * rng.uniform(0.0, 1.0, (rows, cols)))


def _top_right_singular(matrix, d):
    _, _, vh = np.linalg.svd(matrix)
    return vh[:d, :].conj().T


def initialize_state(channels, config, rng):
    """Random-phase analog stages, matched digital directions, flat power.

    RNG consumption order: per node in index order, transmit phases then
    combiner phases.  Digital beamformers are then the top right singular
    directions of the serving link's combined channel (no randomness).
    """
    num = config.num_nodes
    analog_tx = []
    analog_rx = []
    digital_tx = []
    stream_power = []
    for a in range(num):
        analog_tx.append(_random_unit_modulus(rng, config.n_tx[a], config.m_tx[a]))
        analog_rx.append(_random_unit_modulus(rng, config.m_rx[a], config.n_rx[a]))
    for a in range(num):
        srv = partner_of(a, num)
        eff = analog_rx[srv] @ channels.get(srv, a) @ analog_tx[a]
        digital_tx.append(_top_right_singular(eff, config.d[a]))
        stream_power.append((config.power[a] / config.d[a]) * np.eye(config.d[a]))
    return BeamformerState(
        analog_tx=analog_tx,
        digital_tx=digital_tx,
        analog_rx=analog_rx,
        stream_power=stream_power,
        multiplier=[1.0] * num,
    )


def initialize_digital_state(channels, config):
    """Identity analog stages for the fully digital benchmark schemes."""
    num = config.num_nodes
    analog_tx = [np.eye(config.n_tx[a], dtype=complex) for a in range(num)]
    analog_rx = [np.eye(config.n_rx[a], dtype=complex) for a in range(num)]
    digital_tx = []
    stream_power = []
    for a in range(num):
        srv = partner_of(a, num)
        digital_tx.append(_top_right_singular(channels.get(srv, a), config.d[a]))
        stream_power.append((config.power[a] / config.d[a]) * np.eye(config.d[a]))
    return BeamformerState(
        analog_tx=analog_tx,
        digital_tx=digital_tx,
        analog_rx=analog_rx,
        stream_power=stream_power,
        multiplier=[1.0] * num,
    )


def realized_powers(state):
    """Realized transmit power ``Tr(G V P V^H G^H)`` of every node."""
    return tuple(
        float(np.real(np.trace(transmit_covariance(state, a))))
        for a in range(state.num_nodes)
    )


def run_alternating(channels, config, options, state, weights, active_tx,
                    update_analog, scheme, seed=0, snr_db=math.nan):
    """Shared outer loop for the hybrid scheme and the digital benchmarks.

    Nodes are swept cyclically (left set first): each node relinearizes the
    rates around the current operating point, then runs its own update
    block (analog beamformer, analog combiner, then the joint digital
    direction/power/multiplier solve).  Simultaneous updates of coupled
    transmitters can ping-pong through the linearized cross terms; the
    cyclic sweep with exact per-node transmit subproblems keeps the
    objective trace monotone for the unconstrained digital variant.

    ``active_tx`` restricts which nodes update their transmit variables
    (half-duplex slots freeze one direction); ``weights`` with zeros mask
    receivers out of the objective and out of the gradients.
    """
    noise = config.sigma2
    eps = options.ridge_eps
    workspace = assemble_covariances(channels, state, noise)
    wsr_prev = compute_wsr(workspace, weights, eps)
    trace = []

    def slack(value):
        return 1e-12 * max(abs(value), 1.0)

    def try_transmit_stage(node, proposal, workspace, wsr_cur):
        # phase projection has no ascent guarantee; keep a proposal only if
        # the objective does not drop (tiny slack absorbs rounding noise).
        # A new transmit stage changes the realized power, so the candidate
        # is compared at matched power: scale the stream powers back inside
        # the budget before judging it.
        old = state.analog_tx[node]
        old_power = state.stream_power[node]
        state.analog_tx[node] = proposal
        pw = float(np.real(np.trace(transmit_covariance(state, node))))
        if pw > config.power[node] > 0.0:
            state.stream_power[node] = (config.power[node] / pw) * old_power
        ws_new = assemble_covariances(channels, state, noise)
        wsr_new = compute_wsr(ws_new, weights, eps)
        if wsr_new >= wsr_cur - slack(wsr_cur):
            return True, ws_new, wsr_new
        state.analog_tx[node] = old
        state.stream_power[node] = old_power
        return False, workspace, wsr_cur

    def try_combiner_stage(node, proposal, workspace, wsr_cur):
        # the combiner only enters the node's own rate term, so the
        # acceptance check and the workspace patch stay local
        w = weights[node]
        old_term = w * (cholesky_logdet(ridge(workspace.r[node], eps))
                        - cholesky_logdet(ridge(workspace.rbar[node], eps)))
        r_new = hermitianize(proposal @ workspace.r_ant[node] @ proposal.conj().T)
        rbar_new = hermitianize(
            proposal @ workspace.rbar_ant[node] @ proposal.conj().T)
        try:
            new_term = w * (cholesky_logdet(ridge(r_new, eps))
                            - cholesky_logdet(ridge(rbar_new, eps)))
        except ConditioningError:
            return False, workspace, wsr_cur
        if new_term < old_term - slack(wsr_cur):
            return False, workspace, wsr_cur
        state.analog_rx[node] = proposal
        workspace.r[node] = r_new
        workspace.rbar[node] = rbar_new
        workspace.s[node] = hermitianize(r_new - rbar_new)
        return True, workspace, wsr_cur - old_term + new_term

    wsr_cur = wsr_prev
    for iteration in range(1, options.max_outer_iters + 1):
        try:
            for a in active_tx:
                grads = compute_gradients(channels, workspace, state, weights,
                                          eps, nodes=(a,))
                if update_analog:
                    proposal = update_analog_beamformer(
                        a, channels, workspace, grads, state, options, eps)
                    moved_tx, workspace, wsr_cur = try_transmit_stage(
                        a, proposal, workspace, wsr_cur)
                    moved_rx = False
                    if weights[a] > 0.0:
                        proposal = update_analog_combiner(a, workspace, eps)
                        moved_rx, workspace, wsr_cur = try_combiner_stage(
                            a, proposal, workspace, wsr_cur)
                    if moved_tx or moved_rx:
                        grads = compute_gradients(channels, workspace, state,
                                                  weights, eps, nodes=(a,))
                srv = partner_of(a, config.num_nodes)
                v_new, lam, p_mat = solve_transmit_block(
                    a, channels, workspace, grads, state, options,
                    weights[srv], config.power[a])
                state.digital_tx[a] = v_new
                state.multiplier[a] = lam
                state.stream_power[a] = p_mat
                workspace = assemble_covariances(channels, state, noise)
                wsr_cur = compute_wsr(workspace, weights, eps)
        except ConditioningError as exc:
            raise ConditioningError(f"iteration {iteration}: {exc}") from exc
        trace.append(wsr_cur)
        if abs(wsr_cur - wsr_prev) <= options.wsr_rel_tol * max(abs(wsr_prev), 1e-12):
            break
        wsr_prev = wsr_cur
    return TrialResult(
        wsr_trace=trace,
        final_wsr=trace[-1],
        iterations=len(trace),
        scheme=scheme,
        seed=seed,
        snr_db=snr_db,
        node_powers=realized_powers(state),
    )


def run_hybf(channels, config, options, rng, *, seed=0, snr_db=math.nan):
    """Run the hybrid beamforming and combining scheme on one realization."""
    state = initialize_state(channels, config, rng)
    return run_alternating(
        channels, config, options, state,
        weights=config.weights,
        active_tx=range(config.num_nodes),
        update_analog=True,
        scheme="hybf",
        seed=seed,
        snr_db=snr_db,
    )
