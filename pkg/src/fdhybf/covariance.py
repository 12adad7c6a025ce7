"""Per-receiver covariance assembly and the weighted sum-rate objective.

Every node both transmits and receives.  The receive covariance at a node
collects its partner's signal, its own transmit loopback, all cross-node
interference and thermal noise, both at the antenna ports and after the
analog combining stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConditioningError
from .linalg import RIDGE_EPS, cholesky_logdet, hermitianize, inv_psd, ridge


def partner_of(node, num_nodes):
    """Index of the node on the other end of ``node``'s link."""
    half = num_nodes // 2
    return node + half if node < half else node - half


@dataclass
class BeamformerState:
    """Per-node beamforming variables.

    ``analog_tx[a]``  : N_t x M_t analog beamformer (unit-modulus entries).
    ``digital_tx[a]`` : M_t x d digital beamformer (unit-norm columns).
    ``analog_rx[a]``  : M_r x N_r analog combiner (unit-modulus entries).
    ``stream_power[a]``: d x d real nonnegative diagonal power matrix.
    ``multiplier[a]`` : nonnegative power-constraint multiplier.
    """

    analog_tx: list
    digital_tx: list
    analog_rx: list
    stream_power: list
    multiplier: list

    @property
    def num_nodes(self):
        return len(self.analog_tx)


@dataclass
class CovarianceWorkspace:
    """Receive covariances per node, combined and at the antenna ports.

    ``r``        : total receive covariance after the analog combiner.
    ``rbar``     : interference-plus-noise part, ``r - s``.
    ``s``        : covariance of the serving link's signal.
    ``r_ant``, ``rbar_ant`` : same with the combiner replaced by identity.
    """

    r: list = field(default_factory=list)
    rbar: list = field(default_factory=list)
    s: list = field(default_factory=list)
    r_ant: list = field(default_factory=list)
    rbar_ant: list = field(default_factory=list)


def transmit_covariance(state, node):
    """Transmit covariance ``G V P V^H G^H`` of one node (Hermitian PSD)."""
    gv = state.analog_tx[node] @ state.digital_tx[node]
    return hermitianize(gv @ state.stream_power[node] @ gv.conj().T)


def assemble_covariances_from_t(channels, transmit_covs, noise_var, analog_rx):
    """Assemble the workspace from explicit per-node transmit covariances."""
    ws = CovarianceWorkspace()
    num = channels.num_nodes
    for a in range(num):
        n_r = channels.get(a, a).shape[0]
        total_ant = noise_var[a] * np.eye(n_r, dtype=complex)
        for b in range(num):
            h = channels.get(a, b)
            total_ant = total_ant + h @ transmit_covs[b] @ h.conj().T
        srv = partner_of(a, num)
        h_srv = channels.get(a, srv)
        sig_ant = h_srv @ transmit_covs[srv] @ h_srv.conj().T
        total_ant = hermitianize(total_ant)
        sig_ant = hermitianize(sig_ant)
        f = analog_rx[a]
        sig = hermitianize(f @ sig_ant @ f.conj().T)
        total = hermitianize(f @ total_ant @ f.conj().T)
        ws.r_ant.append(total_ant)
        ws.rbar_ant.append(hermitianize(total_ant - sig_ant))
        ws.r.append(total)
        ws.s.append(sig)
        ws.rbar.append(hermitianize(total - sig))
    return ws


def assemble_covariances(channels, state, noise_var):
    """Assemble the workspace for the current beamformer state."""
    t_covs = [transmit_covariance(state, b) for b in range(channels.num_nodes)]
    return assemble_covariances_from_t(channels, t_covs, noise_var, state.analog_rx)


def compute_wsr(workspace, weights, eps=RIDGE_EPS):
    """Weighted sum rate ``sum_a w_a ln det(rbar_a^-1 r_a)`` in nats.

    Computed from separate Cholesky log-determinants of ``r`` and ``rbar``
    for stability.  Nodes with zero weight are skipped.
    """
    total = 0.0
    for a, w in enumerate(weights):
        if w == 0.0:
            continue
        try:
            ld_r = cholesky_logdet(ridge(workspace.r[a], eps))
            ld_rbar = cholesky_logdet(ridge(workspace.rbar[a], eps))
        except ConditioningError as exc:
            raise ConditioningError(f"receive covariance at node {a}: {exc}") from exc
        total += w * (ld_r - ld_rbar)
    return total


def compute_mmse_digital_combiner(channels, workspace, state, node, eps=RIDGE_EPS):
    """MMSE digital combiner for per-stream decoding at one receiver.

    ``W = (F H G V P^(1/2))^H R^-1`` for the serving link.  Reporting only;
    the rate objective is invariant to the digital combining stage, so this
    never enters the optimization loop.
    """
    srv = partner_of(node, channels.num_nodes)
    eff = (
        state.analog_rx[node]
        @ channels.get(node, srv)
        @ state.analog_tx[srv]
        @ state.digital_tx[srv]
        @ np.sqrt(state.stream_power[srv])
    )
    return eff.conj().T @ inv_psd(workspace.r[node], eps)
