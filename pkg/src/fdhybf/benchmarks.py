"""Fully digital comparison schemes.

``digital_fd`` runs the same alternating loop with as many RF chains as
antennas, identity analog stages and no phase projection.  ``digital_hd``
splits the traffic into two orthogonal direction slots (no loopback terms
by construction) and reports half the summed slot rates.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .optimizer import TrialResult, initialize_digital_state, run_alternating

SCHEME_TAGS = ("hybf", "digital_fd", "digital_hd")


def _digitalized(config):
    """Config variant with RF-chain counts raised to the antenna counts."""
    return dataclasses.replace(config, m_tx=config.n_tx, m_rx=config.n_rx)


def run_fully_digital_fd(channels, config, options, rng, *, seed=0,
                         snr_db=math.nan):
    """Fully digital benchmark: all nodes active, analog stages pinned to
    identity, digital beamformers and powers updated each iteration."""
    cfg = _digitalized(config)
    state = initialize_digital_state(channels, cfg)
    return run_alternating(
        channels, cfg, options, state,
        weights=cfg.weights,
        active_tx=range(cfg.num_nodes),
        update_analog=False,
        scheme="digital_fd",
        seed=seed,
        snr_db=snr_db,
    )


def _run_hd_slot(channels, cfg, options, tx_nodes, rx_nodes):
    state = initialize_digital_state(channels, cfg)
    for b in range(cfg.num_nodes):
        if b not in tx_nodes:
            # silent in this slot; exact zero keeps loopback terms at zero
            state.stream_power[b] = np.zeros_like(state.stream_power[b])
    weights = tuple(
        cfg.weights[a] if a in rx_nodes else 0.0 for a in range(cfg.num_nodes)
    )
    return run_alternating(
        channels, cfg, options, state,
        weights=weights,
        active_tx=tx_nodes,
        update_analog=False,
        scheme="digital_hd",
    )


def run_fully_digital_hd(channels, config, options, rng, *, seed=0,
                         snr_db=math.nan):
    """Half-duplex benchmark with two synchronized direction slots.

    Slot 1 lets the left-set nodes transmit toward the right set, slot 2
    reverses the direction; concurrent same-direction transmitters still
    interfere.  The reported rate is the slot average (each link is only
    served half the time), traced per iteration with the shorter slot's
    trace padded by its final value.
    """
    cfg = _digitalized(config)
    half = cfg.num_nodes // 2
    left = tuple(range(half))
    right = tuple(range(half, cfg.num_nodes))
    slot1 = _run_hd_slot(channels, cfg, options, tx_nodes=left, rx_nodes=right)
    slot2 = _run_hd_slot(channels, cfg, options, tx_nodes=right, rx_nodes=left)

    n_iter = max(slot1.iterations, slot2.iterations)
    trace = [
        0.5 * (slot1.wsr_trace[min(i, slot1.iterations - 1)]
               + slot2.wsr_trace[min(i, slot2.iterations - 1)])
        for i in range(n_iter)
    ]
    powers = tuple(
        slot1.node_powers[a] if a in left else slot2.node_powers[a]
        for a in range(cfg.num_nodes)
    )
    return TrialResult(
        wsr_trace=trace,
        final_wsr=trace[-1],
        iterations=n_iter,
        scheme="digital_hd",
        seed=seed,
        snr_db=snr_db,
        node_powers=powers,
    )
