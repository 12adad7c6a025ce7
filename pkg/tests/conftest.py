import numpy as np

from fdhybf.config import parse_config
from fdhybf.covariance import BeamformerState


def small_config(**overrides):
    doc = {"K": 2, "n_tx": 4, "n_rx": 4, "m_tx": 2, "m_rx": 2, "d": 1,
           "sigma2": 0.5, "trials": 2, "snr_db": [0.0]}
    doc.update(overrides)
    return parse_config(doc)


def random_state(config, rng):
    """Feasible random beamformer state: unit-modulus analog stages, unit
    digital columns, positive diagonal powers."""
    analog_tx, digital_tx, analog_rx, power = [], [], [], []
    for a in range(config.num_nodes):
        g = np.exp(2j * np.pi * rng.uniform(size=(config.n_tx[a], config.m_tx[a])))
        v = rng.standard_normal((config.m_tx[a], config.d[a])) \
            + 1j * rng.standard_normal((config.m_tx[a], config.d[a]))
        v = v / np.linalg.norm(v, axis=0, keepdims=True)
        f = np.exp(2j * np.pi * rng.uniform(size=(config.m_rx[a], config.n_rx[a])))
        analog_tx.append(g)
        digital_tx.append(v)
        analog_rx.append(f)
        power.append(np.diag(rng.uniform(0.2, 1.0, config.d[a])))
    return BeamformerState(
        analog_tx=analog_tx,
        digital_tx=digital_tx,
        analog_rx=analog_rx,
        stream_power=power,
        multiplier=[1.0] * config.num_nodes,
    )


def zero_si(channel_set):
    for a in range(channel_set.num_nodes):
        channel_set.matrices[(a, a)] = np.zeros_like(channel_set.matrices[(a, a)])
    return channel_set


def empirical_receive_covariance(channels, state, noise_var, node, n_draws, rng):
    """Sample covariance of the received signal at one node."""
    num = channels.num_nodes
    eff = [
        state.analog_rx[node]
        @ channels.get(node, b)
        @ state.analog_tx[b]
        @ state.digital_tx[b]
        @ np.sqrt(state.stream_power[b])
        for b in range(num)
    ]
    m_r = eff[0].shape[0]
    n_r = state.analog_rx[node].shape[1]
    y = np.zeros((m_r, n_draws), dtype=complex)
    for b in range(num):
        d = eff[b].shape[1]
        sym = (rng.standard_normal((d, n_draws))
               + 1j * rng.standard_normal((d, n_draws))) / np.sqrt(2.0)
        y += eff[b] @ sym
    noise = (rng.standard_normal((n_r, n_draws))
             + 1j * rng.standard_normal((n_r, n_draws))) * np.sqrt(noise_var[node] / 2.0)
    y += state.analog_rx[node] @ noise
    return (y @ y.conj().T) / n_draws
