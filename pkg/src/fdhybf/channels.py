"""Channel synthesis for one realization of the K-pair full-duplex network.

Cross links and inter-node interference links use a clustered geometric
multipath model on uniform linear arrays; the loopback (self-interference)
channel of each node mixes a deterministic near-field line-of-sight matrix
with a reflected multipath component through a Rician factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import FdhybfError, GeometryError

if TYPE_CHECKING:  # pragma: no cover
    from .config import SystemConfig

#: Default carrier wavelength in meters (28 GHz).
DEFAULT_WAVELENGTH = 0.01071


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array with element spacing in wavelengths."""

    num_elements: int
    spacing: float = 0.5

    def __post_init__(self):
        if self.num_elements < 1:
            raise ValueError(f"num_elements must be >= 1, got {self.num_elements}")
        if self.spacing <= 0.0:
            raise ValueError(f"spacing must be > 0, got {self.spacing}")


@dataclass(frozen=True)
class ClusterChannelParams:
    """Clustered multipath model: ray count and angle supports in degrees."""

    num_clusters: int = 3
    num_paths: int = 6
    aoa_range: tuple = (-20.0, 20.0)
    aod_range: tuple = (-20.0, 20.0)

    def __post_init__(self):
        if self.num_clusters < 1 or self.num_paths < 1:
            raise ValueError("num_clusters and num_paths must be >= 1")
        for name, (lo, hi) in (("aoa_range", self.aoa_range), ("aod_range", self.aod_range)):
            if not (-90.0 <= lo <= hi <= 90.0):
                raise ValueError(f"{name} must be an interval within [-90, 90], got {(lo, hi)}")


@dataclass(frozen=True)
class SiChannelParams:
    """Loopback channel model parameters.

    ``rician_factor`` is a linear power ratio.  The transmit and receive
    arrays are modelled as two line segments with centers ``array_separation``
    meters apart and the receive array rotated by ``relative_angle_deg``.
    """

    rician_factor: float = 1e5
    array_separation: float = 0.2
    relative_angle_deg: float = 90.0
    wavelength: float = DEFAULT_WAVELENGTH

    def __post_init__(self):
        if self.rician_factor < 0.0:
            raise ValueError(f"rician_factor must be >= 0, got {self.rician_factor}")
        if self.array_separation <= 0.0:
            raise ValueError(f"array_separation must be > 0, got {self.array_separation}")
        if self.wavelength <= 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")


@dataclass
class ChannelSet:
    """All channel matrices of one realization, keyed ``(receiver, transmitter)``."""

    num_nodes: int
    matrices: dict = field(default_factory=dict)

    def get(self, rx, tx):
        try:
            return self.matrices[(rx, tx)]
        except KeyError:
            raise FdhybfError(f"missing channel for receiver {rx}, transmitter {tx}") from None

    def items(self):
        return sorted(self.matrices.items())


def ula_response(geometry, angle_deg):
    """Array response column for a planar wavefront at ``angle_deg``.

    Element ``n`` carries phase ``2*pi*spacing*n*sin(angle)``; all entries
    are unit modulus, so ``||a||^2 = num_elements``.
    """
    if abs(angle_deg) > 90.0:
        raise ValueError(f"angle {angle_deg} deg outside [-90, 90]")
    n = np.arange(geometry.num_elements)
    return np.exp(2j * np.pi * geometry.spacing * n * np.sin(np.radians(angle_deg)))


def _steering_matrix(geometry, angles_deg):
    n = np.arange(geometry.num_elements)[:, None]
    return np.exp(2j * np.pi * geometry.spacing * n * np.sin(np.radians(angles_deg))[None, :])


def draw_cluster_channel(rng, params, rx, tx):
    """One clustered-multipath channel draw of shape ``(N_rx, N_tx)``.

    The matrix is a sum of ``num_clusters * num_paths`` rank-1 ray terms
    with i.i.d. standard complex Gaussian gains and per-ray angles uniform
    on the configured supports.  Steering columns are scaled to unit norm
    so that ``E ||H||_F^2 = N_rx * N_tx``.

    RNG consumption order: ray gains (real then imaginary block), arrival
    angles, departure angles.
    """
    n_rays = params.num_clusters * params.num_paths
    gains = (rng.standard_normal(n_rays) + 1j * rng.standard_normal(n_rays)) / np.sqrt(2.0)
    aoa = rng.uniform(params.aoa_range[0], params.aoa_range[1], n_rays)
    aod = rng.uniform(params.aod_range[0], params.aod_range[1], n_rays)
    a_rx = _steering_matrix(rx, aoa) / np.sqrt(rx.num_elements)
    a_tx = _steering_matrix(tx, aod) / np.sqrt(tx.num_elements)
    scale = np.sqrt(rx.num_elements * tx.num_elements / n_rays)
    return scale * ((a_rx * gains) @ a_tx.T)


def element_distances(params, rx, tx):
    """Distances between every receive/transmit element pair of one node.

    Transmit element ``n`` sits at ``(x_n, 0, 0)`` with
    ``x_n = (n - (N_t - 1)/2) * delta``; receive element ``m`` sits at
    ``(z_m cos(psi), D, z_m sin(psi))`` with the same centering, where ``D``
    is the array separation and ``psi`` the relative rotation (90 degrees
    puts the receive segment orthogonal to the transmit one).
    """
    delta_t = tx.spacing * params.wavelength
    delta_r = rx.spacing * params.wavelength
    x = (np.arange(tx.num_elements) - (tx.num_elements - 1) / 2.0) * delta_t
    z = (np.arange(rx.num_elements) - (rx.num_elements - 1) / 2.0) * delta_r
    psi = np.radians(params.relative_angle_deg)
    dx = z[:, None] * np.cos(psi) - x[None, :]
    dz = z[:, None] * np.sin(psi)
    return np.sqrt(dx**2 + params.array_separation**2 + dz**2)


def si_los_channel(params, rx, tx):
    """Deterministic near-field line-of-sight loopback matrix.

    Entry ``(m, n)`` is ``rho / r_mn * exp(-2j*pi*r_mn/wavelength)`` with
    ``rho`` chosen so that ``||H||_F^2 = N_rx * N_tx`` exactly.
    """
    dist = element_distances(params, rx, tx)
    if np.any(dist <= 0.0):
        raise GeometryError("non-positive element distance in loopback geometry")
    raw = np.exp(-2j * np.pi * dist / params.wavelength) / dist
    rho = np.sqrt(rx.num_elements * tx.num_elements / np.sum(1.0 / dist**2))
    return rho * raw


def draw_si_channel(rng, params, cluster, rx, tx):
    """Rician mixture of the line-of-sight and a reflected multipath draw."""
    kappa = params.rician_factor
    los = si_los_channel(params, rx, tx)
    reflected = draw_cluster_channel(rng, cluster, rx, tx)
    return np.sqrt(kappa / (kappa + 1.0)) * los + np.sqrt(1.0 / (kappa + 1.0)) * reflected


def draw_channel_set(rng, config: "SystemConfig"):
    """Draw all ``(2K)^2`` ordered-pair channels of one realization.

    Draw order is fixed (receivers in node order, then transmitters in node
    order) so a seed fully determines the set.  Diagonal pairs use the
    loopback model, all others the clustered model.
    """
    matrices = {}
    for rx_node in range(config.num_nodes):
        rx_geom = config.rx_geometry(rx_node)
        for tx_node in range(config.num_nodes):
            tx_geom = config.tx_geometry(tx_node)
            if rx_node == tx_node:
                matrices[(rx_node, tx_node)] = draw_si_channel(
                    rng, config.si, config.cluster, rx_geom, tx_geom
                )
            else:
                matrices[(rx_node, tx_node)] = draw_cluster_channel(
                    rng, config.cluster, rx_geom, tx_geom
                )
    return ChannelSet(config.num_nodes, matrices)
