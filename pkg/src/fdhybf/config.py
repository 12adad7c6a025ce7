"""Experiment configuration: defaults, JSON loading and validation.

Per-node quantities accept either a scalar (applied to every node) or a
list with one entry per node (left set first, then right set).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .channels import ArrayGeometry, ClusterChannelParams, SiChannelParams
from .errors import ConfigError
from .optimizer import SolverOptions

DEFAULT_SCHEMES = ("hybf", "digital_fd", "digital_hd")
DEFAULT_SNR_DB = (-10.0, 0.0, 10.0, 20.0)


@dataclass(frozen=True)
class SystemConfig:
    """Full description of one simulated network and sweep."""

    k_pairs: int = 2
    n_tx: tuple = ()
    n_rx: tuple = ()
    m_tx: tuple = ()
    m_rx: tuple = ()
    d: tuple = ()
    weights: tuple = ()
    power: tuple = ()
    sigma2: tuple = ()
    snr_db: tuple = DEFAULT_SNR_DB
    trials: int = 20
    base_seed: int = 0
    cluster: ClusterChannelParams = field(default_factory=ClusterChannelParams)
    si: SiChannelParams = field(default_factory=SiChannelParams)
    schemes: tuple = DEFAULT_SCHEMES
    solver: SolverOptions = field(default_factory=SolverOptions)

    @property
    def num_nodes(self):
        return 2 * self.k_pairs

    def tx_geometry(self, node):
        return ArrayGeometry(self.n_tx[node])

    def rx_geometry(self, node):
        return ArrayGeometry(self.n_rx[node])


def _per_node(value, num_nodes, cast):
    if isinstance(value, (list, tuple)):
        return tuple(cast(v) for v in value)
    return (cast(value),) * num_nodes


def _build(doc):
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    known = {
        "K", "n_tx", "n_rx", "m_tx", "m_rx", "d", "weights", "power",
        "sigma2", "snr_db", "trials", "base_seed", "channel", "si",
        "schemes", "solver",
    }
    unknown = sorted(set(doc) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")

    k_pairs = int(doc.get("K", 2))
    num_nodes = 2 * k_pairs
    n_tx = _per_node(doc.get("n_tx", 100), num_nodes, int)
    n_rx = _per_node(doc.get("n_rx", 100), num_nodes, int)
    m_tx = _per_node(doc.get("m_tx", 32), num_nodes, int)
    m_rx = _per_node(doc.get("m_rx", 32), num_nodes, int)
    if "d" in doc:
        d = _per_node(doc["d"], num_nodes, int)
    else:
        d = tuple(max(1, m // 2) for m in m_tx)

    channel_doc = dict(doc.get("channel", {}))
    si_doc = dict(doc.get("si", {}))
    solver_doc = dict(doc.get("solver", {}))
    try:
        cluster = ClusterChannelParams(
            num_clusters=int(channel_doc.pop("num_clusters", 3)),
            num_paths=int(channel_doc.pop("num_paths", 6)),
            aoa_range=tuple(float(v) for v in channel_doc.pop("aoa_deg", (-20.0, 20.0))),
            aod_range=tuple(float(v) for v in channel_doc.pop("aod_deg", (-20.0, 20.0))),
        )
        si = SiChannelParams(
            rician_factor=float(si_doc.pop("rician_factor", 1e5)),
            array_separation=float(si_doc.pop("separation_m", 0.2)),
            relative_angle_deg=float(si_doc.pop("relative_angle_deg", 90.0)),
            wavelength=float(si_doc.pop("wavelength_m", 0.01071)),
        )
        solver = SolverOptions(
            max_outer_iters=int(solver_doc.pop("max_outer_iters", 200)),
            wsr_rel_tol=float(solver_doc.pop("wsr_rel_tol", 1e-4)),
            bisection_tol=float(solver_doc.pop("bisection_tol", 1e-6)),
            multiplier_growth=float(solver_doc.pop("multiplier_growth", 2.0)),
            ridge_eps=float(solver_doc.pop("ridge_eps", 1e-10)),
            max_kron_dim=int(solver_doc.pop("max_kron_dim", 4096)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), [str(exc)]) from exc
    for name, leftover in (("channel", channel_doc), ("si", si_doc),
                           ("solver", solver_doc)):
        if leftover:
            raise ConfigError(
                f"unknown {name} keys: {', '.join(sorted(leftover))}"
            )

    return SystemConfig(
        k_pairs=k_pairs,
        n_tx=n_tx,
        n_rx=n_rx,
        m_tx=m_tx,
        m_rx=m_rx,
        d=d,
        weights=_per_node(doc.get("weights", 1.0), num_nodes, float),
        power=_per_node(doc.get("power", 1.0), num_nodes, float),
        sigma2=_per_node(doc.get("sigma2", 1.0), num_nodes, float),
        snr_db=tuple(float(s) for s in doc.get("snr_db", DEFAULT_SNR_DB)),
        trials=int(doc.get("trials", 20)),
        base_seed=int(doc.get("base_seed", 0)),
        cluster=cluster,
        si=si,
        schemes=tuple(doc.get("schemes", DEFAULT_SCHEMES)),
        solver=solver,
    )


def validate_config(config):
    """Return the list of violated invariants (empty when valid)."""
    problems = []
    if config.k_pairs < 1:
        problems.append(f"K = {config.k_pairs} must be >= 1")
        return problems
    num = config.num_nodes
    for name in ("n_tx", "n_rx", "m_tx", "m_rx", "d", "weights", "power", "sigma2"):
        values = getattr(config, name)
        if len(values) != num:
            problems.append(f"{name} needs {num} per-node entries, got {len(values)}")
    if problems:
        return problems
    half = config.k_pairs
    for a in range(num):
        srv = a + half if a < half else a - half
        if config.n_tx[a] < 1 or config.n_rx[a] < 1:
            problems.append(f"node {a}: antenna counts must be >= 1")
        if config.m_tx[a] > config.n_tx[a]:
            problems.append(
                f"node {a}: m_tx = {config.m_tx[a]} exceeds n_tx = {config.n_tx[a]}"
            )
        if config.m_rx[a] > config.n_rx[a]:
            problems.append(
                f"node {a}: m_rx = {config.m_rx[a]} exceeds n_rx = {config.n_rx[a]}"
            )
        if config.d[a] < 1:
            problems.append(f"node {a}: d must be >= 1")
        elif config.d[a] > min(config.m_tx[a], config.m_rx[srv]):
            problems.append(
                f"node {a}: d = {config.d[a]} exceeds min(m_tx, serving m_rx) = "
                f"{min(config.m_tx[a], config.m_rx[srv])}"
            )
        if config.power[a] <= 0.0:
            problems.append(f"node {a}: power must be > 0")
        if config.sigma2[a] <= 0.0:
            problems.append(f"node {a}: sigma2 must be > 0")
        if config.weights[a] < 0.0:
            problems.append(f"node {a}: weight must be >= 0")
    if config.trials < 1:
        problems.append(f"trials = {config.trials} must be >= 1")
    if not config.snr_db:
        problems.append("snr_db must list at least one point")
    if not config.schemes:
        problems.append("schemes must list at least one scheme")
    for scheme in config.schemes:
        if scheme not in DEFAULT_SCHEMES:
            problems.append(
                f"unknown scheme '{scheme}' (expected one of {', '.join(DEFAULT_SCHEMES)})"
            )
    return problems


def parse_config(doc):
    """Build and validate a config from a parsed JSON document."""
    config = _build(doc)
    problems = validate_config(config)
    if problems:
        raise ConfigError(
            "invalid configuration:\n  " + "\n  ".join(problems), problems
        )
    return config


def load_config(path):
    """Load, default-fill and validate a JSON config file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config parse error: {exc}") from exc
    return parse_config(doc)


def serialize_config(config):
    """JSON-ready document that parses back to an equal config."""
    return {
        "K": config.k_pairs,
        "n_tx": list(config.n_tx),
        "n_rx": list(config.n_rx),
        "m_tx": list(config.m_tx),
        "m_rx": list(config.m_rx),
        "d": list(config.d),
        "weights": list(config.weights),
        "power": list(config.power),
        "sigma2": list(config.sigma2),
        "snr_db": list(config.snr_db),
        "trials": config.trials,
        "base_seed": config.base_seed,
        "channel": {
            "num_clusters": config.cluster.num_clusters,
            "num_paths": config.cluster.num_paths,
            "aoa_deg": list(config.cluster.aoa_range),
            "aod_deg": list(config.cluster.aod_range),
        },
        "si": {
            "rician_factor": config.si.rician_factor,
            "separation_m": config.si.array_separation,
            "relative_angle_deg": config.si.relative_angle_deg,
            "wavelength_m": config.si.wavelength,
        },
        "schemes": list(config.schemes),
        "solver": {
            "max_outer_iters": config.solver.max_outer_iters,
            "wsr_rel_tol": config.solver.wsr_rel_tol,
            "bisection_tol": config.solver.bisection_tol,
            "multiplier_growth": config.solver.multiplier_growth,
            "ridge_eps": config.solver.ridge_eps,
            "max_kron_dim": config.solver.max_kron_dim,
        },
    }
