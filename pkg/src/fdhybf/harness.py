"""Monte-Carlo sweep driver: seeded trials, scheme dispatch, CSV output.

Every scheme at a given (snr, trial) cell consumes the identical channel
realization, so scheme comparisons are paired.  Output rows are merged in
deterministic (snr, trial, scheme) order regardless of worker scheduling,
which keeps the CSV a pure function of (config, base_seed).
"""

from __future__ import annotations

import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .benchmarks import run_fully_digital_fd, run_fully_digital_hd
from .channels import draw_channel_set
from .config import DEFAULT_SCHEMES
from .errors import FdhybfError
from .optimizer import run_hybf

SUMMARY_FIELDS = ("seed", "snr_db", "scheme", "status", "iterations", "final_wsr_nats")
TRACE_FIELDS = ("seed", "snr_db", "scheme", "iter", "wsr_nats")

_RUNNERS = {
    "hybf": run_hybf,
    "digital_fd": run_fully_digital_fd,
    "digital_hd": run_fully_digital_hd,
}

THREADS_ENV_VAR = "FDHYBF_THREADS"


def _fmt(value):
    return repr(float(value))


def _config_at_snr(config, snr_db):
    # the sweep holds the power budgets fixed and moves the noise floor
    sigma2 = tuple(p * 10.0 ** (-snr_db / 10.0) for p in config.power)
    return dataclasses.replace(config, sigma2=sigma2)


def _scheme_rng(seed, snr_db, scheme):
    return np.random.default_rng(
        [seed, int(round(snr_db * 1000)) & 0x7FFFFFFF, DEFAULT_SCHEMES.index(scheme)]
    )


def run_cell(config, snr_db, trial):
    """Run every configured scheme on one (snr, trial) channel realization.

    Returns (summary_rows, trace_rows) as lists of value tuples.
    """
    seed = config.base_seed + trial
    channels = draw_channel_set(np.random.default_rng(seed), config)
    cfg = _config_at_snr(config, snr_db)
    summary = []
    trace = []
    for scheme in sorted(set(config.schemes)):
        runner = _RUNNERS[scheme]
        try:
            result = runner(channels, cfg, cfg.solver,
                            _scheme_rng(seed, snr_db, scheme),
                            seed=seed, snr_db=snr_db)
        except (FdhybfError, np.linalg.LinAlgError) as exc:
            status = type(exc).__name__
            summary.append((seed, snr_db, scheme, status, "", "")
                           + ("",) * config.num_nodes)
            continue
        summary.append(
            (seed, snr_db, scheme, "ok", result.iterations,
             _fmt(result.final_wsr))
            + tuple(_fmt(p) for p in result.node_powers)
        )
        for i, wsr in enumerate(result.wsr_trace, start=1):
            trace.append((seed, snr_db, scheme, i, _fmt(wsr)))
    return summary, trace


def run_experiment(config, threads=1):
    """Full sweep over (snr, trial, scheme); returns (summary, trace) rows."""
    cells = [(snr, trial) for snr in config.snr_db for trial in range(config.trials)]
    if threads > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_cell_star,
                                    [(config, snr, trial) for snr, trial in cells]))
    else:
        results = [run_cell(config, snr, trial) for snr, trial in cells]
    summary = [row for cell_summary, _ in results for row in cell_summary]
    trace = [row for _, cell_trace in results for row in cell_trace]
    key = lambda row: (row[1], row[0], row[2])  # (snr, seed, scheme)
    summary.sort(key=key)
    trace.sort(key=key)
    return summary, trace


def _run_cell_star(args):
    return run_cell(*args)


def summary_header(config):
    powers = tuple(f"power_node_{a + 1}" for a in range(config.num_nodes))
    return SUMMARY_FIELDS + powers


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def dump_channels(config, seed, out_dir):
    """Write one realization's matrices as plain-text files.

    One file per (receiver, transmitter) pair: first line "rows cols", then
    one line per matrix row with space-separated "re,im" entries.
    """
    channels = draw_channel_set(np.random.default_rng(seed), config)
    os.makedirs(out_dir, exist_ok=True)
    half = config.k_pairs

    def label(node):
        return f"l{node + 1}" if node < half else f"r{node - half + 1}"

    written = []
    for (rx, tx), matrix in channels.items():
        name = f"H_{label(rx)}_{label(tx)}.txt"
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{matrix.shape[0]} {matrix.shape[1]}\n")
            for row in matrix:
                fh.write(" ".join(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in row))
                fh.write("\n")
        written.append(path)
    return written


def default_threads():
    value = os.environ.get(THREADS_ENV_VAR, "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1
