"""Command-line entry point: run sweeps, validate configs, dump channels."""

from __future__ import annotations

import argparse
import sys

from .config import load_config
from .errors import ConfigError, FdhybfError
from .harness import (
    default_threads,
    dump_channels,
    run_experiment,
    summary_header,
    write_csv,
    TRACE_FIELDS,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser():
    parser = _Parser(prog="fdhybf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the configured sweep and write CSV")
    run_p.add_argument("--config", required=True, help="JSON config path")
    run_p.add_argument("--out", required=True, help="summary CSV output path")
    run_p.add_argument("--threads", type=int, default=None,
                       help=f"worker processes (default ${'{'}FDHYBF_THREADS{'}'} or 1)")
    run_p.add_argument("--trace", default=None,
                       help="also write per-iteration trace CSV to this path")

    val_p = sub.add_parser("validate", help="check a config file and exit")
    val_p.add_argument("--config", required=True)

    dump_p = sub.add_parser("dump-channels",
                            help="write one channel realization as text files")
    dump_p.add_argument("--config", required=True)
    dump_p.add_argument("--out", required=True, help="output directory")
    dump_p.add_argument("--seed", type=int, default=None,
                        help="realization seed (default: base_seed)")
    return parser


def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1

    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "validate":
            print("ok")
            return 0
        if args.command == "dump-channels":
            seed = config.base_seed if args.seed is None else args.seed
            written = dump_channels(config, seed, args.out)
            print(f"wrote {len(written)} matrices to {args.out}")
            return 0
        threads = args.threads if args.threads is not None else default_threads()
        summary, trace = run_experiment(config, threads=threads)
        write_csv(args.out, summary_header(config), summary)
        if args.trace:
            write_csv(args.trace, TRACE_FIELDS, trace)
        print(f"wrote {len(summary)} rows to {args.out}")
        return 0
    except FdhybfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main():
    raise SystemExit(cli_main(sys.argv[1:]))
