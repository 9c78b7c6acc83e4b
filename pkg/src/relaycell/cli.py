"""Command line entry point: ``relaycell <experiment> [options]``."""

from __future__ import annotations

import argparse
import sys

from .config import ScenarioConfig, load_config
from .experiments import EXPERIMENTS, run_experiment


def build_parser():
    parser = argparse.ArgumentParser(
        prog="relaycell",
        description="Reproduce relay-enhanced cell figures as CSV data.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS + ("all",))
    parser.add_argument("--config", help="scenario file with 'key = value' lines")
    parser.add_argument("--out", default=".", help="output directory (default: cwd)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--backend", choices=("closed", "geometric"))
    parser.add_argument("--df-mode", choices=("eq20", "minrate"))
    parser.add_argument("--sector", type=int, choices=(0, 60, 120))
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count")
    parser.add_argument("--workers", type=int, help="Monte Carlo worker threads")
    return parser


def _overrides(args):
    pairs = {
        "seed": args.seed,
        "sir_backend": args.backend,
        "df_mode": args.df_mode,
        "sector": args.sector,
        "n_samples": args.samples,
        "worker_count": args.workers,
    }
    return {k: v for k, v in pairs.items() if v is not None}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config) if args.config else ScenarioConfig()
        config = config.replace(**_overrides(args))
        for path in run_experiment(args.experiment, config, args.out):
            print(path)
    except (ValueError, OSError) as exc:
        print(f"relaycell: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
