"""Command-line entry point.

Subcommands:
  simulate     run one policy under one seed
  sweep-users  cross product of (policy, user count, seed)
  sweep-lr     one training per (learning rate, seed)

Exit codes: 0 success, 1 configuration error, 2 runtime abort (whatever
rows were produced before the abort are still flushed to the output dir).
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback

from .errors import ConfigError
from .harness import (
    POLICIES,
    ExperimentConfig,
    emit_outputs,
    ensure_writable,
    load_config,
    run_policy,
    sweep_learning_rates,
    sweep_users,
)
from .nn import save_mlp


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="experiment config file (omit for defaults)")
    parser.add_argument("--out", help="output directory (default: from config)")
    parser.add_argument("--plots", action="store_true", help="also write SVG plots")
    parser.add_argument("--episodes", type=int, help="override training episode count")
    parser.add_argument("--timing", action="store_true",
                        help="measure wall-clock seconds (makes output non-reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aigc-edge-sim",
        description="Edge model-caching and resource-allocation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one policy under one seed")
    sim.add_argument("--policy", required=True, choices=POLICIES)
    sim.add_argument("--seed", type=int, required=True)
    _add_common(sim)

    users = sub.add_parser("sweep-users", help="paired policy sweep over user counts")
    users.add_argument("--counts", type=int, nargs="+", help="override sweep user counts")
    users.add_argument("--seeds", type=int, nargs="+", help="override sweep seeds")
    users.add_argument("--policies", nargs="+", choices=POLICIES, help="subset of policies")
    _add_common(users)

    lr = sub.add_parser("sweep-lr", help="training convergence over learning rates")
    lr.add_argument("--lrs", type=float, nargs="+", help="override learning-rate grid")
    lr.add_argument("--seeds", type=int, nargs="+", help="override sweep seeds")
    _add_common(lr)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        exp = load_config(args.config) if args.config else ExperimentConfig()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1

    out_dir = args.out if args.out else exp.run.out_dir
    try:
        ensure_writable(out_dir)  # fail before any computation starts
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    rows = []
    try:
        if args.command == "simulate":
            agent_sink: list = []
            rows.extend(
                run_policy(
                    args.policy,
                    exp,
                    args.seed,
                    episodes=args.episodes,
                    timing=args.timing,
                    agent_out=agent_sink,
                )
            )
            if agent_sink:
                save_mlp(os.path.join(out_dir, f"ddpg_actor_seed{args.seed}.txt"), agent_sink[0].actor)
        elif args.command == "sweep-users":
            rows.extend(
                sweep_users(
                    exp,
                    counts=args.counts,
                    seeds=args.seeds,
                    policies=tuple(args.policies) if args.policies else POLICIES,
                    episodes=args.episodes,
                    timing=args.timing,
                )
            )
        else:
            rows.extend(
                sweep_learning_rates(
                    exp,
                    lrs=args.lrs,
                    seeds=args.seeds,
                    episodes=args.episodes,
                    timing=args.timing,
                )
            )
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        emit_outputs(rows, out_dir, plots=False)  # flush partial results
        print(f"aborted; partial results in {out_dir}", file=sys.stderr)
        return 2

    emit_outputs(rows, out_dir, plots=args.plots)
    print(f"wrote {len(rows)} metric rows to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
