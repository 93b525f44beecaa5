"""Command-line harness for the experiment suite.

Usage::

    rsbl <command> [--config PATH] [--seed U64] [--trials N] [--out DIR]
                   [--quick|--full]

Commands: table1, cluster-robustness, bound-verify, probe, sandwich,
lowrank. Flags override config-file values, which override the built-in
per-command defaults; ``RSBL_OUT`` sets the default output directory. The
exit code is 0 exactly when every hard assertion (holds rates at 100%,
all cells converged) passed; on failure a machine-readable summary goes to
standard error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .config import ExperimentConfig
from .experiments import (
    run_bound_verify,
    run_cluster_robustness,
    run_lowrank,
    run_probe,
    run_sandwich,
    run_table1,
)

_COMMANDS = {
    "table1": run_table1,
    "cluster-robustness": run_cluster_robustness,
    "bound-verify": run_bound_verify,
    "probe": run_probe,
    "sandwich": run_sandwich,
    "lowrank": run_lowrank,
}

_DEFAULTS = {
    "table1": dict(
        experiment="table1",
        n=2000,
        b_list=(1, 2, 4, 8, 16, 32),
        beta_list=(1.0, 0.1, 0.01, 0.001),
        trials=5,
    ),
    "cluster-robustness": dict(
        experiment="cluster-robustness",
        n=1000,
        cluster_dim=60,
        trials=200,
        variant="both",
    ),
    "bound-verify": dict(
        experiment="bound-verify",
        b_list=(1, 2, 3),
        d_list=(2, 3),
        trials=20,
    ),
    "probe": dict(experiment="probe", b_list=(2,), trials=2000),
    "sandwich": dict(experiment="sandwich", b_list=(1, 2, 3, 4), trials=1000),
    "lowrank": dict(
        experiment="lowrank",
        nrows=30,
        n=20,
        b_list=(2,),
        d_list=(2,),
        ell=6,
        eps=0.1,
        trials=1,
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsbl", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="path to a key = value configuration file")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--trials", type=int, help="trial / seed count")
    parser.add_argument("--out", help="output directory (default: $RSBL_OUT or ./out)")
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--quick", action="store_true", help="reduced trial budget")
    mode.add_argument("--full", action="store_true", help="full 1000-trial budget")
    return parser


def resolve_config(args) -> ExperimentConfig:
    overrides = dict(_DEFAULTS[args.command])
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            file_config = ExperimentConfig.from_text(fh.read())
        config = file_config
        for key, value in overrides.items():
            # command defaults fill only fields the file left at class defaults
            if getattr(config, key) == getattr(ExperimentConfig, key):
                setattr(config, key, value)
    else:
        config = ExperimentConfig(**overrides)
    if args.seed is not None:
        config.seed = args.seed
    if args.trials is not None:
        config.trials = args.trials
    env_out = os.environ.get("RSBL_OUT")
    if args.out:
        config.out_dir = args.out
    elif env_out and config.out_dir == ExperimentConfig.out_dir:
        config.out_dir = env_out
    if args.quick:
        config.mode = "quick"
    if args.full:
        config.mode = "full"
        if args.command == "cluster-robustness" and args.trials is None:
            config.trials = 1000
    config.experiment = args.command
    config.validate()
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = resolve_config(args)
    result = _COMMANDS[args.command](config)
    if result.console:
        print(result.console)
    print(f"wrote {', '.join(result.files)} to {config.out_dir}")
    if not result.ok:
        json.dump({"command": args.command, "failures": result.failures}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    return 0


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
