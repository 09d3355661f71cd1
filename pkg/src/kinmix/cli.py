"""Command line front end.

    python -m kinmix.cli <mode> --config FILE [--output-dir DIR]
                         [--deterministic] [--eps X] [--workers N]

Exit codes: 0 success, 1 a validation check failed, 2 configuration error,
3 numerical failure during a run.
"""
from __future__ import annotations

import argparse
import sys

from .config import MODES, ConfigError, load_config
from .harness import run_mode


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kinmix", description=__doc__.splitlines()[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", required=True, help="path to a key = value config file")
    p.add_argument("--output-dir", default=None, help="override output_dir from the config")
    p.add_argument("--deterministic", action="store_true",
                   help="force deterministic reductions regardless of the config")
    p.add_argument("--eps", type=float, default=None, help="override kinetic.eps")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes for the limit study (never part of the config hash)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if cfg.mode != args.mode:
            raise ConfigError(
                f"config declares mode = {cfg.mode} but the command line asked for {args.mode}"
            )
        if args.output_dir is not None:
            cfg = cfg.with_value("output_dir", args.output_dir)
        if args.deterministic:
            cfg = cfg.with_value("deterministic", True)
        if args.eps is not None:
            if args.eps <= 0.0:
                raise ConfigError("--eps must be positive")
            cfg = cfg.with_value("kinetic.eps", args.eps)
        if args.workers < 1:
            raise ConfigError("--workers must be at least 1")
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        code, root = run_mode(cfg, workers=args.workers)
    except (FloatingPointError, ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(root)
    return code


if __name__ == "__main__":
    sys.exit(main())
