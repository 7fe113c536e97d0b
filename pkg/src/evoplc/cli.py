"""Command-line front end: run, compare, oracle, decode."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from . import experiment
from .evolution import ConfigError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_EVOLUTION = 4

logger = logging.getLogger("evoplc")


def _setup_logging() -> None:
    level = os.environ.get("EVOPLC_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _apply_overrides(config, args) -> "experiment.RunConfig":
    if getattr(args, "seed", None) is not None:
        config = replace(config, evolution=replace(config.evolution, seed=args.seed))
    if getattr(args, "generations", None) is not None:
        config = replace(config, evolution=replace(config.evolution,
                                                   generations=args.generations))
    if getattr(args, "out_dir", None) is not None:
        config = replace(config, out_dir=Path(args.out_dir))
    if getattr(args, "jobs", None) is not None:
        config = replace(config, jobs=args.jobs)
    return config


def _cmd_run(args) -> int:
    config = _apply_overrides(experiment.load_run_config(args.config), args)
    report = experiment.run(config)
    print(f"run complete: pa_mode={report.pa_mode} seed={report.seed} "
          f"front_size={report.front_size} best_fitness={report.best_fitness}")
    print(f"artifacts in {config.out_dir}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    prior = _apply_overrides(experiment.load_run_config(args.prior), args)
    progressive = _apply_overrides(experiment.load_run_config(args.progressive), args)
    out = Path(args.out_dir) if args.out_dir else None
    report = experiment.compare(prior, progressive, out_dir=out)
    print(f"compare complete: prior front {report.prior.front_size}, "
          f"progressive front {report.progressive.front_size}")
    print(f"prior solutions dominated by progressive front: "
          f"{report.coverage_prior_dominated:.3f}")
    print(f"progressive solutions dominated by prior front: "
          f"{report.coverage_progressive_dominated:.3f}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    config = _apply_overrides(experiment.load_run_config(args.config), args)
    info = experiment.oracle(config)
    print(f"oracle complete: space_size={info['space_size']} "
          f"front_size={info['front_size']}")
    print(f"artifacts in {config.out_dir}")
    return EXIT_OK


def _cmd_decode(args) -> int:
    out_dir = Path(args.out_dir) if args.out_dir else Path.cwd()
    names = experiment.decode_genome_file(args.genome, out_dir)
    print(f"decoded {args.genome} -> {', '.join(names)} in {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evoplc",
        description="Evolve tabular boolean PLC programs against a tank twin "
                    "and decode the results to structured text.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--jobs", type=int, help="parallel evaluation workers")
        p.add_argument("--out-dir", help="override the output directory")
        p.add_argument("--generations", type=int,
                       help="override the configured generation count")

    p_run = sub.add_parser("run", help="run one configured experiment")
    p_run.add_argument("config")
    common(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_cmp = sub.add_parser("compare", help="run prior and progressive modes "
                                           "on a shared plant and compare fronts")
    p_cmp.add_argument("prior")
    p_cmp.add_argument("progressive")
    common(p_cmp)
    p_cmp.set_defaults(fn=_cmd_compare)

    p_orc = sub.add_parser("oracle", help="exhaustively evaluate a small "
                                          "genome space and its exact front")
    p_orc.add_argument("config")
    common(p_orc)
    p_orc.set_defaults(fn=_cmd_oracle)

    p_dec = sub.add_parser("decode", help="decode a genome JSON file to "
                                          "program artifacts")
    p_dec.add_argument("genome")
    p_dec.add_argument("--out-dir", help="where to write the artifacts")
    p_dec.set_defaults(fn=_cmd_decode)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, experiment.SpaceTooLarge) as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except experiment.IoError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # evolution and evaluation failures
        logger.error("%s", exc)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_EVOLUTION


if __name__ == "__main__":
    sys.exit(main())
