"""``sspca-bench``: run a YAML-configured benchmark grid.

Exit codes: 0 success, 2 invalid configuration or arguments, 3 run refused
by the work guard (use ``--force``), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .exceptions import ConfigError
from .experiment import CALL_GUARD, load_config, plan, read_external, run_experiment, write_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sspca-bench", description="Sparse PCA support-recovery benchmarks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the experiment described by a YAML config")
    run.add_argument("config", help="path to the YAML config")
    run.add_argument("--workers", type=int, help="worker processes (overrides the config)")
    run.add_argument("--out", help="output directory (overrides the config)")
    run.add_argument("--dry-run", action="store_true", help="print the work estimate and exit")
    run.add_argument("--force", action="store_true", help=f"allow runs above {CALL_GUARD:.0e} greedy calls")
    run.add_argument("--compare", metavar="FILE", help="CSV of external supports (grid_id, replication, label, support)")
    return parser


def _run(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"sspca-bench: invalid config {args.config}:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"sspca-bench: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.workers is not None:
        if args.workers < 1:
            print("sspca-bench: --workers must be >= 1", file=sys.stderr)
            return EXIT_CONFIG
        cfg.workers = args.workers
    if args.out:
        cfg.output_dir = args.out

    est = plan(cfg)
    print(
        f"{cfg.name}: {len(cfg.grid)} grid points x {cfg.replications} replications = {est.trials} trials, "
        f"{est.algorithm_runs} algorithm runs, {est.greedy_calls} greedy calls, "
        f"{est.exhaustive_evaluations} exhaustive evaluations"
    )
    if args.dry_run:
        return EXIT_OK
    if est.work > CALL_GUARD and not args.force:
        print(f"sspca-bench: estimated work {est.work} exceeds {CALL_GUARD}; rerun with --force", file=sys.stderr)
        return EXIT_GUARD

    external = None
    if args.compare:
        try:
            external = read_external(args.compare)
        except ConfigError as exc:
            for problem in exc.problems:
                print(f"sspca-bench: {problem}", file=sys.stderr)
            return EXIT_CONFIG
        except OSError as exc:
            print(f"sspca-bench: cannot read {args.compare}: {exc.strerror}", file=sys.stderr)
            return EXIT_IO

    results = run_experiment(cfg, external=external)
    meta = {"name": cfg.name, "master_seed": cfg.master_seed, "replications": cfg.replications}
    try:
        paths = write_outputs(results, cfg.output_dir, cfg.output_format, meta)
    except OSError as exc:
        print(f"sspca-bench: {exc}", file=sys.stderr)
        return EXIT_IO
    errors = sum(1 for r in results if r.error)
    print(f"wrote {len(results)} rows to {paths['trials']}" + (f" ({errors} with errors)" if errors else ""))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _run(args)
    return EXIT_CONFIG  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
