"""Command line entry point: ``gre <suite> [options]``."""
from __future__ import annotations

import argparse
import sys

from . import reports
from .errors import GreError, InvalidArgument, OutOfRange, ResourceError
from .suites import SUITES, SuiteConfig, run

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gre", description="Run a reproducible verification suite.")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--sieve-limit", type=int, default=10**6)
    p.add_argument("--eta", type=float, default=1.5)
    p.add_argument("--p0", type=int, default=5)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["verify"]:
        argv = argv[1:]
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = SuiteConfig(ns.suite, ns.sieve_limit, ns.eta, ns.p0, ns.out, ns.format, ns.seed)
    try:
        res = run(cfg)
    except ResourceError as exc:
        print(f"gre: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidArgument, OutOfRange) as exc:
        print(f"gre: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GreError as exc:
        print(f"gre: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except MemoryError:
        print("gre: out of memory", file=sys.stderr)
        return EXIT_RESOURCE
    text = reports.dumps(res.report) if cfg.format == "json" else reports.rows_to_csv(res.rows, res.columns)
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    print(f"{cfg.suite}: {'pass' if res.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if res.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
