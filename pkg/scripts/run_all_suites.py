"""Run every verification suite and write one JSON report per suite."""
import argparse
import pathlib
import time

from gre.arith import build_factor_table
from gre.reports import dumps
from gre.suites import SUITES, SuiteConfig, run


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out-dir", default="reports")
    p.add_argument("--sieve-limit", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    ns = p.parse_args(argv)
    out = pathlib.Path(ns.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t = build_factor_table(ns.sieve_limit)
    failed = 0
    for suite in SUITES:
        start = time.perf_counter()
        res = run(SuiteConfig(suite, sieve_limit=ns.sieve_limit, seed=ns.seed), t)
        (out / f"{suite}.json").write_text(dumps(res.report))
        failed += not res.passed
        print(f"{suite:22s} {'pass' if res.passed else 'FAIL'}  {time.perf_counter() - start:6.2f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
