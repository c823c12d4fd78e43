"""LHS vs explicit-formula RHS for the toy correlation, several p0, as CSV."""
import argparse
import sys

from gre.arith import build_factor_table
from gre.correlations import build_counterexample_one, reef_gap_report
from gre.reports import rows_to_csv


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--p0", type=int, nargs="+", default=[3, 5, 7, 11, 13])
    p.add_argument("--periods", type=int, default=4)
    p.add_argument("--out", default="-")
    ns = p.parse_args(argv)
    t = build_factor_table(10**5)
    rows = []
    for p0 in ns.p0:
        ce = build_counterexample_one(p0, t)
        rep = reef_gap_report(ce, ns.periods * p0, t)
        for r in rep["rows"]:
            rows.append({"p0": p0, "n0": ce.n0, "a": r["a"], "lhs": r["lhs"], "rhs": str(r["rhs"]),
                         "equal": int(r["equal"])})
    text = rows_to_csv(rows)
    if ns.out == "-":
        sys.stdout.write(text)
    else:
        with open(ns.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
