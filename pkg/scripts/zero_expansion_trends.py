"""Tabulate |partial sum - target| for the null-function and divisor-log
expansions on a dense log grid, as CSV for external plotting."""
import argparse
import sys
from dataclasses import dataclass

import numpy as np

from gre.arith import build_factor_table, num_divisors
from gre.expansions import RamanujanCoefficients, evaluate_expansion
from gre.reports import rows_to_csv


@dataclass
class TrendConfig:
    x_max: int = 10**6
    points_per_decade: int = 8
    shifts: tuple = (1, 2, 6)


def run(cfg: TrendConfig) -> list[dict]:
    t = build_factor_table(cfg.x_max)
    grid = np.unique(np.logspace(2, np.log10(cfg.x_max), int(cfg.points_per_decade * (np.log10(cfg.x_max) - 2)) + 1)
                     .astype(np.int64))
    families = {
        "R0": (RamanujanCoefficients.ramanujan_r0(), lambda a: 0),
        "H0": (RamanujanCoefficients.hardy_h0(), lambda a: 0),
        "divisor_log": (RamanujanCoefficients.divisor_log(), lambda a: num_divisors(a, t)),
    }
    rows = []
    for name, (G, target) in families.items():
        for a in cfg.shifts:
            ev = evaluate_expansion(G, a, grid, t)
            for x, s in ev.checkpoints:
                rows.append({"family": name, "a": a, "x": int(x), "error": float(abs(s - target(a)))})
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--x-max", type=int, default=10**6)
    p.add_argument("--points-per-decade", type=int, default=8)
    p.add_argument("--out", default="-")
    ns = p.parse_args(argv)
    text = rows_to_csv(run(TrendConfig(ns.x_max, ns.points_per_decade)))
    if ns.out == "-":
        sys.stdout.write(text)
    else:
        with open(ns.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
