"""Truncation helpers shared by the transforms and the verifiers.

Infinite series are only ever seen through partial sums at checkpoints.
The three-way verdict below is a heuristic label, never a proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

PLAUSIBLY_FINITE = "plausibly-finite"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"

# Rates are increments per unit of log(X).  A harmonic-type series keeps a
# constant rate, a convergent one must see its rate shrink.
SHRINK_RATIO = 0.9
HARMONIC_RATIO = 0.97


def geometric_checkpoints(n_max: int, ratio: int = 10, count: int = 4, floor: int = 2) -> list[int]:
    """``n_max // ratio**k`` for k = count-1..0, dropping values below ``floor``."""
    pts = sorted({n_max // ratio**k for k in range(count)})
    return [x for x in pts if x >= floor]


def fraction_checkpoints(n_max: int, divisors=(8, 4, 2, 1)) -> list[int]:
    return sorted({max(1, n_max // k) for k in divisors})


def partial_sums_at(terms: np.ndarray, checkpoints) -> list:
    """Partial sums of terms[1..X] for each X; terms[0] is ignored."""
    cs = np.cumsum(terms[1:])
    return [cs[x - 1] if x >= 1 else 0 for x in checkpoints]


def series_verdict(checkpoints, partials, tol: float = 1e-12) -> str:
    """Label a series of non-negative terms from its checkpointed partial sums."""
    xs = list(checkpoints)
    ss = [float(abs(s)) for s in partials]
    if len(xs) < 2:
        return INCONCLUSIVE
    incs = [ss[i] - ss[i - 1] for i in range(1, len(ss))]
    if abs(incs[-1]) <= tol:
        return PLAUSIBLY_FINITE
    rates = [inc / math.log(xs[i + 1] / xs[i]) for i, inc in enumerate(incs)]
    if len(rates) < 3:
        return INCONCLUSIVE
    ratios = [rates[i] / rates[i - 1] if rates[i - 1] > 0 else math.inf for i in range(1, len(rates))]
    tail = ratios[-2:]
    if all(r >= HARMONIC_RATIO for r in tail):
        return DIVERGING
    if all(r <= SHRINK_RATIO for r in tail):
        return PLAUSIBLY_FINITE
    return INCONCLUSIVE


@dataclass
class SeriesReport:
    label: str
    checkpoints: list[tuple[int, float]]
    verdict: str
    extra: dict = field(default_factory=dict)

    @property
    def last(self) -> float:
        return self.checkpoints[-1][1]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "checkpoints": [[x, v] for x, v in self.checkpoints],
            "verdict": self.verdict,
            **self.extra,
        }


def fit_constant(stats) -> float:
    """Empirical constant: the largest observed statistic."""
    vals = [float(s) for s in stats]
    return max(vals) if vals else 0.0
