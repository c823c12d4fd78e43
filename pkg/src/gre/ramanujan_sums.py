"""Ramanujan sums c_q(a) = sum over j <= q, gcd(j, q) = 1 of cos(2 pi j a / q).

Three routes to the same integer:

* ``cq_direct``  -- the cosine sum itself, rounded; used only as an oracle.
* ``cq_holder``  -- mu(q/g) phi(q) / phi(q/g) with g = gcd(a, q).
* ``cq_kluyver`` -- sum over d | gcd(a, q) of d mu(q/d); the production path.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import FactorTable, divisors, mobius, totient
from .errors import InvalidArgument, InvariantViolation, NumericalConsistencyError

# beyond this modulus the float oracle is not validated
DIRECT_VALIDATED_Q = 10**5
DIRECT_RESIDUAL = 1e-6


def _check_args(q: int, a: int) -> None:
    if q < 1 or a < 1:
        raise InvalidArgument(f"Ramanujan sums need q >= 1 and a >= 1, got q={q}, a={a}")


def _round_checked(value: float, q: int, a: int) -> int:
    rounded = round(value)
    if abs(value - rounded) >= DIRECT_RESIDUAL:
        raise NumericalConsistencyError(
            f"cosine sum for c_{q}({a}) = {value!r} is not within {DIRECT_RESIDUAL} of an integer"
        )
    return int(rounded)


def _reduced_residues(q: int) -> np.ndarray:
    j = np.arange(1, q + 1, dtype=np.int64)
    return j[np.gcd(j, q) == 1]


def cq_direct(q: int, a: int) -> int:
    _check_args(q, a)
    j = _reduced_residues(q)
    # reduce j*a mod q first so the cosine argument stays in [0, 2 pi)
    angles = 2.0 * np.pi * ((j * (a % q)) % q) / q
    return _round_checked(math.fsum(np.cos(angles)), q, a)


def cq_direct_row(q: int, a_max: int) -> np.ndarray:
    """Oracle values c_q(1..a_max) from the cosine sum, as int64."""
    _check_args(q, a_max)
    j = _reduced_residues(q)
    a = np.arange(1, a_max + 1, dtype=np.int64)
    angles = 2.0 * np.pi * (np.outer(j, a) % q) / q
    sums = np.cos(angles).sum(axis=0)
    rounded = np.rint(sums)
    bad = np.abs(sums - rounded) >= DIRECT_RESIDUAL
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericalConsistencyError(
            f"cosine sum for c_{q}({i + 1}) = {sums[i]!r} is not near an integer"
        )
    return rounded.astype(np.int64)


def cq_holder(q: int, a: int, t: FactorTable) -> int:
    _check_args(q, a)
    t.check(q)
    g = math.gcd(a, q)
    m = q // g
    num, den = totient(q, t), totient(m, t)
    if num % den:
        raise InvariantViolation(f"phi({q}) not divisible by phi({m})")
    return mobius(m, t) * (num // den)


def cq_kluyver(q: int, a: int, t: FactorTable) -> int:
    _check_args(q, a)
    t.check(q)
    return sum(d * mobius(q // d, t) for d in divisors(math.gcd(a, q), t))


def cq_reduced(q: int, m: int, t: FactorTable) -> int:
    """c_q at any integer m, reading m modulo q in 1..q (so c_q(0) = phi(q))."""
    return cq_kluyver(q, (m - 1) % q + 1, t)


def cq_period(q: int, t: FactorTable) -> np.ndarray:
    """One full period c_q(1..q) as int64."""
    return np.array([cq_kluyver(q, a, t) for a in range(1, q + 1)], dtype=np.int64)


def cq_at(q: int, args: np.ndarray, t: FactorTable, period: np.ndarray | None = None) -> np.ndarray:
    """c_q evaluated elementwise on an integer array (any sign, reduced mod q)."""
    row = cq_period(q, t) if period is None else period
    return row[(np.asarray(args, dtype=np.int64) - 1) % q]


def cq_over_moduli(a: int, q_max: int, t: FactorTable) -> np.ndarray:
    """c_q(a) for every q in 0..q_max (entry 0 unused), via Kluyver.

    For fixed a, c_q(a) = sum over d | a with d | q of d mu(q/d).
    """
    if a < 1:
        raise InvalidArgument(f"argument must be >= 1, got {a}")
    t.check(q_max)
    mu = t.mobius_array
    out = np.zeros(q_max + 1, dtype=np.int64)
    for d in _divisors_any(a, t):
        if d > q_max:
            break
        out[d::d] += d * mu[1 : q_max // d + 1].astype(np.int64)
    return out


def _divisors_any(n: int, t: FactorTable) -> list[int]:
    # a may exceed the sieve (e.g. a0*p); fall back to trial division then
    if n <= t.limit:
        return divisors(n, t)
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


@dataclass(frozen=True, eq=False)
class RamanujanSumTable:
    """Dense table, row q - 1 holds c_q(1..a_max)."""

    q_max: int
    a_max: int
    values: np.ndarray

    def __call__(self, q: int, a: int) -> int:
        if not (1 <= q <= self.q_max and 1 <= a <= self.a_max):
            raise InvalidArgument(f"({q}, {a}) outside table {self.q_max}x{self.a_max}")
        return int(self.values[q - 1, a - 1])

    def row(self, q: int) -> np.ndarray:
        return self.values[q - 1]

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["q", "a", "c"])
            for q in range(1, self.q_max + 1):
                for a, c in enumerate(self.values[q - 1], start=1):
                    w.writerow([q, a, int(c)])


def build_cq_table(
    q_max: int, a_max: int, t: FactorTable, seed: int = 0, sample_fraction: float = 0.01
) -> RamanujanSumTable:
    """Fill c_q(a) via Kluyver, then spot-check a seeded sample against the cosine sum."""
    if q_max < 1 or a_max < 1:
        raise InvalidArgument("table dimensions must be positive")
    t.check(q_max)
    values = np.empty((q_max, a_max), dtype=np.int64)
    for q in range(1, q_max + 1):
        period = cq_period(q, t)
        values[q - 1] = np.resize(period, a_max)
    values.flags.writeable = False

    rng = np.random.default_rng(seed)
    n_sample = max(1, int(round(sample_fraction * q_max * a_max)))
    qs = rng.integers(1, q_max + 1, size=n_sample)
    As = rng.integers(1, a_max + 1, size=n_sample)
    for q, a in zip(qs.tolist(), As.tolist()):
        if values[q - 1, a - 1] != cq_direct(q, a):
            raise InvariantViolation(f"table entry c_{q}({a}) disagrees with the cosine sum")
    return RamanujanSumTable(q_max, a_max, values)
