"""Integer kernels: smallest-prime-factor sieve and the multiplicative
functions read off it (mu, phi, omega, d, Lambda), divisor enumeration and
bounded prime search in arithmetic progressions.

Scalar helpers factor through the table in O(log n).  Bulk arrays (indexed
0..limit, entry 0 unused) are built lazily and cached on the table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidArgument, OutOfRange, ResourceError

# spf is stored as int32, so 10**8 entries cost ~400 MB; the bulk arrays
# roughly triple that.  Acceptance runs stay at or below 10**7.
MAX_SIEVE_LIMIT = 10**8


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FactorTable:
    """Smallest prime factor of every n in 1..limit.

    ``spf[1] == 1``; for n >= 2 ``spf[n]`` is the least prime dividing n.
    The table is immutable and may be shared between threads.
    """

    limit: int
    spf: np.ndarray

    def check(self, n: int) -> None:
        if not 1 <= n <= self.limit:
            raise OutOfRange(f"{n} outside table range 1..{self.limit}")

    def is_prime(self, n: int) -> bool:
        self.check(n)
        return n >= 2 and int(self.spf[n]) == n

    # -- bulk arrays ---------------------------------------------------

    @cached_property
    def _multiplicative(self) -> dict[str, np.ndarray]:
        n = self.limit
        mu = np.ones(n + 1, dtype=np.int8)
        phi = np.arange(n + 1, dtype=np.int64)
        omega = np.zeros(n + 1, dtype=np.int8)
        ndiv = np.ones(n + 1, dtype=np.int64)
        exp = np.zeros(n + 1, dtype=np.int8)
        rem = np.arange(n + 1, dtype=np.int64)
        rem[0] = 1
        last = np.zeros(n + 1, dtype=np.int64)
        # peel one prime factor off every entry per pass; at most log2(n) passes
        idx = np.nonzero(rem > 1)[0]
        while idx.size:
            p = self.spf[rem[idx]].astype(np.int64)
            repeat = last[idx] == p
            fresh = ~repeat
            mu[idx] = np.where(repeat, 0, -mu[idx])
            f = idx[fresh]
            pf = p[fresh]
            phi[f] = phi[f] // pf * (pf - 1)
            omega[f] += 1
            # close out the exponent of the previous prime before starting p
            ndiv[f] *= exp[f].astype(np.int64) + 1
            exp[f] = 0
            exp[idx] += 1
            last[idx] = p
            rem[idx] //= p
            idx = idx[rem[idx] > 1]
        ndiv *= exp.astype(np.int64) + 1
        mu[0] = 0
        phi[0] = 0
        ndiv[0] = 0
        # Lambda: log p on prime powers p^k, i.e. where omega == 1
        lam = np.zeros(n + 1, dtype=np.float64)
        pp = np.nonzero(omega == 1)[0]
        lam[pp] = np.log(self.spf[pp].astype(np.float64))
        return {
            "mu": _frozen(mu),
            "phi": _frozen(phi),
            "omega": _frozen(omega),
            "ndiv": _frozen(ndiv),
            "lambda": _frozen(lam),
        }

    @property
    def mobius_array(self) -> np.ndarray:
        return self._multiplicative["mu"]

    @property
    def totient_array(self) -> np.ndarray:
        return self._multiplicative["phi"]

    @property
    def omega_array(self) -> np.ndarray:
        return self._multiplicative["omega"]

    @property
    def num_divisors_array(self) -> np.ndarray:
        return self._multiplicative["ndiv"]

    @property
    def von_mangoldt_array(self) -> np.ndarray:
        return self._multiplicative["lambda"]

    @cached_property
    def primes(self) -> np.ndarray:
        ns = np.arange(2, self.limit + 1)
        return _frozen(ns[self.spf[2:] == ns])


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)


def build_factor_table(limit: int) -> FactorTable:
    """Sieve smallest prime factors for 1..limit (inclusive)."""
    if not isinstance(limit, (int, np.integer)) or limit < 2:
        raise InvalidArgument(f"sieve limit must be an integer >= 2, got {limit!r}")
    limit = int(limit)
    if limit > MAX_SIEVE_LIMIT:
        raise ResourceError(f"sieve limit {limit} exceeds supported bound {MAX_SIEVE_LIMIT}")
    try:
        spf = np.zeros(limit + 1, dtype=np.int32)
    except MemoryError as exc:  # pragma: no cover - machine dependent
        raise ResourceError(f"cannot allocate sieve of size {limit}") from exc
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    unset = np.nonzero(spf == 0)[0]
    spf[unset] = unset
    spf[1] = 1
    return FactorTable(limit, _frozen(spf))


def factorize(n: int, t: FactorTable) -> Factorization:
    t.check(n)
    factors = []
    m = n
    while m > 1:
        p = int(t.spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return Factorization(n, tuple(factors))


def mobius(n: int, t: FactorTable) -> int:
    f = factorize(n, t)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def totient(n: int, t: FactorTable) -> int:
    result = n
    for p, _ in factorize(n, t).factors:
        result = result // p * (p - 1)
    return result


def omega(n: int, t: FactorTable) -> int:
    return len(factorize(n, t).factors)


def num_divisors(n: int, t: FactorTable) -> int:
    return math.prod(e + 1 for _, e in factorize(n, t).factors)


def divisors(n: int, t: FactorTable) -> list[int]:
    divs = [1]
    for p, e in factorize(n, t).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def von_mangoldt(n: int, t: FactorTable) -> float:
    f = factorize(n, t)
    if len(f.factors) == 1:
        return math.log(f.factors[0][0])
    return 0.0


class PrimeList(list):
    """List of primes that also records whether the search bound ran out."""

    def __init__(self, items=(), exhausted: bool = False):
        super().__init__(items)
        self.exhausted = exhausted


def _primes_upto(bound: int) -> np.ndarray:
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def primes_in_ap(q: int, r: int, how_many: int, search_bound: int) -> PrimeList:
    """First ``how_many`` primes p <= search_bound with p = r (mod q).

    Never searches past ``search_bound``; a short result has
    ``exhausted`` set.
    """
    if q < 1 or not 1 <= r <= q:
        raise InvalidArgument(f"need q >= 1 and 1 <= r <= q, got q={q}, r={r}")
    if math.gcd(r, q) != 1:
        raise InvalidArgument(f"gcd({r}, {q}) != 1: progression holds no primes beyond r")
    if how_many < 0:
        raise InvalidArgument("how_many must be non-negative")
    ps = _primes_upto(search_bound)
    hits = ps[ps % q == r % q][:how_many]
    return PrimeList((int(p) for p in hits), exhausted=len(hits) < how_many)
