"""Periodic functions, the diverting-values classifier, shifted convolution
correlations and the explicit toy correlation built from one indicator and
one Ramanujan sum, on which the exact explicit formula breaks down.

Integer data stays integer throughout; the explicit formula's right-hand
side is returned as a ``Fraction`` whenever its inputs are rational.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .arith import FactorTable, divisors, mobius, primes_in_ap, totient
from .errors import InvalidArgument, OutOfRange, ResourceError, VerificationFailure
from .expansions import NOT_APPLICABLE, PASS, VerifierReport
from .ramanujan_sums import cq_at, cq_period, cq_reduced
from .transforms import (
    EXACT_TOL,
    ArithmeticFunctionView,
    EratosthenesTable,
    eratosthenes_transform,
)

DIVERTING = "diverting"
MONOCHROMATIC = "monochromatic"
NO_GRE = "no-GRE-possible"


@dataclass(eq=False)
class PeriodicFunction:
    """F on N given by one period: ``values[r - 1] = F(r)`` for r = 1..period."""

    period: int
    values: np.ndarray
    label: str = "F"

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.period < 1 or len(self.values) != self.period:
            raise InvalidArgument(f"need exactly {self.period} values, got {len(self.values)}")

    @classmethod
    def from_function(cls, f, period: int, label: str = "F") -> "PeriodicFunction":
        return cls(period, np.array([f(r) for r in range(1, period + 1)]), label)

    @property
    def integer_valued(self) -> bool:
        return self.values.dtype.kind in "iub"

    def __call__(self, a: int):
        return self.values[(a - 1) % self.period].item()

    def at(self, args) -> np.ndarray:
        return self.values[(np.asarray(args, dtype=np.int64) - 1) % self.period]

    def view(self) -> ArithmeticFunctionView:
        return ArithmeticFunctionView(self.__call__, self.label, self.period, vectorized=self.at)

    def same(self, x, y) -> bool:
        if self.integer_valued:
            return x == y
        return abs(complex(x) - complex(y)) <= EXACT_TOL


def shifted_cq(q: int, shift: int, t: FactorTable, label: Optional[str] = None) -> PeriodicFunction:
    """a -> c_q(a + shift) as a q-periodic function."""
    row = cq_period(q, t)
    vals = cq_at(q, np.arange(1, q + 1) + shift, t, row)
    return PeriodicFunction(q, vals, label or f"c_{q}(. {shift:+d})")


@dataclass(frozen=True)
class DivertResult:
    verdict: str
    witness: Optional[int] = None


def diverts_values(F: PeriodicFunction) -> DivertResult:
    """Smallest reduced residue a != 1 mod Q with F(a) != F(1), if any."""
    Q = F.period
    if Q <= 2:
        raise InvalidArgument(f"the diverting-values test needs period > 2, got {Q}")
    f1 = F(1)
    for a in range(2, Q + 1):
        if math.gcd(a, Q) == 1 and not F.same(F(a), f1):
            return DivertResult(DIVERTING, a)
    return DivertResult(MONOCHROMATIC)


# -- correlations ------------------------------------------------------------


@dataclass(eq=False)
class CorrelationSpec:
    f: ArithmeticFunctionView
    g: ArithmeticFunctionView
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise InvalidArgument("correlation length N must be >= 1")

    def support(self) -> list[int]:
        if self.f.support_hint is not None:
            return sorted(n for n in self.f.support_hint if 1 <= n <= self.N)
        return list(range(1, self.N + 1))


def correlation(spec: CorrelationSpec, a: int):
    """C_{f,g}(N, a) = sum_{n <= N} f(n) g(n + a)."""
    if a < 1:
        raise InvalidArgument(f"shift must be >= 1, got {a}")
    return sum(spec.f(n) * spec.g(n + a) for n in spec.support())


def indicator(points, label: str = "1_S") -> ArithmeticFunctionView:
    pts = frozenset(int(p) for p in points)
    return ArithmeticFunctionView(
        lambda n: 1 if n in pts else 0,
        label,
        support_hint=pts,
        vectorized=lambda a: np.isin(a, list(pts)).astype(np.int64),
    )


def von_mangoldt_view(t: FactorTable) -> ArithmeticFunctionView:
    lam = t.von_mangoldt_array

    def one(n):
        t.check(n)
        return float(lam[n])

    return ArithmeticFunctionView(one, "Lambda", vectorized=lambda a: lam[a])


@dataclass(frozen=True)
class CounterexampleOne:
    """f0 = indicator of {n0}, g0 = c_p0, correlation length N.

    n0 is a prime above p0 with n0 = -1 mod p0, so the correlation is
    c_p0(a - 1) for every shift a.
    """

    p0: int
    n0: int
    N: int
    t: FactorTable = field(repr=False, compare=False)

    def __post_init__(self):
        if not (self.n0 > self.p0 and (self.n0 + 1) % self.p0 == 0 and self.n0 <= self.N):
            raise InvalidArgument(f"invalid counterexample data {self.p0}, {self.n0}, {self.N}")

    @property
    def f0(self) -> ArithmeticFunctionView:
        return indicator([self.n0], f"1_{{{self.n0}}}")

    @property
    def g0(self) -> ArithmeticFunctionView:
        return shifted_cq(self.p0, 0, self.t, f"c_{self.p0}").view()

    @property
    def spec(self) -> CorrelationSpec:
        return CorrelationSpec(self.f0, self.g0, self.N)

    @property
    def reef(self) -> "ReefSpec":
        return ReefSpec({self.p0: 1}, self.p0)

    def expected(self, a: int) -> int:
        return cq_reduced(self.p0, a - 1, self.t)

    def as_periodic(self) -> PeriodicFunction:
        """The correlation as a p0-periodic function of the shift."""
        return PeriodicFunction.from_function(lambda a: correlation(self.spec, a), self.p0,
                                              f"C_(f0,g0)(N, .), p0={self.p0}")


def build_counterexample_one(p0: int, t: FactorTable, search_bound: Optional[int] = None) -> CounterexampleOne:
    if p0 <= 2 or not t.is_prime(p0):
        raise InvalidArgument(f"p0 must be an odd prime, got {p0}")
    bound = search_bound or t.limit
    found = primes_in_ap(p0, p0 - 1, 2, bound)
    above = [p for p in found if p > p0]
    if not above:
        raise ResourceError(f"no prime n0 = -1 mod {p0} above {p0} below {bound}")
    n0 = above[0]
    return CounterexampleOne(p0, n0, n0, t)


def verify_counterexample_identity(ce: CounterexampleOne, a_max: int, t: FactorTable) -> dict:
    """Check C(N, a) == c_p0(a - 1) exactly for 1 <= a <= a_max."""
    if a_max < 1:
        raise InvalidArgument("a_max must be >= 1")
    spec = ce.spec
    rows = []
    for a in range(1, a_max + 1):
        got = correlation(spec, a)
        want = cq_reduced(ce.p0, a - 1, t)
        if got != want:
            raise VerificationFailure(f"C(N, {a}) = {got} but c_{ce.p0}({a - 1}) = {want}", a)
        rows.append({"a": a, "correlation": int(got), "expected": int(want)})
    return {"p0": ce.p0, "n0": ce.n0, "N": ce.N, "rows": rows, "verdict": PASS}


# -- exact explicit formula ------------------------------------------------


@dataclass(frozen=True)
class ReefSpec:
    g_hat: dict
    Q_trunc: int

    def __post_init__(self):
        if any(q < 1 or q > self.Q_trunc for q in self.g_hat):
            raise InvalidArgument(f"coefficient keys must lie in 1..{self.Q_trunc}")


Number = Union[Fraction, complex, int]


def _rational(x) -> bool:
    return isinstance(x, (int, Fraction, np.integer))


def reef_rhs(f: ArithmeticFunctionView, reef: ReefSpec, N: int, a: int, t: FactorTable,
             cache: Optional[dict] = None) -> Number:
    """sum_{q} (g_hat(q)/phi(q)) (sum_{n <= N} f(n) c_q(n)) c_q(a).

    The inner sums are memoised in ``cache`` (per call site, keyed by q).
    """
    cache = {} if cache is None else cache
    support = sorted(n for n in f.support_hint if 1 <= n <= N) if f.support_hint is not None else range(1, N + 1)
    total: Number = 0
    for q in sorted(reef.g_hat):
        gh = reef.g_hat[q]
        if q not in cache:
            cache[q] = sum(f(n) * cq_reduced(q, n, t) for n in support)
        inner = cache[q]
        cq_a = cq_reduced(q, a, t)
        if _rational(gh) and _rational(inner):
            total += Fraction(int(gh) if isinstance(gh, np.integer) else gh) * Fraction(int(inner)) * cq_a / totient(q, t)
        else:
            total = complex(total) + complex(gh) / totient(q, t) * complex(inner) * cq_a
    return total


def reef_gap_report(ce: CounterexampleOne, a_max: int, t: FactorTable) -> dict:
    """LHS = c_p0(a-1) against the explicit formula's RHS for a <= a_max.

    Raises ``VerificationFailure`` unless: |LHS| >= 1 everywhere, RHS equals
    1/(p0-1) off the multiples of p0, LHS == RHS exactly on the multiples,
    and LHS != RHS somewhere.
    """
    p0 = ce.p0
    if a_max < 2 * p0:
        raise InvalidArgument(f"a_max must be >= 2*p0 = {2 * p0}")
    f0 = ce.f0
    cache: dict = {}
    rows = []
    for a in range(1, a_max + 1):
        lhs = correlation(ce.spec, a)
        rhs = reef_rhs(f0, ce.reef, ce.N, a, t, cache)
        # compare over the common denominator phi(p0)
        phi = totient(p0, t)
        equal = Fraction(lhs) * phi == Fraction(rhs) * phi
        if abs(lhs) < 1:
            raise VerificationFailure(f"|LHS({a})| < 1", a)
        if a % p0 and rhs != Fraction(1, p0 - 1):
            raise VerificationFailure(f"RHS({a}) = {rhs}, expected 1/{p0 - 1}", a)
        if a % p0 == 0 and not equal:
            raise VerificationFailure(f"relative formula fails at a = {a}", a)
        rows.append({"a": a, "lhs": lhs, "rhs": rhs, "equal": equal})
    failures = [r["a"] for r in rows if not r["equal"]]
    if not failures:
        raise VerificationFailure("explicit formula held everywhere; expected a failure")
    return {"p0": p0, "n0": ce.n0, "N": ce.N, "rows": rows, "failure_set": failures, "verdict": PASS}


def gap_rows_csv(report: dict, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "equal"])
        for r in report["rows"]:
            lhs, rhs = complex(r["lhs"]), complex(r["rhs"])
            w.writerow([r["a"], repr(lhs.real), repr(lhs.imag), repr(rhs.real), repr(rhs.imag), int(r["equal"])])


# -- Eratosthenes transform along primes ---------------------------------------


@dataclass
class CorrelationTransform:
    table: EratosthenesTable
    by_class: dict = field(default_factory=dict)


def correlation_eratosthenes(spec_or_ce, d_max: int, t: FactorTable) -> CorrelationTransform:
    """C'(N, d) = sum_{a | d} C(N, a) mu(d/a) for d <= d_max.

    For the toy correlation, also lists F'(p) = F(p) - F(1) over primes
    p <= d_max in the residue classes 1 and 2 mod p0.
    """
    if d_max < 1:
        raise InvalidArgument("d_max must be >= 1")
    is_ce = isinstance(spec_or_ce, CounterexampleOne)
    spec = spec_or_ce.spec if is_ce else spec_or_ce
    if is_ce:
        # the shift-correlation is p0-periodic: evaluate one period only
        F = spec_or_ce.as_periodic().view()
    else:
        F = ArithmeticFunctionView(lambda a: correlation(spec, a), "C(N, .)")
    E = eratosthenes_transform(F, d_max, t)
    by_class = {}
    if is_ce:
        p0 = spec_or_ce.p0
        F1 = F(1)
        for r in (1, 2):
            ps = primes_in_ap(p0, r, d_max, d_max)
            by_class[r] = [(p, E.values[p].item(), F(p) - F1) for p in ps]
    return CorrelationTransform(E, by_class)


def eratosthenes_at(F, n: int, t: FactorTable):
    """(F * mu)(n) straight from the definition."""
    return sum(mobius(n // e, t) * F(e) for e in divisors(n, t))


def theorem4_verifier(F: PeriodicFunction, primes_per_class: int, t: FactorTable,
                      search_bound: Optional[int] = None) -> VerifierReport:
    """Sample F'(p) over primes p = a (witness) and p = 1 mod Q."""
    hyp = {"Q": F.period, "primes_per_class": primes_per_class}
    res = diverts_values(F)
    if res.verdict == MONOCHROMATIC:
        return VerifierReport("theorem4", hyp, [], NOT_APPLICABLE, {"classification": MONOCHROMATIC})
    a, Q = res.witness, F.period
    bound = search_bound or t.limit
    rows = []
    seqs = {}
    for r in (a, 1):
        ps = primes_in_ap(Q, r, primes_per_class, bound)
        if ps.exhausted:
            raise ResourceError(f"only {len(ps)} primes = {r} mod {Q} below {bound}")
        seqs[r] = [eratosthenes_at(F, p, t) for p in ps]
        rows += [{"class": r, "p": p, "fprime": v} for p, v in zip(ps, seqs[r])]
    jump = F(a) - F(1)
    ok = (all(F.same(v, jump) for v in seqs[a]) and all(F.same(v, 0) for v in seqs[1])
          and not F.same(jump, 0))
    return VerifierReport("theorem4", {**hyp, "witness": a}, rows, NO_GRE if ok else "fail",
                          {"limit_class_witness": jump, "limit_class_one": 0})


def ippify(E: EratosthenesTable, a: int, t: FactorTable):
    """sum over square-free d | a of F'(d)."""
    if not 1 <= a <= E.d_max:
        raise OutOfRange(f"{a} outside 1..{E.d_max}")
    return sum(E.values[d] for d in divisors(a, t) if mobius(d, t) != 0)


def ippified_view(F: ArithmeticFunctionView, d_max: int, t: FactorTable) -> ArithmeticFunctionView:
    E = eratosthenes_transform(F, d_max, t)
    return ArithmeticFunctionView(lambda a: ippify(E, a, t), f"IPP({F.label})")
