"""Eratosthenes transform F' = F * mu and its inverse, Wintner and
Carmichael coefficients, and the summability checks that guard them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .arith import FactorTable, divisors, totient
from .errors import EvaluationError, InvalidArgument, OutOfRange
from .ramanujan_sums import cq_at, cq_period
from .series import (
    SeriesReport,
    fraction_checkpoints,
    geometric_checkpoints,
    partial_sums_at,
    series_verdict,
)

EXACT_TOL = 1e-9
SERIES_TOL = 1e-6

INVERTED = "inverted-from-F"
LUCHT = "lucht-series"


@dataclass(eq=False)
class ArithmeticFunctionView:
    """An arithmetic function a -> complex with optional hints.

    ``vectorized``, when given, maps an int64 array of arguments to an array
    of values and is used for bulk evaluation.  A declared period is checked
    on 1..3Q at construction.
    """

    evaluate: Callable[[int], complex]
    label: str = "F"
    period_hint: Optional[int] = None
    support_hint: Optional[frozenset] = None
    vectorized: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.support_hint is not None:
            self.support_hint = frozenset(int(n) for n in self.support_hint)
        Q = self.period_hint
        if Q is not None:
            if Q < 1:
                raise InvalidArgument(f"period must be positive, got {Q}")
            vals = self.values(3 * Q)
            if not np.allclose(vals[1 : 2 * Q + 1], vals[Q + 1 :], rtol=0, atol=EXACT_TOL):
                raise InvalidArgument(f"{self.label} is not {Q}-periodic on 1..{3 * Q}")

    def __call__(self, a: int):
        try:
            return self.evaluate(a)
        except Exception as exc:
            raise EvaluationError(a, exc) from exc

    def at(self, args) -> np.ndarray:
        args = np.asarray(args, dtype=np.int64)
        if self.vectorized is not None:
            return np.asarray(self.vectorized(args))
        return np.array([self(int(a)) for a in args])

    def values(self, n_max: int) -> np.ndarray:
        """F(0..n_max) with entry 0 set to zero."""
        vals = self.at(np.arange(1, n_max + 1, dtype=np.int64))
        out = np.zeros(n_max + 1, dtype=vals.dtype if vals.size else np.int64)
        out[1:] = vals
        return out


def is_integer_valued(arr: np.ndarray) -> bool:
    return arr.dtype.kind in "iub"


@dataclass(frozen=True)
class Provenance:
    kind: str
    k_max: Optional[int] = None
    x_total: Optional[int] = None
    tail_bound: Optional[float] = None


@dataclass(eq=False)
class EratosthenesTable:
    """F'(1..d_max); entry 0 unused.

    ``support_max`` is set when F' is known to vanish beyond it, which makes
    Wintner sums over the table exact.
    """

    d_max: int
    values: np.ndarray
    provenance: Provenance = field(default_factory=lambda: Provenance(INVERTED))
    support_max: Optional[int] = None

    def __getitem__(self, d: int):
        if not 1 <= d <= self.d_max:
            raise OutOfRange(f"{d} outside 1..{self.d_max}")
        return self.values[d]


def mobius_transform(f: np.ndarray, t: FactorTable) -> np.ndarray:
    """(f * mu)(d) for d in 1..len(f)-1; integer input stays integer."""
    n = len(f) - 1
    t.check(n)
    mu = t.mobius_array
    out = np.zeros_like(f, dtype=np.int64 if is_integer_valued(f) else np.result_type(f, np.float64))
    for k in range(1, n + 1):
        m = int(mu[k])
        if m:
            top = n // k
            out[k : top * k + 1 : k] += m * f[1 : top + 1]
    return out


def divisor_sum(g: np.ndarray) -> np.ndarray:
    """(g * 1)(a) = sum over d | a of g(d), for a in 1..len(g)-1."""
    n = len(g) - 1
    out = np.zeros_like(g)
    for d in range(1, n + 1):
        if g[d] != 0:
            out[d::d] += g[d]
    return out


def eratosthenes_transform(
    F: ArithmeticFunctionView, d_max: int, t: FactorTable, support_max: Optional[int] = None
) -> EratosthenesTable:
    t.check(d_max)
    f = F.values(d_max)
    return EratosthenesTable(d_max, mobius_transform(f, t), Provenance(INVERTED), support_max)


def inverse_eratosthenes(E: EratosthenesTable, a: int, t: FactorTable):
    if not 1 <= a <= E.d_max:
        raise OutOfRange(f"{a} outside 1..{E.d_max}")
    return sum(E.values[d] for d in divisors(a, t))


@dataclass
class CoefficientEstimate:
    q: int
    value: complex
    checkpoints: list[tuple[int, complex]]
    tail_bound: Optional[float] = None
    converged: bool = False
    exact: bool = False

    def to_json(self) -> dict:
        v = complex(self.value)
        return {
            "q": self.q,
            "value_re": v.real,
            "value_im": v.imag,
            "checkpoints": [[x, complex(p).real, complex(p).imag] for x, p in self.checkpoints],
            "tail_bound": self.tail_bound,
            "converged": self.converged,
            "exact": self.exact,
        }


def _converged(checkpoints, tol: float) -> bool:
    if len(checkpoints) < 2:
        return False
    return abs(complex(checkpoints[-1][1]) - complex(checkpoints[-2][1])) < tol


def wintner_coefficient(
    E: EratosthenesTable,
    q: int,
    tol: float = SERIES_TOL,
    fprime_bound: Optional[tuple[float, float]] = None,
) -> CoefficientEstimate:
    """Partial sums of sum over q | d of F'(d)/d at d_max/8, /4, /2 and d_max.

    ``fprime_bound = (C, eta)`` asserts |F'(d)| <= C (log d)^-eta; for eta > 1
    it yields the tail bound (C/q) (log X)^(1-eta) / (eta - 1).
    """
    if q < 1:
        raise InvalidArgument(f"q must be >= 1, got {q}")
    exact = E.support_max is not None and E.support_max <= E.d_max
    pts = fraction_checkpoints(E.d_max)
    terms = np.zeros(E.d_max + 1, dtype=np.result_type(E.values, np.float64))
    ds = np.arange(q, E.d_max + 1, q)
    terms[ds] = E.values[ds] / ds
    partials = partial_sums_at(terms, pts)
    checkpoints = list(zip(pts, partials))
    tail = None
    if fprime_bound is not None and not exact:
        C, eta = fprime_bound
        if eta > 1 and E.d_max >= 2:
            tail = C / q * math.log(E.d_max) ** (1 - eta) / (eta - 1)
    return CoefficientEstimate(
        q=q,
        value=checkpoints[-1][1],
        checkpoints=checkpoints,
        tail_bound=0.0 if exact else tail,
        converged=_converged(checkpoints, EXACT_TOL if exact else tol),
        exact=exact,
    )


def carmichael_coefficient(
    F: ArithmeticFunctionView,
    q: int,
    x_checkpoints,
    t: FactorTable,
    tol: float = SERIES_TOL,
) -> CoefficientEstimate:
    """(1/phi(q)) (1/x) sum_{a <= x} F(a) c_q(a) at each checkpoint.

    With a period hint Q the mean over x = lcm(q, Q) (and 2x) is exact and
    becomes the reported value.
    """
    t.check(q)
    xs = sorted({int(x) for x in x_checkpoints})
    if any(x < 1 for x in xs):
        raise InvalidArgument("checkpoints must be positive")
    exact = F.period_hint is not None
    if exact:
        L = math.lcm(q, F.period_hint)
        xs = sorted(set(xs) | {L, 2 * L})
    if not xs:
        raise InvalidArgument("need at least one checkpoint")
    period = cq_period(q, t)
    phi_q = totient(q, t)
    f = F.values(xs[-1])
    c = np.zeros(xs[-1] + 1, dtype=np.int64)
    c[1:] = cq_at(q, np.arange(1, xs[-1] + 1), t, period)
    partials = partial_sums_at(f * c, xs)
    checkpoints = [(x, s / (phi_q * x)) for x, s in zip(xs, partials)]
    value = checkpoints[-1][1]
    if exact:
        value = dict(checkpoints)[L]
    return CoefficientEstimate(
        q=q,
        value=value,
        checkpoints=checkpoints,
        tail_bound=0.0 if exact else None,
        converged=_converged(checkpoints, EXACT_TOL if exact else tol),
        exact=exact,
    )


def wintner_assumption_check(
    E: EratosthenesTable, checkpoints=None, tol: float = 1e-12
) -> SeriesReport:
    """Partial sums of sum_{d <= X} |F'(d)| / d with a heuristic verdict."""
    pts = list(checkpoints) if checkpoints is not None else geometric_checkpoints(E.d_max)
    d = np.arange(E.d_max + 1, dtype=np.float64)
    d[0] = 1.0
    terms = np.abs(E.values) / d
    terms[0] = 0.0
    partials = [float(s) for s in partial_sums_at(terms, pts)]
    return SeriesReport(
        "wintner-assumption", list(zip(pts, partials)), series_verdict(pts, partials, tol)
    )


def weighted_coefficient_sum(G, Q: int, t: FactorTable, checkpoints=None, tol: float = 1e-12) -> SeriesReport:
    """Partial sums of sum_{q <= X} 2^omega(q) |G(q)|, the uniqueness test series."""
    t.check(Q)
    pts = list(checkpoints) if checkpoints is not None else geometric_checkpoints(Q)
    weights = np.power(2.0, t.omega_array[: Q + 1].astype(np.float64))
    terms = weights * np.abs(G.values(Q, t))
    terms[0] = 0.0
    partials = [float(s) for s in partial_sums_at(terms, pts)]
    return SeriesReport(
        f"2^omega-weighted |{G.label}|", list(zip(pts, partials)), series_verdict(pts, partials, tol)
    )
