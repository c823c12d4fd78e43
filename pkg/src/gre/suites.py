"""Reproducible verification suites behind the ``gre`` command."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .arith import FactorTable, build_factor_table, divisors, mobius, num_divisors, totient
from .correlations import (
    DIVERTING,
    NO_GRE,
    PeriodicFunction,
    build_counterexample_one,
    correlation,
    correlation_eratosthenes,
    diverts_values,
    ippify,
    reef_gap_report,
    theorem4_verifier,
    verify_counterexample_identity,
)
from .errors import InvalidArgument
from .expansions import (
    NOT_MET,
    PASS,
    RamanujanCoefficients,
    absolute_convergence_verifier,
    corollary1_verifier,
    corollary2_witness,
    eratosthenes_from_lucht,
    finite_expansion_view,
    remark7_statistics,
    theorem1_verifier,
    theorem3_verifier,
    trend_check,
)
from .ramanujan_sums import build_cq_table, cq_direct_row, cq_holder, cq_kluyver
from .series import DIVERGING, PLAUSIBLY_FINITE, fit_constant
from .transforms import (
    EXACT_TOL,
    ArithmeticFunctionView,
    carmichael_coefficient,
    divisor_sum,
    eratosthenes_transform,
    inverse_eratosthenes,
    weighted_coefficient_sum,
    wintner_assumption_check,
    wintner_coefficient,
)

SUITES = (
    "csum-identities",
    "transforms-roundtrip",
    "theorem1",
    "theorem2",
    "theorem3",
    "theorem4",
    "corollary1",
    "corollary2",
    "counterexample",
    "zero-expansions",
    "remark7",
    "remark8",
)
NEEDS_ETA = {"theorem1", "theorem2", "theorem3", "corollary1", "corollary2", "remark7", "remark8"}
NEEDS_P0 = {"counterexample", "theorem4"}
# minimum sieve a suite needs to run at all
MIN_LIMIT = {
    "csum-identities": 256,
    "transforms-roundtrip": 2000,
    "theorem1": 10**4,
    "theorem3": 10**4,
    "corollary1": 10**4 + 7,
    "corollary2": 10**4,
    "zero-expansions": 10**3,
    "remark7": 10**5,
    "remark8": 10**4,
    "theorem2": 27720 * 2,
}


@dataclass
class SuiteConfig:
    suite: str
    sieve_limit: int = 10**6
    eta: Optional[float] = 1.5
    p0: Optional[int] = 5
    output_path: str = "-"
    format: str = "json"
    seed: int = 0

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise InvalidArgument(f"unknown suite {self.suite!r}")
        if self.format not in ("json", "csv"):
            raise InvalidArgument(f"unknown format {self.format!r}")
        if self.suite in NEEDS_ETA and (self.eta is None or self.eta <= 0):
            raise InvalidArgument(f"suite {self.suite} needs a positive --eta")
        if self.suite in ("theorem2", "corollary2") and self.eta <= 1:
            raise InvalidArgument(f"suite {self.suite} needs --eta > 1")
        if self.suite in NEEDS_P0 and (self.p0 is None or self.p0 <= 2):
            raise InvalidArgument(f"suite {self.suite} needs an odd prime --p0")
        need = MIN_LIMIT.get(self.suite, 2)
        if self.suite in NEEDS_P0:
            need = max(need, 100 * self.p0)
        if self.sieve_limit < need:
            raise InvalidArgument(f"suite {self.suite} needs --sieve-limit >= {need}")
        if self.seed < 0:
            raise InvalidArgument("seed must be non-negative")


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    report: dict
    rows: list = field(default_factory=list)
    columns: Optional[list] = None


def _checkpoints(limit: int, start: int = 3) -> list[int]:
    out = []
    k = start
    while 10**k <= limit:
        out.append(10**k)
        k += 1
    return out


# -- suites ------------------------------------------------------------------


def csum_identities(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    n = 256
    mismatches = 0
    gcd_bad = period_bad = 0
    for q in range(1, n + 1):
        direct = cq_direct_row(q, n + q)
        for a in range(1, n + 1):
            k = cq_kluyver(q, a, t)
            if not (direct[a - 1] == cq_holder(q, a, t) == k):
                mismatches += 1
            if abs(k) > math.gcd(a, q):
                gcd_bad += 1
            if direct[a - 1] != direct[a + q - 1]:
                period_bad += 1
    mult_bad = 0
    for q1 in range(1, 201):
        for q2 in range(1, 200 // q1 + 1):
            if math.gcd(q1, q2) == 1:
                for a in range(1, 61):
                    if cq_kluyver(q1 * q2, a, t) != cq_kluyver(q1, a, t) * cq_kluyver(q2, a, t):
                        mult_bad += 1
    orth_bad = 0
    for q in range(1, 31):
        for r in range(1, 31):
            L = math.lcm(q, r)
            s = sum(cq_kluyver(q, a, t) * cq_kluyver(r, a, t) for a in range(1, L + 1))
            if s != (L * totient(q, t) if q == r else 0):
                orth_bad += 1
    sqfree_bad = sum(
        1 for q in range(1, n + 1) if mobius(q, t) for a in range(1, n + 1) if abs(cq_kluyver(q, a, t)) < 1
    )
    table = build_cq_table(n, n, t, seed=cfg.seed)
    checks = {
        "method_agreement_mismatches": mismatches,
        "gcd_bound_violations": gcd_bad,
        "periodicity_violations": period_bad,
        "multiplicativity_violations": mult_bad,
        "orthogonality_violations": orth_bad,
        "squarefree_lower_bound_violations": sqfree_bad,
    }
    ok = not any(checks.values()) and table.values.shape == (n, n)
    rows = [{"check": k, "violations": v} for k, v in checks.items()]
    return SuiteResult(cfg.suite, ok, {"grid": [n, n], **checks, "table_spot_check_seed": cfg.seed}, rows)


def transforms_roundtrip(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    rng = np.random.default_rng(cfg.seed)
    n = 2000
    worst_int = 0
    worst_float = 0.0
    for _ in range(100):
        f = np.zeros(n + 1, dtype=np.int64)
        f[1:] = rng.integers(-1000, 1001, size=n)
        E = eratosthenes_transform(ArithmeticFunctionView(lambda a, f=f: int(f[a]), vectorized=lambda a, f=f: f[a]), n, t)
        worst_int = max(worst_int, int(np.abs(divisor_sum(E.values)[1:] - f[1:]).max()))
        g = rng.normal(size=n + 1)
        g[0] = 0.0
        Eg = eratosthenes_transform(ArithmeticFunctionView(lambda a, g=g: g[a], vectorized=lambda a, g=g: g[a]), n, t)
        worst_float = max(worst_float, float(np.abs(divisor_sum(Eg.values)[1:] - g[1:]).max()))
    # scalar inverse on the last table, as a cross-check of the vector path
    scalar_ok = all(inverse_eratosthenes(E, a, t) == f[a] for a in range(1, n + 1, 37))
    ok = worst_int == 0 and worst_float < EXACT_TOL and scalar_ok
    rep = {"functions": 100, "range": n, "max_integer_residual": worst_int,
           "max_float_residual": worst_float, "scalar_inverse_ok": scalar_ok}
    return SuiteResult(cfg.suite, ok, rep, [rep])


def theorem1(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    G = RamanujanCoefficients.power_log_decay(cfg.eta)
    ds = [d for d in (10, 10**2, 10**3, 10**4) if d <= t.limit]
    rep = theorem1_verifier(G, cfg.eta, ds, min(t.limit, 10**6), t)
    return SuiteResult(cfg.suite, rep.passed, rep.to_json(), rep.statistics)


def random_finite_coefficients(rng, max_support: int = 12) -> RamanujanCoefficients:
    size = int(rng.integers(1, max_support + 1))
    support = rng.choice(np.arange(1, max_support + 1), size=size, replace=False)
    return RamanujanCoefficients.from_table(
        {int(q): float(rng.uniform(-5, 5)) for q in sorted(support)}, label="random finite"
    )


def finite_recovery(G: RamanujanCoefficients, t: FactorTable) -> dict:
    """Residuals of Wintner and exact Carmichael recovery of a finite G."""
    F = finite_expansion_view(G, t)
    top = G.support_max
    d_max = 8 * top
    E = eratosthenes_transform(F, d_max, t, support_max=top)
    win = car = 0.0
    for q in range(1, top + 1):
        target = complex(G(q))
        win = max(win, abs(complex(wintner_coefficient(E, q).value) - target))
        car = max(car, abs(complex(carmichael_coefficient(F, q, [], t).value) - target))
    return {"support": sorted(G.table), "wintner_residual": win, "carmichael_residual": car}


def theorem2(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    rng = np.random.default_rng(cfg.seed)
    rows = [finite_recovery(random_finite_coefficients(rng), t) for _ in range(20)]
    worst = max(max(r["wintner_residual"], r["carmichael_residual"]) for r in rows)
    G = RamanujanCoefficients.power_log_decay(cfg.eta)
    weighted = weighted_coefficient_sum(G, min(t.limit, 10**6), t)
    E = eratosthenes_from_lucht(G, min(t.limit, 10**5), t, x_total=min(t.limit, 10**6))
    wa = wintner_assumption_check(E)
    ok = worst < EXACT_TOL and weighted.verdict == PLAUSIBLY_FINITE and wa.verdict == PLAUSIBLY_FINITE
    rep = {"random_coefficients": 20, "max_residual": worst, "tolerance": EXACT_TOL,
           "weighted_sum": weighted.to_json(), "wintner_assumption": wa.to_json(), "recoveries": rows}
    return SuiteResult(cfg.suite, ok, rep, rows)


def theorem3(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    G = RamanujanCoefficients.power_log_decay(cfg.eta)
    eta = cfg.eta
    G0 = RamanujanCoefficients.custom(
        lambda q: np.where(q == 1, 0.0, 1.0 / (q * np.log(q + 1.0) ** (1.0 + eta))), "G with G(1)=0", eta=eta
    )
    a_range = [2, 6, 12, 30, 210]
    main = theorem3_verifier(G, eta, a_range, t)
    zero = theorem3_verifier(G0, eta, a_range, t)
    ok = main.passed and zero.passed
    return SuiteResult(cfg.suite, ok, {"main": main.to_json(), "g1_zero": zero.to_json()},
                       main.statistics + zero.statistics)


def counterexample_function(p0: int, t: FactorTable) -> PeriodicFunction:
    return build_counterexample_one(p0, t).as_periodic()


def theorem4(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    F = counterexample_function(cfg.p0, t)
    rep = theorem4_verifier(F, 25, t)
    mono = theorem4_verifier(PeriodicFunction(cfg.p0, np.full(cfg.p0, 7)), 25, t)
    ok = rep.verdict == NO_GRE and mono.verdict == "not-applicable"
    return SuiteResult(cfg.suite, ok, {"counterexample": rep.to_json(), "monochromatic_control": mono.to_json()},
                       rep.statistics)


def corollary1(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    G = RamanujanCoefficients.power_log_decay(cfg.eta)
    extra = [p for p in (11, 101, 1009, 10007) if p <= t.limit]
    reps = {a0: corollary1_verifier(G, cfg.eta, a0, 25, t, extra_primes=extra) for a0 in (1, 2, 6)}
    ok = all(r.passed for r in reps.values())
    rows = [{"a0": a0, **s} for a0, r in reps.items() for s in r.statistics]
    return SuiteResult(cfg.suite, ok, {str(a0): r.to_json() for a0, r in reps.items()}, rows)


def corollary2(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    zero = corollary2_witness(RamanujanCoefficients.from_table({}, "zero"), cfg.eta, t)
    r0 = corollary2_witness(RamanujanCoefficients.ramanujan_r0(), cfg.eta, t)
    h0 = corollary2_witness(RamanujanCoefficients.hardy_h0(), cfg.eta, t)
    ok = zero.passed and r0.verdict == NOT_MET and h0.verdict == NOT_MET
    return SuiteResult(cfg.suite, ok, {"zero": zero.to_json(), "R0": r0.to_json(), "H0": h0.to_json()},
                       zero.statistics)


def counterexample(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    ce = build_counterexample_one(cfg.p0, t)
    p0 = ce.p0
    a_max = 4 * p0
    ident = verify_counterexample_identity(ce, a_max, t)
    gap = reef_gap_report(ce, a_max, t)
    values = [r["correlation"] for r in ident["rows"]]
    periodic = all(values[i] == values[i + p0] for i in range(a_max - p0))
    expected_failures = [a for a in range(1, a_max + 1) if a % p0]
    F = ce.as_periodic()
    div = diverts_values(F)
    ct = correlation_eratosthenes(ce, max(p0 * p0, 50), t)
    ipp_ok = all(ippify(ct.table, a, t) == F(a) for a in range(1, ct.table.d_max + 1) if mobius(a, t) != 0)
    ok = (
        periodic
        and gap["failure_set"] == expected_failures
        and correlation(ce.spec, 1) == p0 - 1
        and correlation(ce.spec, 2) == -1
        and div.verdict == DIVERTING
        and ipp_ok
    )
    rep = {"p0": p0, "n0": ce.n0, "N": ce.N, "a_max": a_max, "identity": "exact", "periodic": periodic,
           "failure_set": gap["failure_set"], "diverts_values": {"verdict": div.verdict, "witness": div.witness},
           "ippification_agrees_on_reduced_residues": ipp_ok, "gap": gap["rows"]}
    rows = [{"a": r["a"], "lhs_re": float(r["lhs"]), "lhs_im": 0.0, "rhs_re": float(r["rhs"]), "rhs_im": 0.0,
             "equal": int(r["equal"])} for r in gap["rows"]]
    return SuiteResult(cfg.suite, ok, rep, rows, ["a", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "equal"])


def zero_expansions(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    xs = _checkpoints(t.limit)
    rows = []
    for name, G, As, target in (
        ("R0", RamanujanCoefficients.ramanujan_r0(), (1, 2, 6), lambda a: 0),
        ("H0", RamanujanCoefficients.hardy_h0(), (1, 2, 6), lambda a: 0),
        ("divisor_log", RamanujanCoefficients.divisor_log(), (1, 2), lambda a: num_divisors(a, t)),
    ):
        for a in As:
            rows.append({"family": name, **trend_check(G, a, target(a), xs, t)})
    ok = all(r["decreasing"] for r in rows)
    return SuiteResult(cfg.suite, ok, {"verdict": "trend-only", "trend_holds": ok, "series": rows}, rows)


def remark7(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    G = RamanujanCoefficients.power_log_decay(cfg.eta)
    stats = remark7_statistics(G, cfg.eta, range(2, 501), t, d_max=min(10**5, t.limit))
    C = fit_constant(stats[q] for q in range(2, 101))
    ok = all(v <= 1.05 * C for v in stats.values())
    rows = [{"q": q, "statistic": v} for q, v in stats.items()]
    return SuiteResult(cfg.suite, ok, {"fitted_constant": C, "margin": 1.05,
                                       "max_statistic": max(stats.values()), "statistics": rows}, rows)


def remark8(cfg: SuiteConfig, t: FactorTable) -> SuiteResult:
    G = RamanujanCoefficients.power_log_decay(cfg.eta)
    Qs = [Q for Q in (10**3, 10**4, 10**5, 10**6) if Q <= t.limit]
    by_Q = {Q: absolute_convergence_verifier(G, [1, 2, 6, 12], Q, t) for Q in Qs}
    ratios = {Q: r.summary["max_ratio"] for Q, r in by_Q.items()}
    r0 = absolute_convergence_verifier(RamanujanCoefficients.ramanujan_r0(), [2], max(Qs), t)
    stable = ratios[Qs[-1]] <= 1.05 * ratios[Qs[-2]] if len(Qs) > 1 else True
    ok = by_Q[Qs[-1]].passed and stable and r0.summary["any_diverging"]
    rows = [{"Q": Q, **s} for Q, r in by_Q.items() for s in r.statistics]
    return SuiteResult(cfg.suite, ok, {"eta_family": {str(Q): r.to_json() for Q, r in by_Q.items()},
                                       "ratio_stable": stable, "R0_control": r0.to_json()}, rows)


RUNNERS: dict[str, Callable[[SuiteConfig, FactorTable], SuiteResult]] = {
    "csum-identities": csum_identities,
    "transforms-roundtrip": transforms_roundtrip,
    "theorem1": theorem1,
    "theorem2": theorem2,
    "theorem3": theorem3,
    "theorem4": theorem4,
    "corollary1": corollary1,
    "corollary2": corollary2,
    "counterexample": counterexample,
    "zero-expansions": zero_expansions,
    "remark7": remark7,
    "remark8": remark8,
}


def run(cfg: SuiteConfig, t: Optional[FactorTable] = None) -> SuiteResult:
    cfg.validate()
    t = t or build_factor_table(cfg.sieve_limit)
    res = RUNNERS[cfg.suite](cfg, t)
    res.report = {
        "suite": cfg.suite,
        "config": {"sieve_limit": cfg.sieve_limit, "eta": cfg.eta, "p0": cfg.p0, "seed": cfg.seed},
        "passed": res.passed,
        "report": res.report,
    }
    return res
