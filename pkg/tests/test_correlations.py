from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gre.arith import build_factor_table, mobius, num_divisors
from gre.correlations import (
    DIVERTING,
    MONOCHROMATIC,
    NO_GRE,
    CorrelationSpec,
    PeriodicFunction,
    ReefSpec,
    build_counterexample_one,
    correlation,
    correlation_eratosthenes,
    diverts_values,
    eratosthenes_at,
    gap_rows_csv,
    indicator,
    ippified_view,
    ippify,
    reef_gap_report,
    reef_rhs,
    shifted_cq,
    theorem4_verifier,
    verify_counterexample_identity,
    von_mangoldt_view,
)
from gre.errors import InvalidArgument
from gre.expansions import NOT_APPLICABLE
from gre.transforms import ArithmeticFunctionView, eratosthenes_transform

PRIMES = [3, 5, 7, 11, 13]


@pytest.fixture(scope="module")
def t():
    return build_factor_table(10**5)


def test_diverts_values_examples(t):
    res = diverts_values(shifted_cq(5, -1, t))
    assert (res.verdict, res.witness) == (DIVERTING, 2)
    assert diverts_values(PeriodicFunction(5, np.full(5, 7))).verdict == MONOCHROMATIC
    with pytest.raises(InvalidArgument):
        diverts_values(PeriodicFunction(2, np.array([1, 2])))


def test_periodic_function_validation():
    with pytest.raises(InvalidArgument):
        PeriodicFunction(3, np.array([1, 2]))
    F = PeriodicFunction(3, np.array([1, 2, 3]))
    assert [F(a) for a in (1, 3, 4, 7)] == [1, 3, 1, 1]


def test_correlation_examples(t):
    g = ArithmeticFunctionView(lambda n: n * n)
    spec = CorrelationSpec(indicator([4]), g, 10)
    assert [correlation(spec, a) for a in (1, 2, 3)] == [25, 36, 49]
    one = indicator([1])
    assert all(correlation(CorrelationSpec(one, one, 1), a) == 0 for a in range(1, 10))
    lam = von_mangoldt_view(t)
    brute = sum(float(t.von_mangoldt_array[n] * t.von_mangoldt_array[n + 2]) for n in range(1, 101))
    assert correlation(CorrelationSpec(lam, lam, 100), 2) == pytest.approx(brute)


def test_correlation_rejects_bad_shift():
    with pytest.raises(InvalidArgument):
        correlation(CorrelationSpec(indicator([1]), indicator([1]), 1), 0)
    with pytest.raises(InvalidArgument):
        CorrelationSpec(indicator([1]), indicator([1]), 0)


@pytest.mark.parametrize("p0, n0", [(3, 5), (5, 19), (7, 13)])
def test_counterexample_parameters(t, p0, n0):
    ce = build_counterexample_one(p0, t)
    assert (ce.n0, ce.N) == (n0, n0)


@pytest.mark.parametrize("p0", [2, 4, 9])
def test_counterexample_rejects_non_odd_prime(t, p0):
    with pytest.raises(InvalidArgument):
        build_counterexample_one(p0, t)


@pytest.mark.parametrize("p0", PRIMES)
def test_counterexample_identity(t, p0):
    ce = build_counterexample_one(p0, t)
    rep = verify_counterexample_identity(ce, 4 * p0, t)
    assert all(r["correlation"] == r["expected"] for r in rep["rows"])
    assert correlation(ce.spec, 1) == p0 - 1
    assert correlation(ce.spec, 2) == -1


def test_counterexample_periodicity(t):
    ce = build_counterexample_one(5, t)
    assert [correlation(ce.spec, a) for a in (1, 2, 6)] == [4, -1, 4]


def test_reef_rhs_examples(t):
    ce = build_counterexample_one(5, t)
    cache = {}
    assert reef_rhs(ce.f0, ce.reef, ce.N, 1, t, cache) == Fraction(1, 4)
    assert reef_rhs(ce.f0, ce.reef, ce.N, 5, t, cache) == -1
    empty = ReefSpec({}, 5)
    assert reef_rhs(ce.f0, empty, ce.N, 3, t) == 0


@pytest.mark.parametrize("p0", PRIMES)
def test_reef_gap(t, p0):
    ce = build_counterexample_one(p0, t)
    rep = reef_gap_report(ce, 4 * p0, t)
    assert rep["failure_set"] == [a for a in range(1, 4 * p0 + 1) if a % p0]
    for r in rep["rows"]:
        if r["a"] % p0:
            assert r["rhs"] == Fraction(1, p0 - 1) and abs(r["lhs"]) >= 1
        else:
            assert r["lhs"] == r["rhs"]


def test_reef_gap_p3_value(t):
    rows = reef_gap_report(build_counterexample_one(3, t), 6, t)["rows"]
    assert (rows[1]["lhs"], rows[1]["rhs"], rows[1]["equal"]) == (-1, Fraction(1, 2), False)


def test_gap_csv(t, tmp_path):
    rep = reef_gap_report(build_counterexample_one(5, t), 10, t)
    path = tmp_path / "gap.csv"
    gap_rows_csv(rep, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "a,lhs_re,lhs_im,rhs_re,rhs_im,equal"
    assert len(lines) == 11


def test_correlation_transform_classes(t):
    ct = correlation_eratosthenes(build_counterexample_one(5, t), 2000, t)
    ones, twos = ct.by_class[1], ct.by_class[2]
    assert ones and twos
    assert all(fp == 0 == jump for _, fp, jump in ones)
    assert all(fp == -5 == jump for _, fp, jump in twos)


def test_constant_function_transform(t):
    F = PeriodicFunction(4, np.full(4, 3))
    assert all(eratosthenes_at(F, n, t) == 0 for n in range(2, 200))


@pytest.mark.parametrize("p0, jump", [(5, -5), (3, -3)])
def test_theorem4_no_gre(t, p0, jump):
    rep = theorem4_verifier(shifted_cq(p0, -1, t), 25, t)
    assert rep.verdict == NO_GRE
    assert rep.summary["limit_class_witness"] == jump
    cls1 = [r["fprime"] for r in rep.statistics if r["class"] == 1]
    assert len(cls1) == 25 and not any(cls1)


def test_theorem4_monochromatic(t):
    assert theorem4_verifier(PeriodicFunction(7, np.full(7, 2)), 5, t).verdict == NOT_APPLICABLE


def test_ippify_examples(t):
    E = eratosthenes_transform(ArithmeticFunctionView(lambda a: num_divisors(a, t)), 100, t)
    assert ippify(E, 4, t) == 2
    for a in range(1, 101):
        if mobius(a, t):
            assert ippify(E, a, t) == num_divisors(a, t)


@pytest.mark.parametrize("p0", [5, 7])
def test_ippified_counterexample_still_diverting(t, p0):
    F = build_counterexample_one(p0, t).as_periodic()
    ipp = ippified_view(F.view(), p0 * p0, t)
    for a in range(1, p0):
        assert ipp(a) == F(a)
    restricted = PeriodicFunction.from_function(ipp, p0)
    assert diverts_values(restricted).verdict == DIVERTING


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=3, max_size=12))
def test_transform_at_primes_is_jump(t, values):
    F = PeriodicFunction(len(values), np.array(values, dtype=np.int64))
    for p in (101, 103, 107, 109, 113):
        assert eratosthenes_at(F, p, t) == F(p) - F(1)
