import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gre.arith import build_factor_table, num_divisors
from gre.errors import EvaluationError, InvalidArgument, OutOfRange
from gre.expansions import RamanujanCoefficients, finite_expansion_view
from gre.ramanujan_sums import cq_kluyver
from gre.series import (
    DIVERGING,
    INCONCLUSIVE,
    PLAUSIBLY_FINITE,
    fraction_checkpoints,
    geometric_checkpoints,
    partial_sums_at,
    series_verdict,
)
from gre.transforms import (
    ArithmeticFunctionView,
    EratosthenesTable,
    carmichael_coefficient,
    divisor_sum,
    eratosthenes_transform,
    inverse_eratosthenes,
    mobius_transform,
    weighted_coefficient_sum,
    wintner_assumption_check,
    wintner_coefficient,
)


@pytest.fixture(scope="module")
def t():
    return build_factor_table(10**5)


def view_of(arr, **kw):
    return ArithmeticFunctionView(lambda a: arr[a], vectorized=lambda a: arr[a], **kw)


def c2_combo(t, g1=3, g2=1):
    return ArithmeticFunctionView(lambda a: g1 + g2 * cq_kluyver(2, a, t), "g1 + g2 c_2", period_hint=2)


def table_from(values, support_max=None):
    vals = np.zeros(len(values) + 1, dtype=np.asarray(values).dtype)
    vals[1:] = values
    return EratosthenesTable(len(values), vals, support_max=support_max)


# -- Eratosthenes transform ------------------------------------------------


def test_divisor_function_has_transform_one(t):
    E = eratosthenes_transform(ArithmeticFunctionView(lambda a: num_divisors(a, t)), 500, t)
    assert np.all(E.values[1:] == 1)


def test_constant_one_gives_delta(t):
    E = eratosthenes_transform(ArithmeticFunctionView(lambda a: 1), 500, t)
    assert E.values[1] == 1 and not E.values[2:].any()


def test_two_term_expansion(t):
    E = eratosthenes_transform(c2_combo(t), 50, t)
    assert (E[1], E[2]) == (2, 2)
    assert not E.values[3:].any()


def test_integer_input_stays_integer(t):
    E = eratosthenes_transform(ArithmeticFunctionView(lambda a: a % 7), 100, t)
    assert E.values.dtype == np.int64


def test_evaluation_error_is_wrapped(t):
    def boom(a):
        if a == 13:
            raise ZeroDivisionError("nope")
        return 1

    with pytest.raises(EvaluationError):
        eratosthenes_transform(ArithmeticFunctionView(boom), 20, t)


def test_range_checks(t):
    E = eratosthenes_transform(ArithmeticFunctionView(lambda a: 1), 10, t)
    with pytest.raises(OutOfRange):
        inverse_eratosthenes(E, 11, t)
    with pytest.raises(OutOfRange):
        E[0]
    with pytest.raises(OutOfRange):
        eratosthenes_transform(ArithmeticFunctionView(lambda a: 1), t.limit + 1, t)


def test_bad_period_hint(t):
    with pytest.raises(InvalidArgument):
        ArithmeticFunctionView(lambda a: a, period_hint=3)


# -- inverse -----------------------------------------------------------------


def test_inverse_examples(t):
    delta = table_from(np.array([1] + [0] * 29))
    assert all(inverse_eratosthenes(delta, a, t) == 1 for a in range(1, 31))
    ones = table_from(np.ones(30, dtype=np.int64))
    assert inverse_eratosthenes(ones, 12, t) == 6


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=2000))
def test_roundtrip_exact(t, values):
    f = np.zeros(len(values) + 1, dtype=np.int64)
    f[1:] = values
    E = eratosthenes_transform(view_of(f), len(values), t)
    assert np.array_equal(divisor_sum(E.values), f)
    for a in range(1, len(values) + 1, max(1, len(values) // 20)):
        assert inverse_eratosthenes(E, a, t) == f[a]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=500))
def test_roundtrip_float(t, values):
    f = np.zeros(len(values) + 1)
    f[1:] = values
    back = divisor_sum(mobius_transform(f, t))
    assert np.allclose(back, f, rtol=0, atol=1e-9)


# -- Wintner / Carmichael ----------------------------------------------------


def test_wintner_two_term(t):
    E = eratosthenes_transform(c2_combo(t), 64, t, support_max=2)
    w1, w2, w3 = (wintner_coefficient(E, q) for q in (1, 2, 3))
    assert w1.value == pytest.approx(3, abs=1e-12) and w1.exact and w1.converged
    assert w2.value == pytest.approx(1, abs=1e-12)
    assert w3.value == 0


def test_wintner_delta():
    E = table_from(np.array([1.0] + [0.0] * 99), support_max=1)
    for q in range(1, 20):
        assert wintner_coefficient(E, q).value == (1 if q == 1 else 0)


def test_wintner_harmonic_not_converged():
    E = table_from(np.ones(10**5))
    est = wintner_coefficient(E, 1)
    assert not est.converged and not est.exact
    assert est.value == pytest.approx(sum(1 / d for d in range(1, 10**5 + 1)))


def test_wintner_tail_bound():
    E = table_from(np.zeros(1000))
    est = wintner_coefficient(E, 3, fprime_bound=(2.0, 2.0))
    assert est.tail_bound == pytest.approx(2.0 / 3 / math.log(1000))


def test_carmichael_examples(t):
    F = ArithmeticFunctionView(lambda a: cq_kluyver(2, a, t), period_hint=2)
    est = carmichael_coefficient(F, 2, [2], t)
    assert est.value == 1 and est.exact
    zero = ArithmeticFunctionView(lambda a: 0, period_hint=1)
    assert all(carmichael_coefficient(zero, q, [10], t).value == 0 for q in range(1, 8))
    combo = c2_combo(t)
    for x in (2, 10, 100):
        assert carmichael_coefficient(combo, 1, [x], t).checkpoints[0][1] == pytest.approx(3)


def test_carmichael_without_period_converges(t):
    F = ArithmeticFunctionView(lambda a: 3 + cq_kluyver(2, a, t))
    est = carmichael_coefficient(F, 2, [1000, 2000, 4000], t)
    assert not est.exact
    assert est.value == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_theorem2_recovery(t, seed):
    rng = np.random.default_rng(seed)
    support = sorted(rng.choice(np.arange(1, 13), size=rng.integers(1, 8), replace=False))
    G = RamanujanCoefficients.from_table({int(q): float(rng.uniform(-5, 5)) for q in support})
    F = finite_expansion_view(G, t)
    E = eratosthenes_transform(F, 96, t, support_max=G.support_max)
    for q in range(1, 13):
        target = G(q)
        assert abs(wintner_coefficient(E, q).value - target) < 1e-9
        assert abs(carmichael_coefficient(F, q, [], t).value - target) < 1e-9


def test_coefficient_json_schema(t):
    E = eratosthenes_transform(c2_combo(t), 16, t, support_max=2)
    doc = wintner_coefficient(E, 2).to_json()
    assert set(doc) == {"q", "value_re", "value_im", "checkpoints", "tail_bound", "converged", "exact"}
    assert all(len(row) == 3 for row in doc["checkpoints"])
    json.dumps(doc)


# -- summability checks ------------------------------------------------------


def test_wintner_assumption_examples():
    assert wintner_assumption_check(table_from(np.array([1.0] + [0.0] * 9999))).verdict == PLAUSIBLY_FINITE
    assert wintner_assumption_check(table_from(np.ones(10**5))).verdict == DIVERGING
    d = np.arange(1, 10**5 + 1, dtype=np.float64)
    slow = np.where(d >= 2, 1 / np.log(np.maximum(d, 2)) ** 2.5, 0.0)
    assert wintner_assumption_check(table_from(slow)).verdict == PLAUSIBLY_FINITE


def test_weighted_sum_examples(t):
    assert weighted_coefficient_sum(RamanujanCoefficients.ramanujan_r0(), 10**5, t).verdict == DIVERGING
    assert weighted_coefficient_sum(RamanujanCoefficients.from_table({1: 2.0}), 10**5, t).verdict == PLAUSIBLY_FINITE
    G = RamanujanCoefficients.custom(lambda q: 1 / (q * np.log(q + 1.0) ** 2.2), "1/(q log^2.2)")
    assert weighted_coefficient_sum(G, 10**5, t).verdict == PLAUSIBLY_FINITE


# -- series helpers ------------------------------------------------------------


def test_checkpoint_helpers():
    assert geometric_checkpoints(10**6) == [10**3, 10**4, 10**5, 10**6]
    assert geometric_checkpoints(50) == [5, 50]
    assert fraction_checkpoints(800) == [100, 200, 400, 800]
    assert partial_sums_at(np.arange(6.0), [1, 3, 5]) == [1, 6, 15]


def test_verdict_needs_enough_points():
    assert series_verdict([10, 100], [1.0, 2.0]) == INCONCLUSIVE
    assert series_verdict([10, 100], [1.0, 1.0]) == PLAUSIBLY_FINITE
