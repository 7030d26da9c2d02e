import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqaccel.core import AcceleratorConfig, Breakdown, IndexOutOfRange, InsufficientData, Method
from seqaccel.diagnostics import ModelSequenceSpec, generate, pade
from seqaccel.linear import (
    aitken_delta2,
    aitken_iterated,
    aitken_iterated_tableau,
    epsilon_staged,
    epsilon_tableau,
    wynn_epsilon,
)
from seqaccel.reproduce import EPSILON

# Keep |lambda| away from 1, where the transform is undefined.
lambdas = st.one_of(st.floats(0.05, 0.9), st.floats(-0.9, -0.05), st.floats(1.1, 3.0), st.floats(-3.0, -1.1))


@given(st.floats(-5, 5), st.floats(0.1, 3).flatmap(lambda c: st.sampled_from([c, -c])), lambdas,
       st.integers(0, 4))
def test_aitken_exact_on_single_exponential(limit, c, lam, n):
    s = generate(ModelSequenceSpec.single_exponential(limit, c, lam, 8))
    scale = max(abs(limit), *(abs(v) for v in s.values[n:n + 3]))
    assert abs(aitken_delta2(s, n) - limit) <= 1e-12 * scale


def test_aitken_small_cases():
    assert aitken_delta2([1.0, 0.5, 0.25], 0) == 0.0
    # diverging but still exact
    assert aitken_delta2([1 + 2.0**n for n in range(3)], 0) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(IndexOutOfRange):
        aitken_delta2([1.0, 2.0, 3.0], 1)
    with pytest.raises(Breakdown):
        aitken_delta2([1.0, 2.0, 3.0], 0)


def test_iterated_aitken_column_sizes():
    tab = aitken_iterated_tableau([1 / (n + 1) ** 2 for n in range(9)])
    assert [len(c) for c in tab.columns] == [9, 7, 5, 3, 1]
    with pytest.raises(InsufficientData):
        aitken_iterated([1.0, 2.0])


def test_iterated_aitken_two_exponentials():
    s = generate(ModelSequenceSpec.multi_exponential(2.0, (1.0, 0.5), (0.6, 0.2), 11))
    tab = aitken_iterated(s).tableau
    err1 = abs(tab.value(1, 4) - 2.0)
    err2 = abs(tab.value(2, 4) - 2.0)
    assert err2 < err1 < abs(s[6] - 2.0)


def test_epsilon_column_two_equals_aitken():
    s = [0.3 + 0.7 * 0.4**n + 0.2 * (-0.3) ** n for n in range(8)]
    tab = epsilon_tableau(s)
    for n in range(6):
        assert tab.value(2, n) == pytest.approx(aitken_delta2(s, n), rel=1e-13)


def test_epsilon_k_exponentials_exact_in_column_2k():
    s = generate(ModelSequenceSpec.multi_exponential(-1.5, (1.0, -2.0), (0.7, 0.3), 9))
    tab = epsilon_tableau(s)
    for e in tab.column(4):
        assert e.value == pytest.approx(-1.5, abs=1e-11)


def ln1p_partial_sums(z, count):
    coeffs = [0.0] + [(-1) ** (v + 1) / v for v in range(1, count + 2)]
    sums = [math.fsum(coeffs[i] * z**i for i in range(n + 1)) for n in range(count)]
    return coeffs, sums


@pytest.mark.parametrize("z", [0.25, 0.5, 0.75])
def test_epsilon_pade_identity(z):
    coeffs, f = ln1p_partial_sums(z, 9)
    tab = epsilon_tableau(f)
    for k in range(0, 5):
        for n in range(0, 9 - 2 * k):
            p = pade(coeffs, n + k, k, z)
            assert tab.value(2 * k, n) == pytest.approx(p, rel=1e-10, abs=1e-300)


def test_pade_example_two_two():
    coeffs, f = ln1p_partial_sums(0.5, 5)
    assert epsilon_tableau(f).value(4, 0) == pytest.approx(pade(coeffs, 2, 2, 0.5), rel=1e-12)


def test_epsilon_on_alternating_log_series_converges_fast():
    _, f = ln1p_partial_sums(1.0, 12)
    rep = wynn_epsilon(f).report
    assert abs(rep.estimate - math.log(2)) < 1e-8
    assert abs(f[-1] - math.log(2)) > 1e-2


def test_epsilon_error_falls_geometrically_by_column():
    s = [sum(0.5**j * 0.8 ** (j * n) for j in range(1, 6)) for n in range(16)]
    tab = epsilon_tableau(s)
    errs = [abs(tab.value(2 * k, 2)) for k in range(1, 5)]
    slope = np.polyfit(range(1, 5), np.log(errs), 1)[0]
    assert slope < -1.0


def test_staged_epsilon_on_energy_differences(e_dif):
    res = epsilon_staged(e_dif.head(14))
    # eps_6^(7) drifts away from its neighbours, which ends the staging
    assert [st.k for st in res.stages] == [2, 4, 6]
    deltas = [st.agreement for st in res.stages]
    assert deltas[0] > deltas[1] < deltas[2]
    assert abs(res.stages[2].values[7] - -75.945694763) < 2e-8
    for n, text in enumerate(EPSILON[2]):
        assert res.stages[0].values[n] == pytest.approx(float(text), abs=3e-9)
    assert res.report.order_k in (4, 6)
    assert res.report.estimate == pytest.approx(-75.945694653, abs=3e-9)
    assert res.tableau.max_order == 6


def test_staged_epsilon_minimal_length():
    res = epsilon_staged([1, 1.5, 1.75])
    assert [st.k for st in res.stages] == [2]
    assert res.report.estimate == 2.0
    with pytest.raises(InsufficientData):
        epsilon_staged([1, 1.5])


def test_staged_epsilon_stops_when_a_column_breaks_down():
    # Column 2 is already exact, so column 4 divides by zero everywhere.
    s = generate(ModelSequenceSpec.single_exponential(1.0, 1.0, 0.5, 9))
    res = epsilon_staged(s)
    assert [st.k for st in res.stages] == [2]
    assert res.stages[0].agreement <= 1e-15
    assert res.report.estimate == pytest.approx(1.0, abs=1e-14)


def test_iterated_aitken_agrees_with_epsilon_on_energy_differences(e_dif):
    tab = aitken_iterated(e_dif.head(14)).tableau
    assert abs(tab.value(3, 1) - -75.945694655) <= 2e-9
    assert abs(tab.value(3, 1) - epsilon_tableau(e_dif.head(14)).value(6, 1)) <= 2e-9


def test_iterated_aitken_on_geometric_partial_sums():
    s = [sum(2.0**-v for v in range(n + 1)) for n in range(7)]
    res = aitken_iterated(s)
    assert all(e.value == 2.0 for e in res.tableau.column(1))
    # an exact first column leaves nothing for the next one to divide by
    assert not any(e.valid for e in res.tableau.column(2))
    assert res.report.estimate == 2.0


def test_decimal_mode_matches_binary_on_clean_data():
    s = [2 + 0.5**n + 0.25**n for n in range(8)]
    a = epsilon_tableau(s)
    b = epsilon_tableau(s, AcceleratorConfig(Method.EPSILON, digits=30))
    for k in a.reportable_orders():
        for x, y in zip(a.column(k), b.column(k)):
            if x.valid and y.valid:
                assert x.value == pytest.approx(y.value, rel=1e-12)
