import math
from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqaccel.core import (
    AcceleratorConfig,
    Arithmetic,
    DomainError,
    Entry,
    IndexOutOfRange,
    Method,
    RealSequence,
    Source,
    Tableau,
    guard_denominator,
    select_best,
)
from seqaccel.linear import epsilon_tableau, wynn_epsilon
from seqaccel.logarithmic import richardson_standard, rho_standard


def test_sequence_rejects_empty_and_nonfinite():
    with pytest.raises(DomainError):
        RealSequence(())
    with pytest.raises(DomainError):
        RealSequence((1.0, math.inf))
    with pytest.raises(DomainError):
        RealSequence((math.nan,))


def test_from_strings_keeps_digits_and_resolution():
    s = RealSequence.from_strings(["-77.0672438490", "1.5"])
    assert s.exact == (Decimal("-77.0672438490"), Decimal("1.5"))
    assert s.values == (-77.067243849, 1.5)
    assert s.resolution == pytest.approx((5e-11, 0.05))
    assert s.source is Source.FILE
    with pytest.raises(DomainError):
        RealSequence.from_strings(["abc"])


def test_window_slices_all_metadata():
    s = RealSequence.from_strings(["1.0", "2.00", "3.000"])
    w = s.window(1, 3)
    assert w.values == (2.0, 3.0)
    assert w.exact == (Decimal("2.00"), Decimal("3.000"))
    assert len(w.resolution) == 2
    assert list(s.head(2)) == [1.0, 2.0]


def test_rounding_error_defaults_to_binary64():
    s = RealSequence((2.0, -4.0))
    assert s.rounding_error(1) == 4.0 * 2.0**-53


def test_centered_working_values_are_exact_differences():
    s = RealSequence.from_strings(["-75.945694649", "-75.945694650"])
    ref, vals = Arithmetic().working(s)
    assert ref == -75.94569465
    assert vals == [pytest.approx(1e-9, rel=1e-15), 0.0]


def test_decimal_arithmetic_rounds_to_digits():
    a = Arithmetic(5)
    with a.context():
        assert a.num(1) / a.num(3) == Decimal("0.33333")
    with pytest.raises(DomainError):
        Arithmetic(0)


def test_guard_denominator():
    assert guard_denominator(1e-3, 1.0, 1e-13)
    assert not guard_denominator(1e-14, 1.0, 1e-13)
    assert not guard_denominator(1e-10, 1e4, 1e-13)
    with pytest.raises(DomainError):
        guard_denominator(1.0, 1.0, 0.0)


def test_config_validation():
    with pytest.raises(DomainError):
        AcceleratorConfig(Method.OSADA)
    with pytest.raises(DomainError):
        AcceleratorConfig(Method.RICHARDSON_STANDARD, beta=0)
    with pytest.raises(DomainError):
        AcceleratorConfig(breakdown_tol=-1)
    cfg = AcceleratorConfig("bdg", alpha=0.5)
    assert cfg.method is Method.BDG
    assert cfg.to_dict()["alpha"] == 0.5


def test_method_properties():
    assert Method.EPSILON.alternating and not Method.BDG.alternating
    assert Method.AITKEN_ITERATED.step == 2 and Method.RHO_STANDARD.step == 1
    assert Method.OSADA.needs_alpha and not Method.RHO_STANDARD.needs_alpha


def test_tableau_indexing_and_auxiliary_columns():
    tab = epsilon_tableau([1.0, 0.5, 0.25, 0.125, 0.0625])
    assert tab.max_order == 4
    assert tab.is_auxiliary(1) and not tab.is_auxiliary(2)
    assert tab.reportable_orders() == [0, 2, 4]
    assert tab[2, 0].value == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(IndexOutOfRange):
        tab[5, 0]
    with pytest.raises(IndexOutOfRange):
        tab[2, 3]
    assert tab.truncated(2).max_order == 2


def test_breakdown_marks_entries_invalid_not_raises():
    tab = epsilon_tableau([5.0, 5.0, 5.0, 5.0])
    assert not tab[1, 0].valid
    assert "tolerance" in tab[1, 0].reason
    assert not tab[2, 0].valid
    assert tab.valid_fraction == 0.0


def test_constant_sequence_estimate_is_not_degraded():
    rep = wynn_epsilon([5.0, 5.0, 5.0, 5.0]).report
    assert rep.estimate == 5.0
    assert rep.order_k == 0
    assert not rep.degraded


def test_select_best_falls_back_when_everything_breaks_down():
    cols = ((Entry(1.0), Entry(2.0), Entry(2.0)), (Entry(math.nan, False, "x"),) * 2)
    rep = select_best(Tableau(Method.RICHARDSON_STANDARD, cols))
    assert rep.degraded and rep.estimate == 2.0 and rep.order_k == 0


def test_select_best_prefers_converged_column():
    s = [1 + 0.5**n + 0.1 * 0.2**n for n in range(10)]
    rep = wynn_epsilon(s).report
    assert rep.estimate == pytest.approx(1.0, abs=1e-12)
    assert rep.order_k >= 4


dyadic = st.integers(-64, 64).map(lambda i: i / 8)


@given(st.lists(st.integers(-2**20, 2**20).map(lambda i: i / 2**10), min_size=6, max_size=9, unique=True),
       st.sampled_from([0.5, 2.0, -1.0, 4.0]), dyadic)
def test_affine_covariance(values, a, b):
    # Dyadic data and power-of-two scales keep the transformed inputs exact.
    base = wynn_epsilon(values).tableau
    moved = wynn_epsilon([a * v + b for v in values]).tableau
    for k, n, entry in base:
        if k % 2 or k == 0:
            continue
        other = moved[k, n]
        if entry.valid and other.valid and abs(entry.value) < 1e6:
            assert other.value == pytest.approx(a * entry.value + b, rel=1e-6, abs=1e-6)


@given(st.floats(-10, 10), st.floats(0.25, 4))
def test_translation_covariance_of_log_methods(shift, scale):
    s = [scale * (1 + 1 / (n + 1) + 0.3 / (n + 1) ** 2) for n in range(8)]
    for method in (richardson_standard, rho_standard):
        t0 = method(s)
        t1 = method([v + shift for v in s])
        for k in t0.reportable_orders()[1:3]:
            for e0, e1 in zip(t0.column(k), t1.column(k)):
                if e0.valid and e1.valid:
                    assert e1.value == pytest.approx(e0.value + shift, abs=1e-9 * (1 + abs(shift)))
