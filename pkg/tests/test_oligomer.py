from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqaccel.core import AcceleratorConfig, DomainError, InsufficientData, Method, Source
from seqaccel.diagnostics import Kind
from seqaccel.fileio import ParseError
from seqaccel.oligomer import (
    EnergyTable,
    average_energies,
    chain_limit,
    energy_differences,
    load_fixture,
    parse_energy_table,
)


def synthetic(rows=12, e_inf=-75.0, c0=2.0, c=1.0, lam=0.3):
    return EnergyTable.from_values([n * e_inf + c0 + c * lam**n for n in range(1, rows + 1)])


def test_fixture_rows(table1):
    assert len(table1) == 16
    assert table1.source is Source.FIXTURE
    assert table1.energies[0] == Decimal("-77.0672438490")
    assert table1.energies[-1] == Decimal("-1216.25008536")


def test_average_energies(table1):
    av = average_energies(table1)
    assert av[0] == -77.067243849
    assert av[1] == pytest.approx(-76.5055941450, abs=1e-12)
    assert len(av) == 16
    assert average_energies(EnergyTable.from_values([-10.0])).values == (-10.0,)


def test_energy_differences(table1):
    dif = energy_differences(table1)
    assert dif.exact[0] == Decimal("-75.943944441")
    assert dif.exact[13] == Decimal("-75.945694650")
    assert len(dif) == 15
    lin = energy_differences(EnergyTable.from_values([-10.0 * n for n in range(1, 6)]))
    assert lin.values == (-10.0,) * 4
    with pytest.raises(InsufficientData):
        energy_differences(EnergyTable.from_values([1.0]))


def test_reconstruction_identity(table1):
    av, dif = average_energies(table1), energy_differences(table1)
    for i in range(len(dif)):
        n = i + 1
        rebuilt = (n + 1) * av.exact[i + 1] - n * av.exact[i]
        assert float(rebuilt) == pytest.approx(dif[i], rel=1e-10)


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=12))
def test_reconstruction_identity_any_table(values):
    t = EnergyTable.from_values(values)
    av, dif = average_energies(t), energy_differences(t)
    for i in range(len(dif)):
        n = i + 1
        rebuilt = (n + 1) * av[i + 1] - n * av[i]
        assert rebuilt == pytest.approx(dif[i], rel=1e-10, abs=1e-10 * max(1.0, abs(values[i])))


def test_table_requires_contiguous_rows():
    with pytest.raises(DomainError):
        EnergyTable.from_rows([(1, "1.0"), (3, "2.0")])
    with pytest.raises(ParseError) as info:
        parse_energy_table("N,E_total\n1,-1.0\n3,-2.0\n")
    assert info.value.line == 3


def test_chain_limit_on_table1(table1):
    rep = chain_limit(table1)
    assert rep.estimate == pytest.approx(-75.945694653, abs=3e-9)
    assert rep.classification_av.kind is Kind.LOGARITHMIC
    assert 0.99 <= rep.classification_av.alpha <= 1.01
    assert rep.classification_dif.kind is Kind.EXPONENTIAL_TAIL
    assert 0.34 <= rep.classification_dif.rho <= 0.38
    assert rep.methods == {"av": "bdg", "dif": "epsilon"}
    # the average energies converge much more slowly
    assert abs(rep.e_av_limit.estimate - rep.estimate) < 1e-6
    assert set(rep.tableaus) == {"av", "dif"}


def test_synthetic_table_recovers_limit():
    rep = chain_limit(synthetic())
    assert rep.estimate == pytest.approx(-75.0, abs=1e-10)


@given(st.floats(-100, -1), st.floats(-5, 5), st.floats(0.2, 2), st.floats(0.1, 0.6))
def test_synthetic_tables_have_no_end_group_term(e_inf, c0, c, lam):
    rep = chain_limit(synthetic(12, e_inf, c0, c, lam))
    assert rep.estimate == pytest.approx(e_inf, abs=1e-9 * max(1.0, abs(e_inf)))


@pytest.mark.parametrize("factor", [2, -1, "0.5"])
def test_unit_covariance(table1, factor):
    base = chain_limit(table1)
    scaled = chain_limit(table1.scaled(factor))
    assert scaled.estimate == float(Decimal(factor)) * base.estimate
    assert scaled.classification_dif.kind is base.classification_dif.kind


def test_explicit_method(table1):
    rep = chain_limit(table1, AcceleratorConfig(Method.RICHARDSON_STANDARD))
    assert rep.methods == {"av": "richardson_standard", "dif": "richardson_standard"}
    assert rep.e_av_limit.estimate == pytest.approx(-75.9457, abs=1e-3)


def test_auto_mode_needs_five_rows():
    with pytest.raises(InsufficientData):
        chain_limit(synthetic(4))
    rep = chain_limit(synthetic(5))
    assert rep.classification_dif.kind is Kind.UNDETERMINED
    with pytest.raises(DomainError):
        chain_limit(synthetic(), "manual")


def test_unknown_fixture():
    with pytest.raises(DomainError):
        load_fixture("table9")
