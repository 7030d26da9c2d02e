"""Accelerators for linearly convergent sequences.

Aitken's Δ² process, its iteration, and Wynn's epsilon algorithm, plus the
staged way of running epsilon on nearly converged data: compute one even
column at a time and stop as soon as the columns stop agreeing better.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

from .core import (
    AcceleratorConfig,
    Breakdown,
    EstimateReport,
    IndexOutOfRange,
    InsufficientData,
    Method,
    RealSequence,
    Tableau,
    TableauBuilder,
    as_sequence,
    column_agreement,
    guard_denominator,
    select_best,
)


@dataclass(frozen=True)
class LinearMethodResult:
    tableau: Tableau
    report: EstimateReport


class Stage(NamedTuple):
    k: int
    values: tuple[float, ...]
    agreement: float
    parent_agreement: float


@dataclass(frozen=True)
class StagedResult:
    stages: list[Stage]
    tableau: Tableau
    report: EstimateReport


def aitken_delta2(s, n: int, tol: float | None = None) -> float:
    """Aitken's Δ² transform ``s_n - (Δs_n)² / Δ²s_n``.

    Exact for ``s_n = s + c λ^n`` with ``|λ| != 1``, convergent or not.
    """
    s = as_sequence(s)
    if n < 0 or n + 2 >= len(s):
        raise IndexOutOfRange(f"aitken_delta2 needs s_{n}..s_{n + 2}, sequence has {len(s)}")
    cfg = AcceleratorConfig(Method.AITKEN_ITERATED) if tol is None else AcceleratorConfig(
        Method.AITKEN_ITERATED, breakdown_tol=tol
    )
    b = TableauBuilder(s.window(n, n + 3), Method.AITKEN_ITERATED, cfg)
    x0, x1, x2 = b.get(0, 0), b.get(0, 1), b.get(0, 2)
    d0, d1 = x1 - x0, x2 - x1
    den = d1 - d0
    if not guard_denominator(den, max(abs(d0), abs(d1)), b.tol):
        raise Breakdown(f"Δ²s_{n} = {den!r} fails the breakdown guard")
    return b.ref + (x0 - d0 * d0 / den)


def _config(cfg: AcceleratorConfig | None, method: Method) -> AcceleratorConfig:
    if cfg is None:
        return AcceleratorConfig(method)
    if cfg.method is not method:
        return replace(cfg, method=method)
    return cfg


def aitken_iterated_tableau(s, cfg: AcceleratorConfig | None = None) -> Tableau:
    s = as_sequence(s)
    cfg = _config(cfg, Method.AITKEN_ITERATED)
    b = TableauBuilder(s, Method.AITKEN_ITERATED, cfg)
    k = 0
    while len(s) - 2 * (k + 1) >= 1:

        def formula(n, k=k):
            a0, a1, a2 = b.get(k, n), b.get(k, n + 1), b.get(k, n + 2)
            d0, d1 = a1 - a0, a2 - a1
            return a0 - b.divide(d0 * d0, d1 - d0, max(abs(d0), abs(d1)))

        b.add_column(len(s) - 2 * (k + 1), formula)
        k += 1
    return b.build()


def aitken_iterated(s, cfg: AcceleratorConfig | None = None) -> LinearMethodResult:
    """Iterated Δ² process; column ``k`` consumes ``2k + 1`` inputs."""
    s = as_sequence(s)
    if len(s) < 3:
        raise InsufficientData("iterated Aitken needs at least 3 elements")
    tab = aitken_iterated_tableau(s, cfg)
    return LinearMethodResult(tab, select_best(tab))


def epsilon_tableau(s, cfg: AcceleratorConfig | None = None) -> Tableau:
    """Full epsilon table; the ``ε_{-1} = 0`` column stays implicit."""
    s = as_sequence(s)
    cfg = _config(cfg, Method.EPSILON)
    b = TableauBuilder(s, Method.EPSILON, cfg)
    for k in range(len(s) - 1):

        def formula(n, k=k):
            lo, hi = b.get(k, n), b.get(k, n + 1)
            prev = b.get(k - 1, n + 1)
            return prev + b.divide(1, hi - lo, max(abs(lo), abs(hi)))

        b.add_column(len(s) - k - 1, formula)
    return b.build()


def wynn_epsilon(s, cfg: AcceleratorConfig | None = None) -> LinearMethodResult:
    tab = epsilon_tableau(s, cfg)
    return LinearMethodResult(tab, select_best(tab))


def epsilon_staged(s, cfg: AcceleratorConfig | None = None) -> StagedResult:
    """Run the epsilon algorithm one even column at a time.

    Stages are emitted for ``k = 2, 4, ...``. A stage's ``agreement`` is the
    gap between the two newest valid entries of its column, that is, how well
    the estimates built from the latest data agree with each other. A column
    with a single entry is measured against its parent column instead.
    ``parent_agreement`` is the column-versus-parent metric used by
    ``select_best``. The process stops after the first stage whose agreement
    is worse than its predecessor's, when a column has no valid entry, or
    when the data are exhausted.
    """
    s = as_sequence(s)
    if len(s) < 3:
        raise InsufficientData("staged epsilon needs at least 3 elements")
    tab = epsilon_tableau(s, cfg)
    stages: list[Stage] = []
    for k in range(2, tab.max_order + 1, 2):
        metric, per_entry = column_agreement(tab, k)
        if not per_entry:
            break
        valid = [e.value for e in tab.column(k) if e.valid]
        tail = abs(valid[-1] - valid[-2]) if len(valid) > 1 else metric
        stages.append(Stage(k, tuple(tab.column_values(k)), tail, metric))
        if len(stages) > 1 and tail > stages[-2].agreement:
            break
    last = stages[-1].k if stages else 0
    used = tab.truncated(last)
    return StagedResult(stages, used, select_best(used))

