"""From oligomer total energies to the infinite-chain limit.

Two derived sequences are built from the totals ``E_N``: the average energy
per repeat unit ``E_N / N`` and the increment ``E_{N+1} - E_N``. The
increment loses the end-group ``1/N`` term of the average and converges much
faster, so it supplies the primary estimate; the average is extrapolated too,
as a cross-check.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources

from .core import (
    AcceleratorConfig,
    DomainError,
    EstimateReport,
    InsufficientData,
    Method,
    RealSequence,
    Source,
    Tableau,
    half_unit,
    select_best,
)
from .diagnostics import ConvergenceClass, Kind, classify
from .fileio import ENERGY_HEADER, ParseError, parse_rows, read_text
from .linear import aitken_iterated_tableau, epsilon_staged, epsilon_tableau
from .logarithmic import (
    bdg,
    osada,
    richardson_general,
    richardson_standard,
    rho_general,
    rho_iterated,
    rho_iterated_general,
    rho_standard,
)

AUTO = "auto"
MIN_AUTO_ROWS = 5
FIXTURES = {"table1": "table1.csv"}

_DIV_PREC = 40


@dataclass(frozen=True)
class EnergyTable:
    """Total energies ``E_N`` for ``N = 1, 2, ...`` without gaps."""

    energies: tuple[Decimal, ...]
    label: str = ""
    source: Source = Source.FILE
    resolution: tuple[float, ...] | None = None

    def __post_init__(self):
        energies = tuple(Decimal(e) for e in self.energies)
        if not energies:
            raise DomainError("an energy table needs at least one row")
        if not all(e.is_finite() for e in energies):
            raise DomainError("energies must be finite")
        object.__setattr__(self, "energies", energies)

    @classmethod
    def from_rows(cls, rows, label: str = "", source=Source.FILE) -> EnergyTable:
        """Build from ``(N, E_N)`` pairs; ``E_N`` given as decimal text keeps its digits."""
        rows = list(rows)
        for i, (n, _) in enumerate(rows):
            if int(n) != i + 1:
                raise DomainError(f"row {i + 1} has N = {n}; N must run 1, 2, 3, ... without gaps")
        energies = [Decimal(str(e)) if isinstance(e, str) else Decimal(e) for _, e in rows]
        exact_text = all(isinstance(e, (str, Decimal)) for _, e in rows)
        res = tuple(half_unit(e) for e in energies) if exact_text else None
        return cls(tuple(energies), label, source, res)

    @classmethod
    def from_values(cls, values, label: str = "", source=Source.GENERATED) -> EnergyTable:
        """Energies for ``N = 1 .. len(values)`` given as binary floats."""
        return cls.from_rows(((i + 1, float(v)) for i, v in enumerate(values)), label, source)

    def __len__(self) -> int:
        return len(self.energies)

    @property
    def rows(self) -> list[tuple[int, Decimal]]:
        return [(i + 1, e) for i, e in enumerate(self.energies)]

    def scaled(self, factor) -> EnergyTable:
        f = Decimal(str(factor)) if isinstance(factor, float) else Decimal(factor)
        with decimal.localcontext(decimal.Context(prec=200)):
            energies = tuple(e * f for e in self.energies)
        res = None if self.resolution is None else tuple(r * abs(float(f)) for r in self.resolution)
        return EnergyTable(energies, self.label, self.source, res)


def parse_energy_table(text: str, label: str = "", source=Source.FILE) -> EnergyTable:
    rows = parse_rows(text, ENERGY_HEADER)
    for i, (lineno, n, _) in enumerate(rows):
        if n != i + 1:
            raise ParseError(f"N = {n} out of sequence, expected {i + 1}", lineno)
    return EnergyTable.from_rows(((n, str(v)) for _, n, v in rows), label, source)


def read_energy_table(path) -> EnergyTable:
    return parse_energy_table(read_text(path), label=str(path))


def load_fixture(name: str = "table1") -> EnergyTable:
    if name not in FIXTURES:
        raise DomainError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    text = resources.files("seqaccel").joinpath("data").joinpath(FIXTURES[name]).read_text()
    return parse_energy_table(text, label=name, source=Source.FIXTURE)


def average_energies(t: EnergyTable) -> RealSequence:
    """``s_n = E_{n+1} / (n+1)``."""
    with decimal.localcontext(decimal.Context(prec=_DIV_PREC)):
        exact = [e / (n + 1) for n, e in enumerate(t.energies)]
    res = None
    if t.resolution is not None:
        res = [r / (n + 1) for n, r in enumerate(t.resolution)]
    return RealSequence.from_decimals(exact, f"{t.label} E_av".strip(), t.source, res)


def energy_differences(t: EnergyTable) -> RealSequence:
    """``s_n = E_{n+2} - E_{n+1}``, computed without rounding."""
    if len(t) < 2:
        raise InsufficientData("energy differences need at least 2 rows")
    e = t.energies
    with decimal.localcontext(decimal.Context(prec=200)):
        exact = [e[i + 1] - e[i] for i in range(len(e) - 1)]
    res = None
    if t.resolution is not None:
        r = t.resolution
        res = [r[i] + r[i + 1] for i in range(len(e) - 1)]
    return RealSequence.from_decimals(exact, f"{t.label} E_dif".strip(), t.source, res)


@dataclass(frozen=True)
class ChainLimitReport:
    e_av_limit: EstimateReport
    e_dif_limit: EstimateReport
    classification_av: ConvergenceClass
    classification_dif: ConvergenceClass
    tableaus: dict = field(default_factory=dict, compare=False)
    methods: dict = field(default_factory=dict)

    @property
    def estimate(self) -> float:
        return self.e_dif_limit.estimate

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "e_dif_limit": self.e_dif_limit.to_dict(),
            "e_av_limit": self.e_av_limit.to_dict(),
            "classification_dif": self.classification_dif.to_dict(),
            "classification_av": self.classification_av.to_dict(),
            "methods": dict(self.methods),
        }


def _classify(s: RealSequence) -> ConvergenceClass:
    try:
        return classify(s)
    except InsufficientData as exc:
        return ConvergenceClass(Kind.UNDETERMINED, evidence={"reason": str(exc)})


def _auto(s: RealSequence, cls: ConvergenceClass, digits=None) -> tuple[Method, Tableau, EstimateReport]:
    if cls.kind is Kind.LOGARITHMIC:
        if cls.alpha is not None and cls.alpha > 0 and len(s) >= 3:
            tab = bdg(s, cls.alpha, AcceleratorConfig(Method.BDG, alpha=cls.alpha, digits=digits))
            return Method.BDG, tab, select_best(tab)
        tab = richardson_standard(s, 1.0, AcceleratorConfig(Method.RICHARDSON_STANDARD, digits=digits))
        return Method.RICHARDSON_STANDARD, tab, select_best(tab)
    if len(s) < 3:
        tab = epsilon_tableau(s, AcceleratorConfig(Method.EPSILON, digits=digits))
        return Method.EPSILON, tab, select_best(tab)
    staged = epsilon_staged(s, AcceleratorConfig(Method.EPSILON, digits=digits))
    return Method.EPSILON, staged.tableau, staged.report


_BUILDERS = {
    Method.AITKEN_ITERATED: lambda s, c: aitken_iterated_tableau(s, c),
    Method.EPSILON: lambda s, c: epsilon_tableau(s, c),
    Method.RICHARDSON_GENERAL: lambda s, c: richardson_general(s, c.points, c),
    Method.RICHARDSON_STANDARD: lambda s, c: richardson_standard(s, c.beta, c),
    Method.RHO_GENERAL: lambda s, c: rho_general(s, c.points, c),
    Method.RHO_STANDARD: lambda s, c: rho_standard(s, c),
    Method.RHO_ITERATED_GENERAL: lambda s, c: rho_iterated_general(s, c.points, c),
    Method.RHO_ITERATED_STANDARD: lambda s, c: rho_iterated(s, "standard", c),
    Method.OSADA: lambda s, c: osada(s, c.alpha, c),
    Method.BDG: lambda s, c: bdg(s, c.alpha, c),
}


def build_tableau(s: RealSequence, cfg: AcceleratorConfig) -> Tableau:
    """Run the method named in ``cfg`` on ``s``."""
    return _BUILDERS[cfg.method](s, cfg)


def chain_limit(t: EnergyTable, cfg: AcceleratorConfig | str = AUTO) -> ChainLimitReport:
    """Extrapolate both derived sequences to the infinite-chain limit.

    In ``"auto"`` mode each sequence is classified first: linear and
    exponential-tail sequences get the staged epsilon algorithm, logarithmic
    ones the BDG process with the estimated decay exponent (or standard
    Richardson when no exponent is available). An explicit configuration
    applies its method to both sequences.
    """
    auto = isinstance(cfg, str)
    if auto and cfg != AUTO:
        raise DomainError(f"unknown mode {cfg!r}")
    if auto and len(t) < MIN_AUTO_ROWS:
        raise InsufficientData(f"auto mode needs at least {MIN_AUTO_ROWS} rows, got {len(t)}")
    av, dif = average_energies(t), energy_differences(t)
    cls_av, cls_dif = _classify(av), _classify(dif)
    results = {}
    for name, s, c in (("av", av, cls_av), ("dif", dif, cls_dif)):
        if auto:
            results[name] = _auto(s, c)
        else:
            tab = build_tableau(s, cfg)
            results[name] = (cfg.method, tab, select_best(tab))
    return ChainLimitReport(
        e_av_limit=results["av"][2],
        e_dif_limit=results["dif"][2],
        classification_av=cls_av,
        classification_dif=cls_dif,
        tableaus={name: r[1] for name, r in results.items()},
        methods={name: r[0].value for name, r in results.items()},
    )
