"""Shared data types, tableau storage, breakdown detection and estimate selection.

Every transformation in the package produces a :class:`Tableau`, the
triangular array of transforms indexed by order ``k`` and start index ``n``.
Column ``k = 0`` holds the input sequence itself.
"""

from __future__ import annotations

import contextlib
import decimal
import enum
import math
from dataclasses import dataclass, field, replace
from decimal import Decimal
from typing import Any, Callable, Iterable, Iterator, Sequence

DEFAULT_TOL = 1e-13

# Enough digits to subtract two parsed decimals without rounding.
_EXACT_PREC = 200


class SeqAccelError(Exception):
    """Base class of all errors raised by seqaccel."""


class Breakdown(SeqAccelError, ArithmeticError):
    """A recursion denominator failed the breakdown guard."""


class IndexOutOfRange(SeqAccelError, IndexError):
    pass


class DomainError(SeqAccelError, ValueError):
    pass


class InvalidSpec(DomainError):
    pass


class InsufficientData(DomainError):
    pass


class SingularSystem(SeqAccelError, ArithmeticError):
    pass


class Source(str, enum.Enum):
    FILE = "file"
    FIXTURE = "fixture"
    GENERATED = "generated"


class Method(str, enum.Enum):
    AITKEN_ITERATED = "aitken_iterated"
    EPSILON = "epsilon"
    RICHARDSON_GENERAL = "richardson_general"
    RICHARDSON_STANDARD = "richardson_standard"
    RHO_GENERAL = "rho_general"
    RHO_STANDARD = "rho_standard"
    RHO_ITERATED_GENERAL = "rho_iterated_general"
    RHO_ITERATED_STANDARD = "rho_iterated_standard"
    OSADA = "osada"
    BDG = "bdg"

    @property
    def alternating(self) -> bool:
        """True for the epsilon/rho family whose odd columns are auxiliary."""
        return self in _ALTERNATING

    @property
    def step(self) -> int:
        """Number of additional inputs consumed per column."""
        return 2 if self in _TWO_STEP else 1

    @property
    def needs_alpha(self) -> bool:
        return self in (Method.OSADA, Method.BDG)


_ALTERNATING = frozenset({Method.EPSILON, Method.RHO_GENERAL, Method.RHO_STANDARD, Method.OSADA})
_TWO_STEP = frozenset(
    {Method.AITKEN_ITERATED, Method.RHO_ITERATED_GENERAL, Method.RHO_ITERATED_STANDARD, Method.BDG}
)


@dataclass(frozen=True)
class RealSequence:
    """An index-ordered finite list of real values, ``s_0, s_1, ...``.

    ``exact`` keeps the decimal values as parsed from text (or derived from
    parsed text by exact decimal arithmetic). Transformations use it to avoid
    the half-ulp parse error when differences of nearly equal inputs matter.
    ``resolution`` holds, per element, a bound on the rounding error it
    carries (half a unit in the last printed digit for parsed text); ``None``
    means binary64 rounding of the values themselves.
    """

    values: tuple[float, ...]
    label: str = ""
    source: Source = Source.GENERATED
    exact: tuple[Decimal, ...] | None = None
    resolution: tuple[float, ...] | None = None

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise DomainError("a sequence needs at least one element")
        for n, v in enumerate(values):
            if not math.isfinite(v):
                raise DomainError(f"element {n} is not finite: {v!r}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "source", Source(self.source))
        if self.exact is not None:
            exact = tuple(Decimal(d) for d in self.exact)
            if len(exact) != len(values):
                raise DomainError("exact decimals and values differ in length")
            object.__setattr__(self, "exact", exact)
        if self.resolution is not None:
            res = tuple(float(r) for r in self.resolution)
            if len(res) != len(values):
                raise DomainError("resolution and values differ in length")
            object.__setattr__(self, "resolution", res)

    @classmethod
    def from_strings(cls, texts: Iterable[str], label: str = "", source=Source.FILE) -> RealSequence:
        """Parse decimal strings once, keeping both the binary and exact values."""
        exact = []
        for text in texts:
            try:
                exact.append(Decimal(text.strip()))
            except decimal.InvalidOperation:
                raise DomainError(f"not a number: {text!r}") from None
        res = tuple(half_unit(d) for d in exact)
        return cls(tuple(float(d) for d in exact), label, source, tuple(exact), res)

    @classmethod
    def from_decimals(
        cls, exact: Iterable[Decimal], label: str = "", source=Source.GENERATED, resolution=None
    ) -> RealSequence:
        exact = tuple(exact)
        return cls(tuple(float(d) for d in exact), label, source, exact, resolution)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def decimals(self) -> tuple[Decimal, ...]:
        if self.exact is not None:
            return self.exact
        return tuple(Decimal(v) for v in self.values)

    def rounding_error(self, n: int) -> float:
        """Bound on the absolute rounding error of element ``n``."""
        if self.resolution is not None:
            return self.resolution[n]
        return abs(self.values[n]) * 2.0**-53

    def head(self, count: int) -> RealSequence:
        return self.window(0, count)

    def window(self, start: int, stop: int) -> RealSequence:
        exact = None if self.exact is None else self.exact[start:stop]
        res = None if self.resolution is None else self.resolution[start:stop]
        return replace(self, values=self.values[start:stop], exact=exact, resolution=res)


def half_unit(d: Decimal) -> float:
    """Half a unit in the last digit of a parsed decimal."""
    return 0.5 * 10.0 ** d.as_tuple().exponent


@dataclass(frozen=True)
class Arithmetic:
    """Number system used inside the recursions.

    ``digits=None`` selects IEEE binary64. The input is then centered on its
    last element (the subtraction done exactly in decimal) so that the
    recursions work on small residuals; every transform implemented here is
    translation covariant, so the reference is added back to reportable
    entries. An integer ``digits`` selects decimal arithmetic rounded to that
    many significant digits, without centering.
    """

    digits: int | None = None

    def __post_init__(self):
        if self.digits is not None and self.digits < 1:
            raise DomainError("digits must be positive")

    @property
    def is_decimal(self) -> bool:
        return self.digits is not None

    def context(self):
        if self.digits is None:
            return contextlib.nullcontext()
        return decimal.localcontext(decimal.Context(prec=self.digits))

    def num(self, x) -> Any:
        """Convert a Python number to the working type (call inside ``context``)."""
        if self.digits is None:
            return float(x)
        if isinstance(x, float):
            x = repr(x)
        return +Decimal(x)

    def working(self, seq: RealSequence) -> tuple[float, list]:
        """Return ``(reference, values)`` for the recursions."""
        exact = seq.decimals()
        if self.digits is None:
            ref = exact[-1]
            with decimal.localcontext(decimal.Context(prec=_EXACT_PREC)):
                return float(ref), [float(d - ref) for d in exact]
        with self.context():
            return 0.0, [+d for d in exact]


def guard_denominator(den, scale, tol: float) -> bool:
    """Return True when ``den`` may be divided by.

    A denominator breaks down when ``|den| <= tol * max(scale, 1)``.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    return abs(float(den)) > tol * max(float(scale), 1.0)


@dataclass(frozen=True)
class AcceleratorConfig:
    """Method selection plus method parameters.

    ``points`` is an :class:`seqaccel.logarithmic.InterpolationPoints`; it is
    only consulted by the general Richardson and rho forms.
    """

    method: Method = Method.EPSILON
    beta: float = 1.0
    alpha: float | None = None
    points: Any = None
    breakdown_tol: float = DEFAULT_TOL
    digits: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if not self.breakdown_tol > 0:
            raise DomainError(f"breakdown_tol must be positive, got {self.breakdown_tol}")
        if self.alpha is not None and not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.method.needs_alpha and self.alpha is None:
            raise DomainError(f"method {self.method.value} requires alpha")
        Arithmetic(self.digits)

    @property
    def arithmetic(self) -> Arithmetic:
        return Arithmetic(self.digits)

    def to_dict(self) -> dict:
        out = {"beta": self.beta, "breakdown_tol": self.breakdown_tol}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.points is not None:
            out["points"] = str(self.points)
        if self.digits is not None:
            out["digits"] = self.digits
        return out


@dataclass(frozen=True)
class Entry:
    value: float
    valid: bool = True
    reason: str | None = None


@dataclass(frozen=True)
class Tableau:
    """Triangular array ``columns[k][n]`` of transforms.

    For the epsilon/rho family odd columns are auxiliary: they diverge when
    the process converges and are never reported as estimates.
    """

    method: Method
    columns: tuple[tuple[Entry, ...], ...]
    config: AcceleratorConfig = field(default_factory=AcceleratorConfig)
    sequence: RealSequence | None = field(default=None, compare=False, repr=False)

    def __getitem__(self, key: tuple[int, int]) -> Entry:
        k, n = key
        if k < 0 or k >= len(self.columns) or n < 0 or n >= len(self.columns[k]):
            raise IndexOutOfRange(f"no tableau entry ({k}, {n})")
        return self.columns[k][n]

    def value(self, k: int, n: int) -> float:
        return self[k, n].value

    def column(self, k: int) -> tuple[Entry, ...]:
        return self.columns[k]

    def column_values(self, k: int) -> list[float]:
        return [e.value for e in self.columns[k]]

    @property
    def max_order(self) -> int:
        return len(self.columns) - 1

    def is_auxiliary(self, k: int) -> bool:
        return self.method.alternating and k % 2 == 1

    def reportable_orders(self) -> list[int]:
        return [k for k in range(len(self.columns)) if not self.is_auxiliary(k)]

    def parent(self, k: int) -> tuple[int, int]:
        """Previous reportable order and the start-index offset sharing the last input."""
        back = 2 if self.method.alternating else 1
        return k - back, back * (1 if self.method.alternating else self.method.step)

    @property
    def valid_fraction(self) -> float:
        entries = [e for col in self.columns[1:] for e in col]
        if not entries:
            return 1.0
        return sum(e.valid for e in entries) / len(entries)

    def truncated(self, max_order: int) -> Tableau:
        return replace(self, columns=self.columns[: max_order + 1])

    def __iter__(self):
        for k, col in enumerate(self.columns):
            for n, entry in enumerate(col):
                yield k, n, entry


class _Invalid(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


_DEPENDS = "depends on invalid entry"


class TableauBuilder:
    """Column-by-column construction with breakdown bookkeeping.

    Recursions call :meth:`get` for earlier entries and :meth:`divide` for
    every division by data; either may mark the entry being computed invalid.
    """

    def __init__(self, seq: RealSequence, method: Method, config: AcceleratorConfig):
        self.seq = seq
        self.method = Method(method)
        self.config = config
        self.arith = config.arithmetic
        self.tol = config.breakdown_tol
        self.ref, base = self.arith.working(seq)
        self._cols: list[list] = [base]
        self._why: list[dict[int, str]] = [{}]

    def __len__(self) -> int:
        return len(self._cols)

    def get(self, k: int, n: int):
        if k < 0:
            return self.arith.num(0)
        v = self._cols[k][n]
        if v is None:
            raise _Invalid(_DEPENDS)
        return v

    def divide(self, num, den, scale):
        if not guard_denominator(den, scale, self.tol):
            raise _Invalid(f"denominator {float(den):.3g} below breakdown tolerance")
        return num / den

    def add_column(self, count: int, formula: Callable[[int], Any]) -> None:
        col, why = [], {}
        with self.arith.context():
            for n in range(count):
                try:
                    col.append(formula(n))
                except _Invalid as exc:
                    col.append(None)
                    why[n] = exc.reason
                except (ZeroDivisionError, decimal.DivisionByZero, decimal.InvalidOperation):
                    col.append(None)
                    why[n] = "division by zero"
        self._cols.append(col)
        self._why.append(why)

    def build(self) -> Tableau:
        columns = [tuple(Entry(v) for v in self.seq.values)]
        for k in range(1, len(self._cols)):
            shift = 0.0 if (self.method.alternating and k % 2) else self.ref
            col = []
            for n, v in enumerate(self._cols[k]):
                if v is None:
                    col.append(Entry(math.nan, False, self._why[k][n]))
                    continue
                value = float(v) + shift
                if math.isfinite(value):
                    col.append(Entry(value))
                else:
                    col.append(Entry(math.nan, False, "overflow"))
            columns.append(tuple(col))
        return Tableau(self.method, tuple(columns), self.config, self.seq)


@dataclass(frozen=True)
class EstimateReport:
    """Best infinite-limit estimate and where in the tableau it came from.

    ``stage_deltas[i]`` is the agreement of the ``i``-th reportable column
    beyond 0 with its parent column: ``max |T(k, n) - T(parent, n + off)|``.
    ``degraded`` flags the fallback to the last input element.
    """

    estimate: float
    order_k: int
    start_n: int
    stage_deltas: tuple[float, ...] = ()
    valid_fraction: float = 1.0
    degraded: bool = False

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "k": self.order_k,
            "n": self.start_n,
            "stage_deltas": list(self.stage_deltas),
            "valid_fraction": self.valid_fraction,
            "degraded": self.degraded,
        }


def column_agreement(tableau: Tableau, k: int) -> tuple[float, dict[int, float]]:
    """Agreement of reportable column ``k`` with its parent column.

    Returns the column metric (max over shared valid ``n``, ``nan`` when no
    entry of the column is valid) and the per-entry differences.
    """
    parent, off = tableau.parent(k)
    per_entry = {}
    for n, entry in enumerate(tableau.column(k)):
        if not entry.valid:
            continue
        ref = tableau[parent, n + off]
        if ref.valid:
            per_entry[n] = abs(entry.value - ref.value)
    metric = max(per_entry.values()) if per_entry else math.nan
    return metric, per_entry


def _plateau_scores(column: Sequence[Entry], per_entry: dict[int, float]) -> dict[int, float]:
    # An entry scores the worst of its parent agreement and its agreement
    # with valid neighbours in the same column.
    scores = {}
    for n, d in per_entry.items():
        worst = d
        for m in (n - 1, n + 1):
            if 0 <= m < len(column) and column[m].valid:
                worst = max(worst, abs(column[n].value - column[m].value))
        scores[n] = worst
    return scores


def select_best(tableau: Tableau) -> EstimateReport:
    """Pick the entry with the best agreement plateau.

    Among the reportable columns beyond ``k = 0`` that contain valid entries,
    the column with the smallest agreement metric wins (ties go to the
    higher order). Inside it, the entry closest to its parent wins (ties go
    to the larger ``n``). Without any such column the last input element is
    returned and ``degraded`` is set, unless the input is constant.
    """
    if not tableau.columns or not tableau.columns[0]:
        raise InsufficientData("tableau has no k=0 column")
    deltas = []
    best = None
    for k in tableau.reportable_orders()[1:]:
        metric, per_entry = column_agreement(tableau, k)
        if not per_entry:
            continue
        deltas.append(metric)
        score = _plateau_scores(tableau.column(k), per_entry)
        n = min(score, key=lambda i: (score[i], -i))
        if best is None or metric <= best[0]:
            best = (metric, k, n)
    base = tableau.column(0)
    if best is None:
        last = len(base) - 1
        constant = all(e.value == base[0].value for e in base)
        return EstimateReport(
            base[last].value, 0, last, (), tableau.valid_fraction, degraded=not constant
        )
    _, k, n = best
    return EstimateReport(tableau.value(k, n), k, n, tuple(deltas), tableau.valid_fraction)


def as_sequence(s: RealSequence | Sequence[float], label: str = "") -> RealSequence:
    if isinstance(s, RealSequence):
        return s
    return RealSequence(tuple(s), label)
