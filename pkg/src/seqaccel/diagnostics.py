"""Convergence diagnostics, model sequences and a Padé oracle.

``ratio_test`` and ``decay_parameter`` are ratios of differences of the
input, so both are invariant under affine maps ``s -> a s + b``. ``classify``
combines them into a convergence type. ``generate`` builds the analytic model
sequences on which the transformations are exact, and ``pade`` evaluates a
Padé approximant by a direct linear solve, independently of the epsilon
algorithm.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_TOL,
    Arithmetic,
    DomainError,
    InsufficientData,
    InvalidSpec,
    RealSequence,
    Source,
    SingularSystem,
    as_sequence,
    guard_denominator,
)
from .logarithmic import InterpolationPoints

# classify policy
STABLE_SPREAD = 0.05
LOG_RATIO = 0.9
RATIO_TREND_RTOL = 0.25
READING_RTOL = 0.05
PADE_MAX_COND = 1e12


def _working(s, digits):
    arith = Arithmetic(digits)
    _, v = arith.working(as_sequence(s))
    return arith, v


def ratio_test(s, tol: float = DEFAULT_TOL, digits: int | None = None) -> list[float | None]:
    """Ratios ``R_n = Δs_{n+1} / Δs_n`` for ``n = 0 .. len-3``; ``None`` where undefined."""
    s = as_sequence(s)
    if len(s) < 3:
        raise InsufficientData("the ratio test needs at least 3 elements")
    arith, v = _working(s, digits)
    out = []
    with arith.context():
        for n in range(len(v) - 2):
            d0, d1 = v[n + 1] - v[n], v[n + 2] - v[n + 1]
            if guard_denominator(d0, max(abs(v[n]), abs(v[n + 1])), tol):
                out.append(float(d1 / d0))
            else:
                out.append(None)
    return out


def decay_parameter(s, tol: float = DEFAULT_TOL, digits: int | None = None) -> list[float | None]:
    """Estimates ``T_n`` of the decay exponent, ``n = 0 .. len-4``.

    For ``s_n = s + (n+β)^(-α) Σ c_j (n+β)^(-j)`` one has ``T_n = α + O(1/n²)``.
    The estimate is a weighted third difference and scatters wildly on
    exponentially converging input; ``None`` marks guard failures.
    """
    s = as_sequence(s)
    if len(s) < 4:
        raise InsufficientData("the decay parameter needs at least 4 elements")
    arith, v = _working(s, digits)
    out = []
    with arith.context():
        d = [v[i + 1] - v[i] for i in range(len(v) - 1)]
        d2 = [d[i + 1] - d[i] for i in range(len(d) - 1)]
        for n in range(len(v) - 3):
            p = d[n + 1] * d2[n + 1]
            q = d[n + 2] * d2[n]
            den = p - q
            # p and q carry squared units of s; judge the cancellation relative to them
            m = max(abs(p), abs(q))
            if m and guard_denominator(den / m, 1.0, tol):
                out.append(float(d2[n] * d2[n + 1] / den - 1))
            else:
                out.append(None)
    return out


class Kind(str, enum.Enum):
    LINEAR = "linear"
    LOGARITHMIC = "logarithmic"
    EXPONENTIAL_TAIL = "exponential_tail"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ConvergenceClass:
    kind: Kind
    rho: float | None = None
    alpha: float | None = None
    evidence: dict = field(default_factory=dict, compare=False)

    def __str__(self) -> str:
        if self.kind in (Kind.LINEAR, Kind.EXPONENTIAL_TAIL):
            return f"{self.kind.value}(rho={self.rho:.4g})"
        if self.kind is Kind.LOGARITHMIC:
            return f"{self.kind.value}(alpha={self.alpha:.4g})"
        return self.kind.value

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "rho": self.rho, "alpha": self.alpha, "evidence": self.evidence}


def _tail(values, count=3):
    vals = [v for v in values if v is not None]
    return vals[-count:] if len(vals) >= count else None


def _ratio_trend_matches(ratios, alpha) -> bool:
    # Power tails give 1 - R_n ~ (alpha + 1)/n, so 1/(1 - R_n) grows by ~1/(alpha + 1).
    tail = _tail(ratios, 4)
    if tail is None or any(not 0 < r < 1 for r in tail):
        return False
    u = [1 / (1 - r) for r in tail]
    steps = [b - a for a, b in zip(u, u[1:])]
    want = 1 / (alpha + 1)
    return all(abs(st - want) <= RATIO_TREND_RTOL * want for st in steps)


def _resolved_ratios(s: RealSequence, ratios):
    # Drop ratios that the input rounding could move by more than READING_RTOL.
    err = [s.rounding_error(n) for n in range(len(s))]
    out = []
    for n, r in enumerate(ratios):
        d0, d1 = abs(s[n + 1] - s[n]), abs(s[n + 2] - s[n + 1])
        e0, e1 = err[n] + err[n + 1], err[n + 1] + err[n + 2]
        if r is None or d0 == 0 or d1 == 0 or e0 / d0 + e1 / d1 > READING_RTOL:
            out.append(None)
        else:
            out.append(r)
    return out


def classify(s, tol: float = DEFAULT_TOL) -> ConvergenceClass:
    """Classify the convergence of ``s`` from its ratio test and ``T_n``.

    * logarithmic(α̂): the last three ``T_n`` agree within 0.05 at a positive
      α̂, and the ratios tend to 1 (already ≥ 0.9, or rising the way a power
      tail with exponent α̂ predicts);
    * linear(ρ̂): ``|ρ̂| < 0.9`` and the last three ratios settle, with either
      every ratio within 0.05 of the others or ``T_n`` settled as well;
    * exponential_tail(ρ̂): only the last three ratios settle (spread < 0.05,
      ``|ρ̂| < 0.9``) while ``T_n`` stays erratic;
    * undetermined otherwise.

    ``ρ̂`` and ``α̂`` are means of the last three defined readings. Ratios
    that the rounding of the input could shift by more than 5 % are ignored.
    """
    s = as_sequence(s)
    if len(s) < 5:
        raise InsufficientData("classify needs at least 5 elements")
    raw = ratio_test(s, tol)
    ratios = _resolved_ratios(s, raw)
    tvals = decay_parameter(s, tol)
    evidence = {"ratios": raw, "resolved_ratios": ratios, "decay_parameters": tvals}
    rtail, ttail = _tail(ratios), _tail(tvals)
    rho = sum(rtail) / 3 if rtail else None
    alpha = sum(ttail) / 3 if ttail else None
    t_stable = ttail is not None and max(ttail) - min(ttail) < STABLE_SPREAD
    r_stable = rtail is not None and max(rtail) - min(rtail) < STABLE_SPREAD
    evidence.update(rho_hat=rho, alpha_hat=alpha, ratios_settled=r_stable, decay_settled=t_stable)

    if t_stable and alpha > 0 and rho is not None and rho < 1:
        rising = rtail[0] <= rtail[1] <= rtail[2]
        if (rising and rho >= LOG_RATIO) or _ratio_trend_matches(ratios, alpha):
            return ConvergenceClass(Kind.LOGARITHMIC, rho, alpha, evidence)
    if r_stable and abs(rho) < LOG_RATIO:
        defined = [r for r in ratios if r is not None]
        if max(defined) - min(defined) < STABLE_SPREAD or t_stable:
            return ConvergenceClass(Kind.LINEAR, rho, None, evidence)
        return ConvergenceClass(Kind.EXPONENTIAL_TAIL, rho, None, evidence)
    return ConvergenceClass(Kind.UNDETERMINED, rho, alpha, evidence)


@dataclass(frozen=True)
class ModelSequenceSpec:
    """Recipe for an analytic model sequence; build it with the classmethods."""

    kind: str
    length: int
    limit: float = 0.0
    coeffs: tuple[float, ...] = ()
    ratios: tuple[float, ...] = ()
    alpha: float = 1.0
    beta: float = 1.0
    points: InterpolationPoints | None = None
    numerator: tuple[float, ...] = ()
    denominator: tuple[float, ...] = ()

    @classmethod
    def single_exponential(cls, s, c, lam, length):
        return cls("single_exponential", length, s, (c,), (lam,))

    @classmethod
    def multi_exponential(cls, s, coeffs, ratios, length):
        return cls("multi_exponential", length, s, tuple(coeffs), tuple(ratios))

    @classmethod
    def power_tail(cls, s, alpha, beta, coeffs, length):
        return cls("power_tail", length, s, tuple(coeffs), alpha=alpha, beta=beta)

    @classmethod
    def polynomial_in_x(cls, s, coeffs, points, length):
        return cls("polynomial_in_x", length, s, tuple(coeffs), points=points)

    @classmethod
    def rational_sample(cls, a, b, points, length):
        return cls("rational_sample", length, numerator=tuple(a), denominator=tuple(b), points=points)

    def validate(self) -> None:
        if self.length < 1:
            raise InvalidSpec("length must be at least 1")
        if self.kind == "single_exponential":
            if self.coeffs[0] == 0 or abs(self.ratios[0]) == 1:
                raise InvalidSpec("single exponential needs c != 0 and |lambda| != 1")
        elif self.kind == "multi_exponential":
            if len(self.coeffs) != len(self.ratios) or not self.coeffs:
                raise InvalidSpec("one coefficient per exponential is required")
            mags = [abs(lam) for lam in self.ratios]
            if any(a <= b for a, b in zip(mags, mags[1:])):
                raise InvalidSpec("need |lambda_0| > |lambda_1| > ...")
        elif self.kind == "power_tail":
            if not (self.alpha > 0 and self.beta > 0):
                raise InvalidSpec("power tail needs alpha > 0 and beta > 0")
        elif self.kind in ("polynomial_in_x", "rational_sample"):
            if self.points is None:
                raise InvalidSpec(f"{self.kind} needs interpolation points")
            if self.kind == "rational_sample" and not (self.numerator and self.denominator):
                raise InvalidSpec("rational sample needs numerator and denominator coefficients")
        else:
            raise InvalidSpec(f"unknown model kind {self.kind!r}")


def _poly(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def generate(spec: ModelSequenceSpec) -> RealSequence:
    spec.validate()
    ns = range(spec.length)
    s = spec.limit
    if spec.kind in ("single_exponential", "multi_exponential"):
        vals = [s + sum(c * lam**n for c, lam in zip(spec.coeffs, spec.ratios)) for n in ns]
    elif spec.kind == "power_tail":
        vals = [s + (n + spec.beta) ** -spec.alpha * _poly(spec.coeffs, 1 / (n + spec.beta)) for n in ns]
    elif spec.kind == "polynomial_in_x":
        xs = spec.points.values(spec.length)
        vals = [s + x * _poly(spec.coeffs, x) for x in xs]
    else:
        xs = spec.points.values(spec.length)
        vals = [_poly(spec.numerator, x) / _poly(spec.denominator, x) for x in xs]
    return RealSequence(tuple(vals), spec.kind, Source.GENERATED)


@dataclass(frozen=True)
class PadeApproximant:
    p: tuple[float, ...]
    q: tuple[float, ...]

    def __call__(self, z: float) -> float:
        return _poly(self.p, z) / _poly(self.q, z)

    def taylor(self, count: int) -> list[float]:
        """First ``count`` Taylor coefficients of ``P/Q``."""
        out = []
        for i in range(count):
            p_i = self.p[i] if i < len(self.p) else 0.0
            acc = p_i - sum(self.q[j] * out[i - j] for j in range(1, min(i, len(self.q) - 1) + 1))
            out.append(acc)
        return out


def pade_approximant(coeffs, l: int, m: int) -> PadeApproximant:
    """Solve the accuracy-through-order equations with ``q_0 = 1``."""
    c = [float(x) for x in coeffs]
    if l < 0 or m < 0:
        raise DomainError("degrees must be non-negative")
    if l + m + 1 > len(c):
        raise InsufficientData(f"[{l}/{m}] needs {l + m + 1} coefficients, got {len(c)}")

    def g(i):
        return c[i] if i >= 0 else 0.0

    q = [1.0]
    if m:
        a = np.array([[g(l + i - j) for j in range(1, m + 1)] for i in range(1, m + 1)])
        rhs = -np.array([g(l + i) for i in range(1, m + 1)])
        if not np.all(np.isfinite(a)) or np.linalg.cond(a) > PADE_MAX_COND:
            raise SingularSystem(f"[{l}/{m}] denominator system is ill-conditioned")
        q += list(np.linalg.solve(a, rhs))
    p = [sum(q[j] * g(i - j) for j in range(min(i, m) + 1)) for i in range(l + 1)]
    return PadeApproximant(tuple(float(x) for x in p), tuple(float(x) for x in q))


def pade(coeffs, l: int, m: int, z: float) -> float:
    """Value of the ``[l/m]`` Padé approximant of the series at ``z``."""
    return pade_approximant(coeffs, l, m)(z)

