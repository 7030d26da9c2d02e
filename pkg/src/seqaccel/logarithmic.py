"""Accelerators for logarithmically convergent sequences.

Richardson extrapolation (Neville's scheme at x = 0), Wynn's rho algorithm
and its iteration, each in a general form driven by interpolation points and
in the standard form for the usual point family, plus Osada's rho variant and
the weighted Δ² process of Bjørstad, Dahlquist and Grosse (BDG), both of
which need the decay exponent ``alpha`` of the remainders.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Callable

from .core import (
    AcceleratorConfig,
    DomainError,
    InsufficientData,
    Method,
    RealSequence,
    Tableau,
    TableauBuilder,
    as_sequence,
)


@dataclass(frozen=True)
class InterpolationPoints:
    """A family of interpolation points ``x_n``.

    ``reciprocal_shift`` gives ``x_n = 1/(n + beta)`` (decreasing to 0, for
    Richardson), ``linear`` gives ``x_n = n + 1`` (increasing to infinity, for
    rho), ``explicit`` uses the listed values.
    """

    rule: str
    beta: float = 1.0
    points: tuple[float, ...] = ()

    def __post_init__(self):
        if self.rule not in ("explicit", "reciprocal_shift", "linear"):
            raise DomainError(f"unknown interpolation rule {self.rule!r}")
        if self.rule == "reciprocal_shift" and not self.beta > 0:
            raise DomainError("beta must be positive")
        object.__setattr__(self, "points", tuple(float(x) for x in self.points))

    @classmethod
    def explicit(cls, values) -> InterpolationPoints:
        return cls("explicit", points=tuple(values))

    @classmethod
    def reciprocal_shift(cls, beta: float = 1.0) -> InterpolationPoints:
        return cls("reciprocal_shift", beta=beta)

    @classmethod
    def linear(cls) -> InterpolationPoints:
        return cls("linear")

    @classmethod
    def parse(cls, text: str) -> InterpolationPoints:
        """Accept ``n+1``, ``1/(n+BETA)`` or a comma separated list."""
        t = text.replace(" ", "")
        if t in ("n+1", "linear"):
            return cls.linear()
        m = re.fullmatch(r"1/\(n\+([^)]+)\)", t)
        if m:
            return cls.reciprocal_shift(float(m.group(1)))
        try:
            return cls.explicit(float(x) for x in t.split(",") if x)
        except ValueError:
            raise DomainError(f"cannot parse interpolation points {text!r}") from None

    def __str__(self) -> str:
        if self.rule == "linear":
            return "n+1"
        if self.rule == "reciprocal_shift":
            return f"1/(n+{self.beta:g})"
        return ",".join(repr(x) for x in self.points)

    def values(self, count: int, arith=None) -> list:
        num = (lambda x: x) if arith is None else arith.num
        if self.rule == "linear":
            return [num(n + 1) for n in range(count)]
        if self.rule == "reciprocal_shift":
            beta = num(self.beta)
            return [num(1) / (n + beta) for n in range(count)]
        if len(self.points) < count:
            raise InsufficientData(f"{count} interpolation points needed, {len(self.points)} given")
        return [num(x) for x in self.points[:count]]

    def check(self, count: int, increasing: bool) -> None:
        xs = self.values(count)
        if any(x <= 0 for x in xs):
            raise DomainError("interpolation points must be positive")
        pairs = zip(xs, xs[1:])
        ok = all(a < b for a, b in pairs) if increasing else all(a > b for a, b in pairs)
        if not ok:
            way = "increasing" if increasing else "decreasing"
            raise DomainError(f"interpolation points must be strictly {way}")


def _config(cfg, method, **kw) -> AcceleratorConfig:
    if cfg is None:
        return AcceleratorConfig(method, **kw)
    return replace(cfg, method=method, **kw)


def richardson_general(s, pts: InterpolationPoints | None = None, cfg=None) -> Tableau:
    """Neville's scheme evaluated at x = 0.

    Column ``k`` is exact when ``s_n`` is a polynomial of degree ``k`` in the
    points ``x_n``, which must decrease to zero.
    """
    s = as_sequence(s)
    if len(s) < 2:
        raise InsufficientData("Richardson extrapolation needs at least 2 elements")
    pts = pts or (cfg.points if cfg is not None and cfg.points else InterpolationPoints.reciprocal_shift())
    pts.check(len(s), increasing=False)
    cfg = _config(cfg, Method.RICHARDSON_GENERAL, points=pts)
    b = TableauBuilder(s, Method.RICHARDSON_GENERAL, cfg)
    with b.arith.context():
        x = pts.values(len(s), b.arith)
    for k in range(len(s) - 1):

        def formula(n, k=k):
            lo, hi = b.get(k, n), b.get(k, n + 1)
            xa, xb = x[n], x[n + k + 1]
            return b.divide(xa * hi - xb * lo, xa - xb, max(abs(xa), abs(xb)))

        b.add_column(len(s) - k - 1, formula)
    return b.build()


def richardson_standard(s, beta: float = 1.0, cfg=None) -> Tableau:
    """Richardson extrapolation for ``x_n = 1/(n + beta)``, the Λ recursion."""
    s = as_sequence(s)
    if len(s) < 2:
        raise InsufficientData("Richardson extrapolation needs at least 2 elements")
    cfg = _config(cfg, Method.RICHARDSON_STANDARD, beta=beta)
    b = TableauBuilder(s, Method.RICHARDSON_STANDARD, cfg)
    with b.arith.context():
        bt = b.arith.num(beta)
    for k in range(len(s) - 1):

        def formula(n, k=k):
            lo, hi = b.get(k, n), b.get(k, n + 1)
            return hi + (bt + n) / (k + 1) * (hi - lo)

        b.add_column(len(s) - k - 1, formula)
    return b.build()


def _rho(s: RealSequence, method: Method, cfg, numerator: Callable) -> Tableau:
    b = TableauBuilder(s, method, cfg)
    for k in range(len(s) - 1):

        def formula(n, k=k):
            lo, hi = b.get(k, n), b.get(k, n + 1)
            prev = b.get(k - 1, n + 1)
            return prev + b.divide(numerator(b, k, n), hi - lo, max(abs(lo), abs(hi)))

        b.add_column(len(s) - k - 1, formula)
    return b.build()


def rho_general(s, pts: InterpolationPoints | None = None, cfg=None) -> Tableau:
    """Wynn's rho algorithm with points increasing to infinity.

    Even column ``2k`` is the limit at infinity of the degree-(k, k) Thiele
    interpolant through ``s_n .. s_{n+2k}``.
    """
    s = as_sequence(s)
    pts = pts or (cfg.points if cfg is not None and cfg.points else InterpolationPoints.linear())
    pts.check(len(s), increasing=True)
    cfg = _config(cfg, Method.RHO_GENERAL, points=pts)
    arith = cfg.arithmetic
    with arith.context():
        x = pts.values(len(s), arith)
    return _rho(s, Method.RHO_GENERAL, cfg, lambda b, k, n: x[n + k + 1] - x[n])


def rho_standard(s, cfg=None) -> Tableau:
    """Rho algorithm for ``x_n = n + 1``."""
    s = as_sequence(s)
    cfg = _config(cfg, Method.RHO_STANDARD)
    return _rho(s, Method.RHO_STANDARD, cfg, lambda b, k, n: k + 1)


def osada(s, alpha: float, cfg=None) -> Tableau:
    """Osada's rho variant; ``alpha = 1`` reproduces :func:`rho_standard`."""
    s = as_sequence(s)
    cfg = _config(cfg, Method.OSADA, alpha=alpha)
    arith = cfg.arithmetic
    with arith.context():
        a = arith.num(alpha)
    return _rho(s, Method.OSADA, cfg, lambda b, k, n: k + a)


def _weighted_delta2(s: RealSequence, method: Method, cfg, factor: Callable) -> Tableau:
    """``W_{k+1}^(n) = W_k^(n+1) - f(k) ΔW_k^(n+1) ΔW_k^(n) / Δ²W_k^(n)``."""
    if len(s) < 3:
        raise InsufficientData("iterated rho needs at least 3 elements")
    b = TableauBuilder(s, method, cfg)
    k = 0
    while len(s) - 2 * (k + 1) >= 1:

        def formula(n, k=k):
            w0, w1, w2 = b.get(k, n), b.get(k, n + 1), b.get(k, n + 2)
            d0, d1 = w1 - w0, w2 - w1
            return w1 - factor(k, b.arith.num) * b.divide(d1 * d0, d1 - d0, max(abs(d0), abs(d1)))

        b.add_column(len(s) - 2 * (k + 1), formula)
        k += 1
    return b.build()


def rho_iterated_general(s, pts: InterpolationPoints | None = None, cfg=None) -> Tableau:
    s = as_sequence(s)
    if len(s) < 3:
        raise InsufficientData("iterated rho needs at least 3 elements")
    pts = pts or (cfg.points if cfg is not None and cfg.points else InterpolationPoints.linear())
    pts.check(len(s), increasing=True)
    cfg = _config(cfg, Method.RHO_ITERATED_GENERAL, points=pts)
    b = TableauBuilder(s, Method.RHO_ITERATED_GENERAL, cfg)
    with b.arith.context():
        x = pts.values(len(s), b.arith)
    k = 0
    while len(s) - 2 * (k + 1) >= 1:

        def formula(n, k=k):
            w0, w1, w2 = b.get(k, n), b.get(k, n + 1), b.get(k, n + 2)
            d0, d1 = w1 - w0, w2 - w1
            p = (x[n + 2 * k + 2] - x[n + 1]) * d0
            q = (x[n + 2 * k + 1] - x[n]) * d1
            return w1 + b.divide((x[n + 2 * k + 2] - x[n]) * d1 * d0, p - q, max(abs(p), abs(q)))

        b.add_column(len(s) - 2 * (k + 1), formula)
        k += 1
    return b.build()


def rho_iterated_standard(s, cfg=None) -> Tableau:
    s = as_sequence(s)
    cfg = _config(cfg, Method.RHO_ITERATED_STANDARD)
    return _weighted_delta2(
        s, Method.RHO_ITERATED_STANDARD, cfg, lambda k, num: num(2 * k + 2) / num(2 * k + 1)
    )


def rho_iterated(s, pts: InterpolationPoints | str | None = "standard", cfg=None) -> Tableau:
    """Iterated rho; ``pts="standard"`` (or None) selects the ``x_n = n + 1`` form."""
    if pts is None or pts == "standard":
        return rho_iterated_standard(s, cfg)
    return rho_iterated_general(s, pts, cfg)


def bdg(s, alpha: float, cfg=None) -> Tableau:
    """Weighted iterated Δ² of Bjørstad, Dahlquist and Grosse.

    ``alpha = 1`` reproduces :func:`rho_iterated_standard`.
    """
    s = as_sequence(s)
    cfg = _config(cfg, Method.BDG, alpha=alpha)
    arith = cfg.arithmetic
    with arith.context():
        a = arith.num(alpha)
    return _weighted_delta2(s, Method.BDG, cfg, lambda k, num: (2 * k + a + 1) / (2 * k + a))
