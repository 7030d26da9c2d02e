"""Euler-Maclaurin acceleration of the Dirichlet series for the zeta function.

The tail ``sum_{v=n+1}^inf (v+1)^(-z)`` is replaced by its integral, a half
term and ``k`` Bernoulli corrections. The expansion is asymptotic in ``n``;
adding more Bernoulli terms for fixed ``n`` eventually makes things worse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError, IndexOutOfRange

# B_0 .. B_30 (even indices only; odd ones beyond B_1 vanish).
_BERNOULLI = {
    0: Fraction(1),
    2: Fraction(1, 6),
    4: Fraction(-1, 30),
    6: Fraction(1, 42),
    8: Fraction(-1, 30),
    10: Fraction(5, 66),
    12: Fraction(-691, 2730),
    14: Fraction(7, 6),
    16: Fraction(-3617, 510),
    18: Fraction(43867, 798),
    20: Fraction(-174611, 330),
    22: Fraction(854513, 138),
    24: Fraction(-236364091, 2730),
    26: Fraction(8553103, 6),
    28: Fraction(-23749461029, 870),
    30: Fraction(8615841276005, 14322),
}

MAX_TERMS = 15


class OutOfRange(IndexOutOfRange):
    """Requested Bernoulli number lies beyond the built-in table."""


def bernoulli_exact(m: int) -> Fraction:
    if m < 0 or m % 2:
        raise DomainError(f"only even non-negative indices are tabulated, got {m}")
    if m > 30:
        raise OutOfRange(f"B_{m} is beyond the table (m <= 30)")
    return _BERNOULLI[m]


def bernoulli_number(m: int) -> float:
    """Bernoulli number ``B_m`` for even ``0 <= m <= 30``."""
    return float(bernoulli_exact(m))


def pochhammer(z: float, m: int) -> float:
    """Rising factorial ``(z)_m = z (z+1) ... (z+m-1)``; ``(z)_0 = 1``."""
    if m < 0:
        raise DomainError("Pochhammer index must be non-negative")
    out = 1.0
    for i in range(m):
        out *= z + i
    return out


@dataclass(frozen=True)
class ZetaTailExpansion:
    z: float
    n: int
    k: int
    integral_term: float
    half_term: float
    bernoulli_terms: tuple[float, ...]

    @property
    def terms(self) -> dict:
        return {
            "integral_term": self.integral_term,
            "half_term": self.half_term,
            "bernoulli_terms": list(self.bernoulli_terms),
        }

    def total(self) -> float:
        return math.fsum((self.integral_term, self.half_term, *self.bernoulli_terms))

    def to_dict(self) -> dict:
        return {"z": self.z, "n": self.n, "k": self.k, **self.terms}


def _check(z: float, n: int, k: int) -> None:
    if not z > 1:
        raise DomainError(f"the Dirichlet series needs z > 1, got {z}")
    if n < 0:
        raise DomainError("truncation index must be non-negative")
    if not 0 <= k <= MAX_TERMS:
        raise DomainError(f"k must lie in 0..{MAX_TERMS}")


def zeta_tail(z: float, n: int, k: int = 3) -> ZetaTailExpansion:
    """Truncated Euler-Maclaurin expansion of ``sum_{v>n} (v+1)^(-z)``."""
    _check(z, n, k)
    x = float(n + 2)
    integral = x ** (1 - z) / (z - 1)
    half = x ** (-z) / 2
    bern = []
    for j in range(1, k + 1):
        coef = pochhammer(z, 2 * j - 1) * bernoulli_number(2 * j) / math.factorial(2 * j)
        bern.append(coef * x ** (-z - 2 * j + 1))
    return ZetaTailExpansion(z, n, k, integral, half, tuple(bern))


def partial_sum(z: float, n: int) -> float:
    """``sum_{v=0}^n (v+1)^(-z)``, summed with fsum."""
    return math.fsum((v + 1) ** -z for v in range(n + 1))


def zeta_estimate(z: float, n: int, k: int = 3) -> float:
    tail = zeta_tail(z, n, k)
    return math.fsum((partial_sum(z, n), tail.integral_term, tail.half_term, *tail.bernoulli_terms))


def direct_terms_exponent(z: float, accuracy: float) -> float:
    """``log10`` of the number of terms direct summation needs.

    Solves ``(n+2)^(1-z)/(z-1) = accuracy`` for ``n`` using only the leading
    (integral) part of the tail.
    """
    if not z > 1 or not accuracy > 0:
        raise DomainError("need z > 1 and a positive accuracy")
    return -math.log10(accuracy * (z - 1)) / (z - 1)
