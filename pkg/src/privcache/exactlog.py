"""Exact values of the form ``q0 + sum_p q_p * log2(p)``.

Mutual information between finitely supported variables with rational
probabilities is a finite sum of ``rational * log2(rational)`` terms.  Over
the primes these logarithms are linearly independent, so collecting
exponents per prime gives a canonical exact representation: the rational
part is the coefficient of ``log2(2) = 1`` and each odd prime keeps its own
rational coefficient.  Zero tests are therefore exact.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class LogSum:
    """Canonical exact sum ``rational + sum(coef * log2(p))`` over odd primes p."""

    rational: Fraction = Fraction(0)
    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def build(cls, pairs) -> LogSum:
        """Sum of ``weight * log2(ratio)`` for ``(weight, ratio)`` pairs, ratio > 0."""
        acc: dict[int, Fraction] = defaultdict(Fraction)
        for weight, ratio in pairs:
            weight = Fraction(weight)
            ratio = Fraction(ratio)
            if weight == 0:
                continue
            if ratio <= 0:
                raise ValueError("log2 of a non-positive ratio")
            for p, e in _factor(ratio.numerator).items():
                acc[p] += weight * e
            for p, e in _factor(ratio.denominator).items():
                acc[p] -= weight * e
        rational = acc.pop(2, Fraction(0))
        terms = tuple(sorted((p, c) for p, c in acc.items() if c != 0))
        return cls(rational, terms)

    def is_zero(self) -> bool:
        return self.rational == 0 and not self.terms

    def __float__(self) -> float:
        return float(self.rational) + sum(float(c) * math.log2(p) for p, c in self.terms)

    def __str__(self) -> str:
        parts = [] if self.rational == 0 and self.terms else [str(self.rational)]
        for p, c in self.terms:
            parts.append(f"{c}*log2({p})")
        return " + ".join(parts)
