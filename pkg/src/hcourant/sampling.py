"""Deterministic SplitMix64 stream and generators for test elements.

The stream (state s, all arithmetic mod 2^64):

    s += 0x9E3779B97F4A7C15
    z = s
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

``randint(lo, hi)`` returns ``lo + next() % (hi - lo + 1)``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .cartan import Form, Poly, VectorField

__all__ = ["SplitMix64", "random_poly", "random_form", "random_vector_field"]

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def nonzero(self, bound: int = 3) -> int:
        v = self.randint(1, bound)
        return v if self.randint(0, 1) else -v

    def fork(self, tag: int) -> "SplitMix64":
        """An independent stream derived from this one and an integer tag."""
        return SplitMix64(self.next() ^ ((tag * 0xD1B54A32D192ED03) & _MASK))


def _monomials(m: int, cap: int) -> list[tuple[int, ...]]:
    out = []
    for total in range(cap + 1):
        for combo in itertools.combinations_with_replacement(range(m), total):
            e = [0] * m
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def random_poly(rng: SplitMix64, m: int, cap: int = 2, max_terms: int = 2) -> Poly:
    """Nonzero polynomial: 1..max_terms monomials of degree <= cap, coefficients in [-3, 3]."""
    monos = _monomials(m, cap)
    out = Poly(m)
    while not out:
        for _ in range(rng.randint(1, max_terms)):
            out = out + Poly(m, {rng.choice(monos): Fraction(rng.nonzero(3))})
    return out


def random_form(rng: SplitMix64, m: int, degree: int, cap: int = 2, max_terms: int = 2) -> Form:
    """Nonzero form of the given degree with 1..max_terms basis terms (zero if degree > m)."""
    if degree < 0 or degree > m:
        return Form(m)
    words = list(itertools.combinations(range(m), degree))
    out = Form(m)
    while not out:
        for _ in range(rng.randint(1, max_terms)):
            out = out + Form(m, {rng.choice(words): random_poly(rng, m, cap, 1)})
    return out


def random_vector_field(rng: SplitMix64, m: int, cap: int = 2, max_terms: int = 2) -> VectorField:
    out = VectorField(m)
    while not out:
        for _ in range(rng.randint(1, max_terms)):
            out = out + VectorField(m, {rng.randint(0, m - 1): random_poly(rng, m, cap, 1)})
    return out
