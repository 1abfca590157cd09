"""Bernoulli numbers, coefficient families, Koszul signs and unshuffles.

Everything here is exact: scalars are ``fractions.Fraction``.
"""
from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from math import comb, factorial
from typing import Iterator, NamedTuple, Sequence

__all__ = [
    "bernoulli",
    "coefficient_c",
    "sign_varsigma",
    "phi_coefficient",
    "d_coefficient",
    "vinogradov_coefficient",
    "compositions",
    "Unshuffle",
    "enumerate_unshuffles",
    "iter_unshuffles",
    "permutation_sign",
    "koszul_sign",
    "odd_koszul_sign",
    "verify_bernoulli_identities",
]

_bern: list[Fraction] = [Fraction(1)]
_bern_lock = threading.Lock()


def bernoulli(k: int) -> Fraction:
    """B_k with the convention B_1 = -1/2.

    Uses sum_{j<m} C(m, j) B_j = 0 for m >= 2.  Values are memoized; the
    cache only ever grows by appending, so concurrent callers agree.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k < len(_bern):
        return _bern[k]
    with _bern_lock:
        while len(_bern) <= k:
            m = len(_bern) + 1
            s = sum(comb(m, j) * _bern[j] for j in range(m - 1))
            _bern.append(-s / m)
    return _bern[k]


def coefficient_c(k: int) -> Fraction:
    """c_k = (-1)^(k+1) B_k 2^k / (k k!), the weights of S^k in the gauge p."""
    if k < 1:
        raise ValueError("k must be positive")
    sign = 1 if (k + 1) % 2 == 0 else -1
    return sign * bernoulli(k) * Fraction(2**k, k * factorial(k))


def sign_varsigma(k: int) -> int:
    """The sign -(-1)^(k(k+1)/2) in front of Rogers' k-ary bracket."""
    if k < 1:
        raise ValueError("k must be positive")
    return -1 if (k * (k + 1) // 2) % 2 == 0 else 1


def phi_coefficient(m: int) -> Fraction:
    """2^(m-1)/(m-1)! * B_(m-1): weight of the m-th embedding component."""
    if m < 1:
        raise ValueError("m must be positive")
    return Fraction(2 ** (m - 1), factorial(m - 1)) * bernoulli(m - 1)


def d_coefficient(m: int) -> Fraction:
    """2^m / m!."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return Fraction(2**m, factorial(m))


def vinogradov_coefficient(k: int) -> Fraction:
    """Constant in front of the ternary-bracket sum of the odd k-ary bracket.

    Equals (-1)^((k+1)/2) * 12 B_(k-1) / ((k-1)(k-2)) for odd k >= 3; it is 1
    for k = 3.
    """
    if k < 3 or k % 2 == 0:
        raise ValueError("k must be odd and at least 3")
    sign = 1 if ((k + 1) // 2) % 2 == 0 else -1
    return sign * 12 * bernoulli(k - 1) / ((k - 1) * (k - 2))


def compositions(total: int, parts: int | None = None) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of positive integers summing to ``total``."""
    if total == 0:
        if parts in (None, 0):
            yield ()
        return
    if parts is None:
        for p in range(1, total + 1):
            yield from compositions(total, p)
        return
    if parts <= 0:
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class Unshuffle(NamedTuple):
    """An unshuffle, written as the output order of input indices (0-based)."""

    permutation: tuple[int, ...]
    sign: int
    shape: tuple[int, ...]

    def blocks(self) -> list[tuple[int, ...]]:
        out, pos = [], 0
        for size in self.shape:
            out.append(self.permutation[pos : pos + size])
            pos += size
        return out


def permutation_sign(perm: Sequence[int]) -> int:
    """Plain sign of a permutation given as a sequence of distinct integers."""
    inv = 0
    for i in range(len(perm)):
        pi = perm[i]
        for j in range(i + 1, len(perm)):
            if perm[j] < pi:
                inv += 1
    return -1 if inv % 2 else 1


def _unshuffle_perms(indices: tuple[int, ...], shape: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if not shape:
        yield ()
        return
    first = shape[0]
    for block in itertools.combinations(indices, first):
        chosen = set(block)
        rest = tuple(i for i in indices if i not in chosen)
        for tail in _unshuffle_perms(rest, shape[1:]):
            yield block + tail


def iter_unshuffles(shape: Sequence[int]) -> Iterator[Unshuffle]:
    """Stream the (i_1, ..., i_l)-unshuffles; blocks of size 0 are allowed."""
    shape = tuple(shape)
    if any(s < 0 for s in shape):
        raise ValueError("block sizes must be non-negative")
    total = sum(shape)
    for perm in _unshuffle_perms(tuple(range(total)), shape):
        yield Unshuffle(perm, permutation_sign(perm), shape)


def enumerate_unshuffles(shape: Sequence[int]) -> list[Unshuffle]:
    if any(s < 1 for s in shape):
        raise ValueError("block sizes must be positive")
    return list(iter_unshuffles(shape))


def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign of reordering x_0..x_{N-1} into x_perm[0], x_perm[1], ...

    ``degrees[i]`` is the degree of x_i.  Each pair that changes relative order
    contributes (-1)^(|x_a||x_b|).
    """
    if len(perm) != len(degrees):
        raise ValueError("permutation and degree list differ in length")
    odd = 0
    for i in range(len(perm)):
        a = perm[i]
        if degrees[a] % 2 == 0:
            continue
        for j in range(i + 1, len(perm)):
            b = perm[j]
            if b < a and degrees[b] % 2:
                odd += 1
    return -1 if odd % 2 else 1


def odd_koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """chi = sign(perm) * koszul_sign(perm, degrees)."""
    return permutation_sign(perm) * koszul_sign(perm, degrees)


def verify_bernoulli_identities(max_k: int, recursion_max: int | None = None, composition_max: int | None = None, euler_max: int | None = None) -> dict:
    """Check three classical identities.

    (a) 2^k/k! B_k equals the sum over compositions (k_1..k_r) of k of
        c_{k_1}...c_{k_r}/r!, for 1 <= k <= composition_max;
    (b) sum_{j<m} C(m, j) B_j = 0 for 2 <= m <= recursion_max;
    (c) sum_{i=2}^{r-2} C(r, i) B_i B_{r-i} = -(r+1) B_r for 4 <= r <= euler_max.

    Each bound defaults to ``max_k``.  Returns
    ``{"ok": bool, "failure": (name, index) or None, "checked": {...}}``.
    """
    if max_k < 4:
        raise ValueError("max_k must be at least 4")
    rec = recursion_max or max_k
    cmp_ = composition_max or max_k
    eul = euler_max or max_k
    checked = {"recursion": rec, "compositions": cmp_, "euler": eul}
    for m in range(2, rec + 1):
        if sum(comb(m, j) * bernoulli(j) for j in range(m)) != 0:
            return {"ok": False, "failure": ("recursion", m), "checked": checked}
    for k in range(1, cmp_ + 1):
        if composition_sum(k) != d_coefficient(k) * bernoulli(k):
            return {"ok": False, "failure": ("compositions", k), "checked": checked}
    for r in range(4, eul + 1):
        lhs = sum(comb(r, i) * bernoulli(i) * bernoulli(r - i) for i in range(2, r - 1))
        if lhs != -(r + 1) * bernoulli(r):
            return {"ok": False, "failure": ("euler", r), "checked": checked}
    return {"ok": True, "failure": None, "checked": checked}


def composition_sum(k: int) -> Fraction:
    """sum over compositions (k_1..k_r) of k of c_{k_1}...c_{k_r} / r!."""
    total = Fraction(0)
    for comp in compositions(k):
        term = Fraction(1, factorial(len(comp)))
        for part in comp:
            term *= coefficient_c(part)
            if not term:
                break
        total += term
    return total
