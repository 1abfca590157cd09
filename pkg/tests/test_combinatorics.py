from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import pytest
import sympy

from hcourant.combinatorics import (
    bernoulli,
    coefficient_c,
    composition_sum,
    compositions,
    d_coefficient,
    enumerate_unshuffles,
    iter_unshuffles,
    koszul_sign,
    permutation_sign,
    phi_coefficient,
    sign_varsigma,
    verify_bernoulli_identities,
    vinogradov_coefficient,
)


def sympy_bernoulli(k):
    # sympy uses B_1 = +1/2
    v = sympy.bernoulli(k)
    if k == 1:
        v = -v
    return Fraction(int(v.p), int(v.q))


@pytest.mark.parametrize("k", range(0, 41))
def test_bernoulli_against_sympy(k):
    assert bernoulli(k) == sympy_bernoulli(k)


def test_bernoulli_values():
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(3) == 0
    assert bernoulli(10) == Fraction(5, 66)
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_gauge_coefficients():
    assert coefficient_c(1) == -1
    assert coefficient_c(4) == Fraction(1, 180)
    assert coefficient_c(10) == Fraction(-1, 467775)
    for k in range(3, 30, 2):
        assert coefficient_c(k) == 0
    with pytest.raises(ValueError):
        coefficient_c(0)


def test_sign_varsigma():
    assert [sign_varsigma(k) for k in range(1, 9)] == [1, 1, -1, -1, 1, 1, -1, -1]
    with pytest.raises(ValueError):
        sign_varsigma(0)


def test_phi_and_d_coefficients():
    assert phi_coefficient(1) == 1
    assert phi_coefficient(2) == -1
    assert phi_coefficient(3) == Fraction(1, 3)
    assert phi_coefficient(4) == 0
    assert d_coefficient(0) == 1
    assert d_coefficient(3) == Fraction(8, 6)


def test_vinogradov_coefficient():
    assert vinogradov_coefficient(3) == 1
    # 12 B_4 / (4 * 3) with sign (-1)^3
    assert vinogradov_coefficient(5) == Fraction(1, 30)
    with pytest.raises(ValueError):
        vinogradov_coefficient(4)


def test_compositions_count_and_content():
    for k in range(1, 10):
        comps = list(compositions(k))
        assert len(comps) == 2 ** (k - 1)
        assert all(sum(c) == k and min(c) >= 1 for c in comps)
        assert len(set(comps)) == len(comps)
    assert sorted(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]


@pytest.mark.parametrize("k", range(1, 15))
def test_composition_sum_gives_bernoulli(k):
    assert composition_sum(k) == d_coefficient(k) * bernoulli(k)


def brute_unshuffles(shape):
    n = sum(shape)
    out = []
    for p in permutations(range(n)):
        pos, ok = 0, True
        for s in shape:
            block = p[pos:pos + s]
            if list(block) != sorted(block):
                ok = False
            pos += s
        if ok:
            out.append(p)
    return sorted(out)


@pytest.mark.parametrize("shape", [(1,), (2, 1), (1, 2), (2, 2), (1, 1, 1), (3, 1), (1, 2, 2)])
def test_unshuffles_match_brute_force(shape):
    got = sorted(tuple(u.permutation) for u in iter_unshuffles(shape))
    assert got == brute_unshuffles(shape)
    n = sum(shape)
    expected = factorial(n)
    for s in shape:
        expected //= factorial(s)
    assert len(got) == expected


def test_unshuffle_examples():
    assert len(enumerate_unshuffles((2, 1))) == 3
    only = enumerate_unshuffles((1,))
    assert len(only) == 1 and only[0].sign == 1
    assert len(enumerate_unshuffles((2, 2))) == 6
    for u in enumerate_unshuffles((2, 2)):
        assert u.sign == permutation_sign(u.permutation)


def brute_koszul(perm, degrees):
    # bubble sort the target order, one adjacent swap at a time
    cur = list(range(len(perm)))
    sign = 1
    target = list(perm)
    for i in range(len(target)):
        j = cur.index(target[i], i)
        while j > i:
            a, b = cur[j - 1], cur[j]
            if degrees[a] % 2 and degrees[b] % 2:
                sign = -sign
            cur[j - 1], cur[j] = b, a
            j -= 1
    return sign


def test_koszul_sign_examples():
    assert koszul_sign((1, 0), (1, 1)) == -1
    assert koszul_sign((2, 0, 1), (0, 0, 0)) == 1
    # (x3, x1, x2): the even x3 moves to the front
    assert koszul_sign((2, 0, 1), (1, 1, 0)) == 1
    # (x2, x3, x1): x1 passes the odd x2
    assert koszul_sign((1, 2, 0), (1, 1, 0)) == -1


@pytest.mark.parametrize("degrees", [(1, 1, 1, 0), (1, 0, 1, 1), (2, 1, 3, 1), (-1, -2, 0, 1)])
def test_koszul_sign_brute_force(degrees):
    for p in permutations(range(4)):
        assert koszul_sign(p, degrees) == brute_koszul(p, degrees)


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1


def test_bernoulli_identities_report():
    rep = verify_bernoulli_identities(12)
    assert rep["ok"] and rep["failure"] is None
    rep = verify_bernoulli_identities(4, 40, 14, 24)
    assert rep["ok"]
    assert rep["checked"] == {"recursion": 40, "compositions": 14, "euler": 24}
    # the Euler identity at r = 4 by hand
    assert comb(4, 2) * bernoulli(2) ** 2 == -5 * bernoulli(4) == Fraction(1, 6)
    with pytest.raises(ValueError):
        verify_bernoulli_identities(3)
