from fractions import Fraction
from math import comb

import pytest

from hcourant.graded import (
    SYMMETRIC,
    FunctionMap,
    GradedSpace,
    LinComb,
    add_all,
    elements_equal,
    is_zero,
    random_basis_map,
    scale,
)
from hcourant.nr import (
    ExplicitAssociator,
    IdentityMap,
    associator,
    coderivation_apply,
    compose_shifted,
    exp_morphism,
    graded_commutator,
    iterated_power,
    lift_word,
    nilpotency_probe,
    nr_product,
    pre_lie_defect,
    project,
    pushforward_structure,
    set_partitions,
    verify_morphism,
)
from hcourant.sampling import SplitMix64

SPACE = GradedSpace([0, 0, -1, -1, 1, -2], "W")


def words(rng, k, count):
    for _ in range(count):
        yield tuple(SPACE.vector({rng.randint(0, SPACE.dim - 1): Fraction(rng.nonzero(2))}) for _ in range(k))


def rmap(rng, arity, weight):
    return random_basis_map(SPACE, arity, weight, True, SYMMETRIC, rng)


def test_unary_product_is_composition():
    rng = SplitMix64(1)
    a, b = rmap(rng, 1, 0), rmap(rng, 1, 1)
    for (x,) in words(rng, 1, 10):
        assert elements_equal(nr_product(a, b)(x), a(b(x)))
    assert nr_product(rmap(rng, 3, 0), rmap(rng, 2, 0)).arity == 4


@pytest.mark.parametrize("shape", [(2, 2), (3, 2), (2, 3), (1, 3)])
def test_product_matches_coderivation(shape):
    """(a o b)(w) = pr_a(C_b(w)) computed on the symmetric coalgebra."""
    rng = SplitMix64(sum(shape) * 7 + shape[0])
    a, b = rmap(rng, shape[0], 1), rmap(rng, shape[1], 0)
    k = shape[0] + shape[1] - 1
    for w in words(rng, k, 15):
        oracle = project({a.arity: a}, coderivation_apply({b.arity: b}, w))
        assert elements_equal(nr_product(a, b)(*w), oracle)


def test_commutator_antisymmetry_and_jacobi():
    rng = SplitMix64(3)
    a, b, c = rmap(rng, 2, 1), rmap(rng, 2, 0), rmap(rng, 1, 1)
    C = graded_commutator
    for w in words(rng, 3, 10):
        s = -1 if (a.weight * b.weight) % 2 == 0 else 1
        assert elements_equal(C(a, b)(*w), scale(C(b, a)(*w), s))
    for w in words(rng, 3, 10):
        lhs = C(a, C(b, c))(*w)
        s = -1 if (a.weight * b.weight) % 2 else 1
        rhs = add_all([C(C(a, b), c)(*w), scale(C(b, C(a, c))(*w), s)])
        assert elements_equal(lhs, rhs)


def test_odd_self_commutator():
    rng = SplitMix64(5)
    a = rmap(rng, 2, 1)
    for w in words(rng, 3, 10):
        assert elements_equal(graded_commutator(a, a)(*w), scale(nr_product(a, a)(*w), 2))


def test_pre_lie_and_explicit_associator():
    rng = SplitMix64(9)
    a, b, c = rmap(rng, 3, 1), rmap(rng, 2, 0), rmap(rng, 2, 1)
    for w in words(rng, 5, 10):
        assert is_zero(pre_lie_defect(a, b, c)(*w))
        assert elements_equal(associator(a, b, c)(*w), ExplicitAssociator(a, b, c)(*w))
    u = rmap(rng, 1, 0)
    for w in words(rng, 3, 5):
        assert is_zero(associator(u, b, c)(*w))


def test_distributivity_over_product():
    """[a, b o c] = [a, b] o c + b o [a, c] - alpha(b, a, c) + alpha(b, c, a) for |a| = 0."""
    rng = SplitMix64(13)
    a, b, c = rmap(rng, 2, 0), rmap(rng, 2, 0), rmap(rng, 2, 1)
    C, P = graded_commutator, nr_product
    lhs = C(a, P(b, c))
    rhs = LinComb([
        (1, P(C(a, b), c)),
        (1, P(b, C(a, c))),
        (-1, associator(b, a, c)),
        (1, associator(b, c, a)),
    ])
    for w in words(rng, 4, 10):
        assert elements_equal(lhs(*w), rhs(*w))


def test_powers():
    rng = SplitMix64(17)
    s = rmap(rng, 2, 0)
    assert iterated_power(s, 1) is s
    assert iterated_power(s, 2).arity == 3
    with pytest.raises(ValueError):
        iterated_power(s, 0)


def bell(n):
    b = [1]
    for i in range(n):
        b.append(sum(comb(i, k) * b[k] for k in range(i + 1)))
    return b[n]


def test_set_partitions_count():
    for n in range(0, 7):
        assert sum(1 for _ in set_partitions(n)) == bell(n)


def test_coderivation_small_cases():
    rng = SplitMix64(21)
    m1, m2 = rmap(rng, 1, 1), rmap(rng, 2, 1)
    (x,) = next(words(rng, 1, 1))
    out = coderivation_apply({1: m1}, (x,))
    assert len(out) == 1 and elements_equal(out[0][1][0], m1(x))
    w = next(words(rng, 3, 1))
    terms = coderivation_apply({1: m1, 2: m2}, w)
    assert len(terms) <= 6


def test_strict_identity_morphism_has_no_defect():
    rng = SplitMix64(23)
    m = {2: rmap(rng, 2, 1)}
    ident = {1: IdentityMap(True)}
    for w in words(rng, 3, 10):
        assert is_zero(verify_morphism(ident, m, m, w))
    assert sum(1 for _ in lift_word(ident, next(words(rng, 3, 1)))) == 1


def test_compose_with_identity():
    rng = SplitMix64(29)
    f = {1: rmap(rng, 1, 0), 2: rmap(rng, 2, 0)}
    ident = {1: IdentityMap(True)}
    comp = compose_shifted(ident, f, 2)
    for w in words(rng, 2, 10):
        assert elements_equal(comp[2](*w), f[2](*w))


def test_pushforward_with_zero_gauge_is_identity():
    rng = SplitMix64(31)
    m = {1: rmap(rng, 1, 1), 2: rmap(rng, 2, 1)}
    pushed = pushforward_structure(m, {}, 3)
    for w in words(rng, 2, 10):
        assert elements_equal(pushed[2](*w), m[2](*w))
    with pytest.raises(ValueError):
        pushforward_structure(m, {1: rmap(rng, 1, 0)}, 3)


def test_exp_morphism_first_component_is_identity():
    rng = SplitMix64(37)
    p = {2: rmap(rng, 2, 0)}
    e = exp_morphism(p, 3)
    for (x,) in words(rng, 1, 5):
        assert elements_equal(e[1](x), x)
    for w in words(rng, 3, 5):
        oracle = scale(nr_product(p[2], p[2])(*w), Fraction(1, 2))
        assert elements_equal(e[3](*w), oracle)


def test_nilpotency_of_pushforward_structure():
    """A random differential-only structure stays square-zero after pushforward."""
    rng = SplitMix64(41)
    space = GradedSpace([0, -1], "D")
    d = FunctionMap(lambda x: space.vector({1: x.coeffs.get(0, 0)}) if 0 in x.coeffs else 0, 1, 1, True, SYMMETRIC, "d")
    fam = {1: d}
    for _ in range(5):
        x = space.vector({0: Fraction(rng.nonzero(3))})
        assert is_zero(nilpotency_probe(fam, (x,)))
