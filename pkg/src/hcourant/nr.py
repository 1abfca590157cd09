"""Nijenhuis-Richardson calculus.

Products, commutators and associators of multilinear maps, coderivations on
words, the pushforward of an L-infinity[1] structure along exp(C_p), and
morphism checks.

A *family* is a dict ``arity -> MultiMap`` (missing arities are zero).  A
*word* is a tuple of homogeneous elements standing for their symmetric
product; a formal sum of words is a list of ``(coefficient, word)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator, Sequence

from .combinatorics import iter_unshuffles, koszul_sign, odd_koszul_sign
from .graded import (
    NONE,
    SYMMETRIC,
    LinComb,
    MultiMap,
    ZeroMap,
    add_all,
    parts,
    scale,
)

__all__ = [
    "NRProduct",
    "nr_product",
    "graded_commutator",
    "associator",
    "ExplicitAssociator",
    "pre_lie_defect",
    "iterated_power",
    "right_nested_power",
    "IdentityMap",
    "LinftyStructure",
    "LinftyMorphism",
    "family_product",
    "family_commutator",
    "family_combination",
    "coderivation_apply",
    "nilpotency_probe",
    "set_partitions",
    "lift_word",
    "verify_morphism",
    "compose_shifted",
    "pushforward_structure",
    "exp_morphism",
]


def _check_same(a: MultiMap, b: MultiMap, flavor: str) -> None:
    want = flavor == "symmetric"
    if a.shifted != want or b.shifted != want:
        raise ValueError(f"{flavor} products need {'shifted' if want else 'unshifted'} maps")


class NRProduct(MultiMap):
    """a o b: insert b into a, summed over (arity b, arity a - 1)-unshuffles.

    Symmetric flavor uses Koszul signs of the shifted degrees.  Skew flavor
    uses odd Koszul signs of unshifted degrees and the prefactor
    (-1)^(|b| (arity a - 1)).
    """

    def __init__(self, a: MultiMap, b: MultiMap, flavor: str = "symmetric"):
        if flavor not in ("symmetric", "skew"):
            raise ValueError("flavor must be 'symmetric' or 'skew'")
        _check_same(a, b, flavor)
        super().__init__(a.arity + b.arity - 1, a.weight + b.weight, a.shifted, NONE, f"({a.name} o {b.name})")
        self.a, self.b, self.flavor = a, b, flavor

    def _eval(self, xs):
        a, b = self.a, self.b
        q = b.arity
        degs = [a.sign_degree(x) for x in xs]
        odd = self.flavor == "skew"
        terms = []
        for u in iter_unshuffles((q, a.arity - 1)):
            perm = u.permutation
            inner = b(*(xs[i] for i in perm[:q]))
            if not parts(inner):
                continue
            s = odd_koszul_sign(perm, degs) if odd else koszul_sign(perm, degs)
            terms.append(scale(a(inner, *(xs[i] for i in perm[q:])), s))
        total = add_all(terms)
        if odd and (b.weight * (a.arity - 1)) % 2:
            total = scale(total, -1)
        return total


_products: dict = {}


def nr_product(a: MultiMap, b: MultiMap, flavor: str | None = None) -> MultiMap:
    """Memoized NR product (symmetric for shifted maps, skew otherwise)."""
    flavor = flavor or ("symmetric" if a.shifted else "skew")
    if isinstance(a, ZeroMap) or isinstance(b, ZeroMap):
        _check_same(a, b, flavor)
        return ZeroMap(a.arity + b.arity - 1, a.weight + b.weight, a.shifted)
    key = (id(a), id(b), flavor)
    hit = _products.get(key)
    if hit is None or hit[0] is not a or hit[1] is not b:
        hit = (a, b, NRProduct(a, b, flavor))
        _products[key] = hit
    return hit[2]


def graded_commutator(a: MultiMap, b: MultiMap) -> MultiMap:
    """[a, b] = a o b - (-1)^(|a||b|) b o a, degrees in the NR algebra."""
    if a.shifted != b.shifted:
        raise ValueError("commutator of maps in different conventions")
    s = -1 if (a.nr_degree * b.nr_degree) % 2 == 0 else 1
    return LinComb([(1, nr_product(a, b)), (s, nr_product(b, a))], name=f"[{a.name}, {b.name}]")


def associator(a: MultiMap, b: MultiMap, c: MultiMap) -> MultiMap:
    """(a o b) o c - a o (b o c)."""
    return LinComb([(1, nr_product(nr_product(a, b), c)), (-1, nr_product(a, nr_product(b, c)))], name=f"alpha({a.name},{b.name},{c.name})")


class ExplicitAssociator(MultiMap):
    """Double-insertion sum a(b(..), c(..), ...) over (m, n, l-2)-unshuffles.

    Shifted convention only; the sign is (-1)^(|c| (|x_1| + ... + |x_m|)) times
    the Koszul sign, where x_1..x_m are the entries fed to b.
    """

    def __init__(self, a: MultiMap, b: MultiMap, c: MultiMap):
        if not (a.shifted and b.shifted and c.shifted):
            raise ValueError("explicit associator is defined for shifted maps")
        super().__init__(a.arity + b.arity + c.arity - 2, a.weight + b.weight + c.weight, True, NONE, "alpha-explicit")
        self.a, self.b, self.c = a, b, c

    def _eval(self, xs):
        a, b, c = self.a, self.b, self.c
        if a.arity < 2:
            return 0
        m, n = b.arity, c.arity
        degs = [x.degree - 1 for x in xs]
        terms = []
        for u in iter_unshuffles((m, n, a.arity - 2)):
            perm = u.permutation
            bx = b(*(xs[i] for i in perm[:m]))
            if not parts(bx):
                continue
            cx = c(*(xs[i] for i in perm[m : m + n]))
            if not parts(cx):
                continue
            s = koszul_sign(perm, degs)
            if (c.weight * sum(degs[i] for i in perm[:m])) % 2:
                s = -s
            terms.append(scale(a(bx, cx, *(xs[i] for i in perm[m + n :])), s))
        return add_all(terms)


def pre_lie_defect(a: MultiMap, b: MultiMap, c: MultiMap) -> MultiMap:
    """alpha(a, b, c) - (-1)^(|b||c|) alpha(a, c, b); vanishes identically."""
    s = -1 if (b.nr_degree * c.nr_degree) % 2 else 1
    return LinComb([(1, associator(a, b, c)), (-s, associator(a, c, b))], name="pre-Lie defect")


_powers: dict = {}


def iterated_power(a: MultiMap, k: int) -> MultiMap:
    """a o a o ... o a (k factors), nested to the left."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return a
    key = (id(a), k)
    hit = _powers.get(key)
    if hit is None or hit[0] is not a:
        hit = (a, nr_product(iterated_power(a, k - 1), a))
        _powers[key] = hit
    return hit[1]


def right_nested_power(a: MultiMap, k: int) -> MultiMap:
    if k == 1:
        return a
    return nr_product(a, right_nested_power(a, k - 1))


class IdentityMap(MultiMap):
    def __init__(self, shifted: bool = True):
        super().__init__(1, 0, shifted, NONE, "id")

    def _eval(self, xs):
        return xs[0]


@dataclass
class LinftyStructure:
    """Brackets m_k of an L-infinity algebra, indexed by arity."""

    brackets: dict
    shifted: bool = True
    name: str = ""

    def __getitem__(self, k: int) -> MultiMap | None:
        return self.brackets.get(k)


@dataclass
class LinftyMorphism:
    """Components f_k of an L-infinity morphism, indexed by arity."""

    components: dict
    source: LinftyStructure | None = None
    target: LinftyStructure | None = None
    shifted: bool = True
    name: str = ""
    extra: dict = field(default_factory=dict)

    def __getitem__(self, k: int) -> MultiMap | None:
        return self.components.get(k)


# ---------------------------------------------------------------------------
# families


def family_combination(terms: Sequence[tuple], max_arity: int) -> dict:
    """Linear combination of families, as a family."""
    acc: dict = {}
    for c, fam in terms:
        for k, m in fam.items():
            if k <= max_arity and c and not isinstance(m, ZeroMap):
                acc.setdefault(k, []).append((c, m))
    return {k: LinComb(v) for k, v in acc.items()}


def family_product(A: dict, B: dict, max_arity: int) -> dict:
    acc: dict = {}
    for i, a in A.items():
        for j, b in B.items():
            k = i + j - 1
            if k <= max_arity:
                acc.setdefault(k, []).append((1, nr_product(a, b)))
    return {k: LinComb(v) for k, v in acc.items()}


def family_commutator(A: dict, B: dict, max_arity: int) -> dict:
    acc: dict = {}
    for i, a in A.items():
        for j, b in B.items():
            k = i + j - 1
            if k <= max_arity:
                s = -1 if (a.nr_degree * b.nr_degree) % 2 == 0 else 1
                acc.setdefault(k, []).extend([(1, nr_product(a, b)), (s, nr_product(b, a))])
    return {k: LinComb(v) for k, v in acc.items()}


# ---------------------------------------------------------------------------
# coalgebra side


def _hom_parts(x) -> list:
    return [e for _, e in parts(x)]


def coderivation_apply(family: dict, word: tuple) -> list:
    """C_m(x_1 ... x_n) = sum_i sum_{Ush(i, n-i)} eps m_i(x_sigma..) x_sigma..."""
    n = len(word)
    degs = [x.degree - 1 for x in word]
    out = []
    for i in range(1, n + 1):
        m = family.get(i)
        if m is None:
            continue
        for u in iter_unshuffles((i, n - i)):
            perm = u.permutation
            val = m(*(word[j] for j in perm[:i]))
            hs = _hom_parts(val)
            if not hs:
                continue
            s = koszul_sign(perm, degs)
            rest = tuple(word[j] for j in perm[i:])
            for h in hs:
                out.append((Fraction(s), (h,) + rest))
    return out


def apply_to_sum(family: dict, words: list) -> list:
    out = []
    for c, w in words:
        out.extend((c * c2, w2) for c2, w2 in coderivation_apply(family, w))
    return out


def project(family: dict, words: list):
    """pr(F(sum of words)) for the coalgebra map or coderivation with these components."""
    terms = []
    for c, w in words:
        m = family.get(len(w))
        if m is not None:
            terms.append(scale(m(*w), c))
    return add_all(terms)


def nilpotency_probe(family: dict, word: tuple):
    """pr(C_m C_m (word)) = (m o m)(word); zero for an L-infinity[1] structure."""
    return project(family, coderivation_apply(family, word))


def set_partitions(n: int) -> Iterator[list[tuple[int, ...]]]:
    """Set partitions of range(n), each block increasing, blocks ordered by minimum."""
    if n == 0:
        yield []
        return

    def rec(remaining: tuple[int, ...]):
        if not remaining:
            yield []
            return
        head, tail = remaining[0], remaining[1:]
        for r in range(len(tail) + 1):
            from itertools import combinations

            for extra in combinations(tail, r):
                chosen = set(extra)
                rest = tuple(i for i in tail if i not in chosen)
                for more in rec(rest):
                    yield [(head,) + extra] + more

    yield from rec(tuple(range(n)))


def _partition_terms(word: tuple, shifted: bool = True):
    degs = [x.degree - (1 if shifted else 0) for x in word]
    for blocks in set_partitions(len(word)):
        perm = [i for b in blocks for i in b]
        yield blocks, koszul_sign(perm, degs)


def lift_word(components: dict, word: tuple) -> list:
    """The coalgebra map with these weight-0 components applied to a word."""
    out = []
    for blocks, s in _partition_terms(word):
        vals = []
        for b in blocks:
            f = components.get(len(b))
            v = f(*(word[i] for i in b)) if f is not None else 0
            hs = _hom_parts(v)
            if not hs:
                break
            vals.append(hs)
        else:
            from itertools import product

            for combo in product(*vals):
                out.append((Fraction(s), tuple(combo)))
    return out


def verify_morphism(components: dict, source: dict, target: dict, word: tuple):
    """pr_W F(Q_V(word)) - pr_W Q_W(F(word)); zero iff the identity holds here."""
    lhs = project(components, coderivation_apply(source, word))
    rhs = project(target, lift_word(components, word))
    return add_all([lhs, scale(rhs, -1)])


class ComposedComponent(MultiMap):
    """Arity-m component of pr(G o F) for weight-0 shifted morphisms."""

    def __init__(self, g: dict, f: dict, m: int):
        super().__init__(m, 0, True, SYMMETRIC, f"(g o f)_{m}")
        self.g, self.f = g, f

    def _eval(self, xs):
        return project(self.g, lift_word(self.f, xs))


def compose_shifted(g: dict, f: dict, max_arity: int) -> dict:
    return {m: ComposedComponent(g, f, m) for m in range(1, max_arity + 1)}


# ---------------------------------------------------------------------------
# pushforward along exp(C_p)


def _check_gauge(p: dict) -> None:
    if 1 in p and not isinstance(p[1], ZeroMap):
        raise ValueError("p must vanish on arity 1")
    for m in p.values():
        if m.weight != 0 or not m.shifted:
            raise ValueError("p must be a shifted family of weight 0")


def pushforward_structure(m: dict, p: dict, max_arity: int) -> dict:
    """m' = m + [p, m] + 1/2! [p, [p, m]] + ... up to arity max_arity.

    Each commutator with p raises the arity by at least one, so the arity-n
    part receives nesting depths at most n - 1 and the sum is finite.
    """
    _check_gauge(p)
    terms = [(Fraction(1), {k: v for k, v in m.items() if k <= max_arity})]
    cur = terms[0][1]
    depth = 0
    while cur:
        depth += 1
        cur = family_commutator(p, cur, max_arity)
        if cur:
            terms.append((Fraction(1, factorial(depth)), cur))
    return family_combination(terms, max_arity)


def exp_morphism(p: dict, max_arity: int) -> dict:
    """Components of pr(exp(C_p)): id in arity 1, sum_n p^n / n! above."""
    _check_gauge(p)
    terms = [(Fraction(1), {1: IdentityMap(True)})]
    cur = {k: v for k, v in p.items() if k <= max_arity}
    n = 1
    while cur:
        terms.append((Fraction(1, factorial(n)), cur))
        n += 1
        cur = family_product(cur, p, max_arity)
    return family_combination(terms, max_arity)
