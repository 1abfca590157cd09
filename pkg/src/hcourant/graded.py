"""Graded elements, graded multilinear maps, decalage and block operators.

Carrier protocol.  A carrier element ``x`` supports ``x + y``, ``0 + x``,
``x.scale(c)``, ``-x``, ``bool(x)`` (false for zero), ``x.parts()`` returning
a list of ``(degree, homogeneous element)`` pairs, ``x.degree`` for a
homogeneous element, and ``x.key()`` (hashable, content based).  The integer
``0`` is accepted everywhere as the universal zero.

Degrees stored on elements are always the unshifted ones.  A map declared
``shifted=True`` lives on V[1]: it reads the degree of an element of V-degree
``d`` as ``d - 1`` when computing signs.
"""
from __future__ import annotations

import contextvars
import itertools
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .combinatorics import iter_unshuffles, koszul_sign, odd_koszul_sign

__all__ = [
    "SYMMETRIC",
    "SKEW",
    "NONE",
    "parts",
    "is_zero",
    "add_all",
    "scale",
    "elements_equal",
    "MultiMap",
    "FunctionMap",
    "LinComb",
    "Decalage",
    "InverseDecalage",
    "ZeroMap",
    "decalage_sign",
    "decalage_element",
    "decalage_map",
    "inverse_decalage_map",
    "apply_block_operator",
    "evaluation_cache",
    "check_symmetry",
    "GradedSpace",
    "Vector",
    "BasisMap",
    "random_basis_map",
]

SYMMETRIC, SKEW, NONE = "symmetric", "skew", "none"


def parts(x) -> list:
    if isinstance(x, int):
        if x:
            raise TypeError("only the integer 0 is a carrier element")
        return []
    return x.parts()


def is_zero(x) -> bool:
    return (isinstance(x, int) and x == 0) or not x


def add_all(items: Iterable):
    total = 0
    for it in items:
        if is_zero(it):
            continue
        total = it if is_zero(total) else total + it
    return total


def scale(x, c):
    if is_zero(x) or not c:
        return 0
    return x if c == 1 else x.scale(c)


def elements_equal(a, b) -> bool:
    return is_zero(add_all([a, scale(b, -1)]))


# ---------------------------------------------------------------------------
# evaluation cache (scoped, content keyed)

_cache_var: contextvars.ContextVar = contextvars.ContextVar("hc_eval_cache", default=None)


@contextmanager
def evaluation_cache():
    """Memoize map evaluations inside the block (keys are element contents)."""
    token = _cache_var.set({})
    try:
        yield
    finally:
        _cache_var.reset(token)


class MultiMap:
    """A graded k-multilinear map of fixed weight.

    Subclasses implement ``_eval`` on a tuple of homogeneous elements; the
    public ``__call__`` distributes over homogeneous parts.
    """

    def __init__(self, arity: int, weight: int, shifted: bool, symmetry: str = NONE, name: str = ""):
        if arity < 1:
            raise ValueError("arity must be positive")
        self.arity = arity
        self.weight = weight
        self.shifted = shifted
        self.symmetry = symmetry
        self.name = name or type(self).__name__

    def __repr__(self) -> str:
        tag = "shifted" if self.shifted else "unshifted"
        return f"<{self.name} arity={self.arity} weight={self.weight} {tag}>"

    @property
    def nr_degree(self) -> int:
        """Degree in the Nijenhuis-Richardson algebra of the convention."""
        return self.weight if self.shifted else self.weight + self.arity - 1

    def sign_degree(self, x) -> int:
        return x.degree - 1 if self.shifted else x.degree

    def __call__(self, *xs):
        if len(xs) != self.arity:
            raise ValueError(f"{self.name} expects {self.arity} arguments, got {len(xs)}")
        split = [parts(x) for x in xs]
        if any(not p for p in split):
            return 0
        if all(len(p) == 1 for p in split):
            return self._cached(tuple(p[0][1] for p in split))
        return add_all(self._cached(tuple(e for _, e in combo)) for combo in itertools.product(*split))

    def _cached(self, xs: tuple):
        cache = _cache_var.get()
        if cache is None:
            return self._eval(xs)
        key = (self, tuple(x.key() for x in xs))
        hit = cache.get(key)
        if hit is None:
            hit = self._eval(xs)
            cache[key] = hit
        return hit

    def _eval(self, xs: tuple):
        raise NotImplementedError

    # algebra of maps -------------------------------------------------------
    def __add__(self, other: "MultiMap") -> "LinComb":
        return LinComb([(1, self), (1, other)])

    def __sub__(self, other: "MultiMap") -> "LinComb":
        return LinComb([(1, self), (-1, other)])

    def __neg__(self) -> "LinComb":
        return LinComb([(-1, self)])

    def __rmul__(self, c) -> "LinComb":
        return LinComb([(Fraction(c), self)])


class FunctionMap(MultiMap):
    """A map given by a Python function on homogeneous tuples."""

    def __init__(self, fn: Callable, arity: int, weight: int, shifted: bool, symmetry: str = NONE, name: str = ""):
        super().__init__(arity, weight, shifted, symmetry, name or getattr(fn, "__name__", "fn"))
        self.fn = fn

    def _eval(self, xs):
        return self.fn(*xs)


class ZeroMap(MultiMap):
    def __init__(self, arity: int, weight: int, shifted: bool):
        super().__init__(arity, weight, shifted, SYMMETRIC if shifted else SKEW, "zero")

    def _eval(self, xs):
        return 0


class LinComb(MultiMap):
    """Rational linear combination of maps sharing arity, weight and convention."""

    def __init__(self, terms: Sequence[tuple], name: str = ""):
        terms_in = list(terms)
        terms = [(Fraction(c), m) for c, m in terms_in if c]
        flat: list = []
        for c, m in terms:
            if isinstance(m, LinComb):
                flat.extend((c * c2, m2) for c2, m2 in m.terms)
            else:
                flat.append((c, m))
        if not flat:
            # every coefficient vanished; keep the shape of the inputs
            shapes = [m for _, m in terms_in] if terms_in else []
            if not shapes:
                raise ValueError("empty linear combination; use ZeroMap")
            m0 = shapes[0]
            flat = [(Fraction(0), ZeroMap(m0.arity, m0.weight, m0.shifted))]
        first = flat[0][1]
        for _, m in flat:
            if m.arity != first.arity or m.shifted != first.shifted:
                raise ValueError("linear combination of incompatible maps")
            if m.weight != first.weight and not isinstance(m, ZeroMap):
                raise ValueError("linear combination of maps of different weight")
        syms = {m.symmetry for _, m in flat}
        sym = syms.pop() if len(syms) == 1 else NONE
        super().__init__(first.arity, first.weight, first.shifted, sym, name or "lincomb")
        self.terms = flat

    def _eval(self, xs):
        return add_all(scale(m(*xs), c) for c, m in self.terms)


# ---------------------------------------------------------------------------
# decalage


def decalage_sign(degrees: Sequence[int]) -> int:
    """(-1)^((n-1)|u_1| + (n-2)|u_2| + ... + |u_{n-1}|) for unshifted degrees."""
    n = len(degrees)
    e = sum((n - 1 - i) * d for i, d in enumerate(degrees))
    return -1 if e % 2 else 1


def decalage_element(xs: Sequence, n: int | None = None):
    """Return (shifted degrees, sign) of the decalage of u_1...u_n.

    The payloads are unchanged; each degree d becomes d - 1 in V[1].
    """
    n = len(xs) if n is None else n
    if n != len(xs):
        raise ValueError("arity does not match the tuple")
    degs = [x.degree for x in xs]
    return [d - 1 for d in degs], decalage_sign(degs)


class Decalage(MultiMap):
    """Dec(m): the graded symmetric map on V[1] determined by a skew map on V."""

    def __init__(self, base: MultiMap, name: str = ""):
        if base.shifted or base.symmetry == SYMMETRIC:
            raise ValueError("decalage needs an unshifted, non-symmetric map")
        sym = SYMMETRIC if base.symmetry == SKEW else NONE
        super().__init__(base.arity, base.weight + base.arity - 1, True, sym, name or f"Dec({base.name})")
        self.base = base

    def _eval(self, xs):
        s = decalage_sign([x.degree for x in xs])
        return scale(self.base(*xs), s)


class InverseDecalage(MultiMap):
    def __init__(self, base: MultiMap, name: str = ""):
        if not base.shifted or base.symmetry == SKEW:
            raise ValueError("inverse decalage needs a shifted, non-skew map")
        sym = SKEW if base.symmetry == SYMMETRIC else NONE
        super().__init__(base.arity, base.weight - base.arity + 1, False, sym, name or f"Dec^-1({base.name})")
        self.base = base

    def _eval(self, xs):
        s = decalage_sign([x.degree for x in xs])
        return scale(self.base(*xs), s)


def decalage_map(m: MultiMap) -> MultiMap:
    if isinstance(m, InverseDecalage):
        return m.base
    return Decalage(m)


def inverse_decalage_map(m: MultiMap) -> MultiMap:
    if isinstance(m, Decalage):
        return m.base
    return InverseDecalage(m)


# ---------------------------------------------------------------------------
# block operators B, P, P<


def apply_block_operator(kind: str, shape: Sequence[int], xs: Sequence, degrees: Sequence[int] | None = None):
    """Signed sum over unshuffles of the given block shape.

    ``kind`` is "B" (Koszul sign), "P" (odd Koszul sign) or "P<" (odd sign,
    keeping only unshuffles whose equal-size consecutive blocks have
    increasing first entries).  ``degrees`` default to the elements' own
    degrees.  Returns a list of ``(sign, reordered tuple)``.
    """
    shape = tuple(shape)
    if sum(shape) != len(xs):
        raise ValueError("shape does not match tuple length")
    if kind == "P<" and any(shape[i] > shape[i + 1] for i in range(len(shape) - 1)):
        raise ValueError("P< needs weakly increasing block sizes")
    degs = list(degrees) if degrees is not None else [x.degree for x in xs]
    out = []
    for u in iter_unshuffles(shape):
        perm = u.permutation
        if kind == "P<":
            starts, pos, ok = [], 0, True
            for s in shape:
                starts.append(pos)
                pos += s
            for j in range(1, len(shape)):
                if shape[j - 1] == shape[j] and perm[starts[j - 1]] > perm[starts[j]]:
                    ok = False
                    break
            if not ok:
                continue
        if kind == "B":
            sign = koszul_sign(perm, degs)
        elif kind in ("P", "P<"):
            sign = odd_koszul_sign(perm, degs)
        else:
            raise ValueError(f"unknown block operator {kind!r}")
        out.append((sign, tuple(xs[i] for i in perm)))
    return out


def check_symmetry(m: MultiMap, tuples: Iterable[Sequence]) -> bool:
    """Probe the declared symmetry with every adjacent transposition."""
    if m.symmetry == NONE:
        return True
    for xs in tuples:
        base = m(*xs)
        for i in range(len(xs) - 1):
            a, b = xs[i], xs[i + 1]
            sw = list(xs)
            sw[i], sw[i + 1] = b, a
            s = 1 if (m.sign_degree(a) * m.sign_degree(b)) % 2 == 0 else -1
            if m.symmetry == SKEW:
                s = -s
            if not elements_equal(m(*sw), scale(base, s)):
                return False
    return True


# ---------------------------------------------------------------------------
# finite graded test space


class GradedSpace:
    """A finite-dimensional graded space with a fixed basis of given degrees."""

    def __init__(self, degrees: Sequence[int], name: str = "V"):
        self.degrees = tuple(degrees)
        self.name = name

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def basis(self, i: int) -> "Vector":
        return Vector(self, {i: Fraction(1)})

    def vector(self, coeffs: dict) -> "Vector":
        return Vector(self, coeffs)


class Vector:
    __slots__ = ("space", "coeffs", "_key")

    def __init__(self, space: GradedSpace, coeffs: dict):
        self.space = space
        self.coeffs = {i: Fraction(c) for i, c in coeffs.items() if c}
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (id(self.space), tuple(sorted(self.coeffs.items())))
        return self._key

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Vector):
            return self.space is other.space and self.coeffs == other.coeffs
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key())

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return Vector(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return Vector(self.space, {i: v * c for i, v in self.coeffs.items()})

    def parts(self):
        by: dict = {}
        for i, c in self.coeffs.items():
            by.setdefault(self.space.degrees[i], {})[i] = c
        return [(d, Vector(self.space, cs)) for d, cs in sorted(by.items())]

    @property
    def degree(self) -> int:
        ds = {self.space.degrees[i] for i in self.coeffs}
        if len(ds) != 1:
            raise ValueError("vector is zero or inhomogeneous")
        return ds.pop()

    def __repr__(self) -> str:
        return f"{self.space.name}{dict(sorted(self.coeffs.items()))}"


class BasisMap(MultiMap):
    """A multilinear map between graded spaces given on basis tuples.

    ``table`` maps sorted basis index tuples to output vectors; other
    orderings are recovered from the declared symmetry.  With symmetry NONE
    the table is indexed by ordered tuples.
    """

    def __init__(self, source: GradedSpace, target, arity: int, weight: int, shifted: bool, symmetry: str, table: dict, name: str = ""):
        super().__init__(arity, weight, shifted, symmetry, name or "basis-map")
        self.source = source
        self.target = target
        self.table = table

    def _basis_value(self, idx: tuple[int, ...]):
        if self.symmetry == NONE:
            return self.table.get(idx, 0)
        order = sorted(range(len(idx)), key=lambda i: idx[i])
        srt = tuple(idx[i] for i in order)
        val = self.table.get(srt, 0)
        if is_zero(val):
            return 0
        degs = [self.source.degrees[i] - (1 if self.shifted else 0) for i in idx]
        s = koszul_sign(order, degs) if self.symmetry == SYMMETRIC else odd_koszul_sign(order, degs)
        return scale(val, s)

    def _eval(self, xs):
        acc = []
        for combo in itertools.product(*[sorted(x.coeffs.items()) for x in xs]):
            c = Fraction(1)
            for _, v in combo:
                c *= v
            acc.append(scale(self._basis_value(tuple(i for i, _ in combo)), c))
        return add_all(acc)


def random_basis_map(space: GradedSpace, arity: int, weight: int, shifted: bool, symmetry: str, rng, density: float = 0.7, coeff_range: int = 3, name: str = "") -> BasisMap:
    """A random map V^{x arity} -> V of the given weight and symmetry.

    ``rng`` needs ``randint(lo, hi)``.  Entries that the symmetry forces to
    vanish (repeated odd elements for symmetric maps, repeated even ones for
    skew maps, in the map's degree convention) are left out.
    """
    off = 1 if shifted else 0
    table: dict = {}
    if symmetry == NONE:
        keys = itertools.product(range(space.dim), repeat=arity)
    else:
        keys = itertools.combinations_with_replacement(range(space.dim), arity)
    for idx in keys:
        if symmetry != NONE:
            bad = False
            for i in set(idx):
                if idx.count(i) > 1:
                    d = space.degrees[i] - off
                    if (symmetry == SYMMETRIC and d % 2) or (symmetry == SKEW and d % 2 == 0):
                        bad = True
            if bad:
                continue
        out_deg = weight + sum(space.degrees[i] - off for i in idx) + off
        coeffs = {}
        for j, dj in enumerate(space.degrees):
            if dj == out_deg and rng.randint(0, 999) < density * 1000:
                coeffs[j] = rng.randint(-coeff_range, coeff_range)
        v = Vector(space, coeffs)
        if v:
            table[idx] = v
    return BasisMap(space, space, arity, weight, shifted, symmetry, table, name)
