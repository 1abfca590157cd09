"""Exact polynomial Cartan calculus on R^m.

``Poly`` is a sparse polynomial with rational coefficients, ``Form`` a sparse
(possibly inhomogeneous) differential form and ``VectorField`` a polynomial
vector field.  All three are immutable once built.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "Poly",
    "Form",
    "VectorField",
    "wedge",
    "exterior_d",
    "contract",
    "lie_derivative",
    "lie_derivative_coordinates",
    "vf_bracket",
    "homotopy_primitive",
    "linear_primitive",
    "parse_poly",
    "parse_form",
    "parse_vector_field",
    "ParseError",
]


class ParseError(ValueError):
    pass


def _clean(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if v}


class Poly:
    """Sparse polynomial in m variables: exponent tuple -> Fraction."""

    __slots__ = ("m", "terms", "_key")

    def __init__(self, m: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.m = m
        self.terms = _clean(dict(terms)) if terms else {}
        self._key = None

    @classmethod
    def const(cls, m: int, c) -> "Poly":
        return cls(m, {(0,) * m: Fraction(c)})

    @classmethod
    def var(cls, m: int, i: int) -> "Poly":
        e = [0] * m
        e[i] = 1
        return cls(m, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, m: int, exps: tuple[int, ...], c=1) -> "Poly":
        return cls(m, {tuple(exps): Fraction(c)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key())

    def __add__(self, other: "Poly") -> "Poly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.m, out)

    def __neg__(self) -> "Poly":
        return Poly(self.m, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        if not c:
            return Poly(self.m)
        return Poly(self.m, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.m, out)

    __rmul__ = scale

    def diff(self, i: int) -> "Poly":
        out: dict = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                f = tuple(f)
                out[f] = out.get(f, 0) + c * e[i]
        return Poly(self.m, out)

    def evaluate(self, point: Iterable) -> Fraction:
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x**k
            total += term
        return total

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __str__(self) -> str:
        return _format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(e: tuple[int, ...]) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i}")
        elif k > 1:
            parts.append(f"x{i}^{k}")
    return " ".join(parts)


def _mono_order(e: tuple[int, ...]):
    return (sum(e), tuple(-k for k in e))


def _term_strings(c: Fraction, e: tuple[int, ...], tail: str) -> str:
    mono = _format_monomial(e)
    body = " ".join(p for p in (_format_coeff(abs(c)), mono, tail) if p)
    return body, c < 0


def _join_terms(items: list[tuple[str, bool]]) -> str:
    if not items:
        return "0"
    out = ""
    for i, (body, neg) in enumerate(items):
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def _format_poly(p: Poly) -> str:
    items = [_term_strings(c, e, "") for e, c in sorted(p.terms.items(), key=lambda t: _mono_order(t[0]))]
    return _join_terms(items)


def _merge_sign(i: tuple[int, ...], j: tuple[int, ...]) -> int:
    """Sign of sorting the concatenation i + j (both increasing, disjoint)."""
    inv = 0
    for b in j:
        for a in i:
            if a > b:
                inv += 1
    return -1 if inv % 2 else 1


class Form:
    """Sparse differential form: increasing index word -> Poly.

    Words of different lengths may coexist (inhomogeneous forms are formal
    sums of homogeneous ones).
    """

    __slots__ = ("m", "terms", "_key")

    def __init__(self, m: int, terms: Mapping[tuple[int, ...], Poly] | None = None):
        self.m = m
        self.terms = {k: v for k, v in terms.items() if v} if terms else {}
        self._key = None

    @classmethod
    def zero(cls, m: int) -> "Form":
        return cls(m)

    @classmethod
    def basis(cls, m: int, word: Iterable[int], coeff=1) -> "Form":
        """coeff * dx_{w0} ^ dx_{w1} ^ ..., reordered to increasing order."""
        word = tuple(word)
        if len(set(word)) != len(word):
            return cls(m)
        from .combinatorics import permutation_sign

        order = sorted(range(len(word)), key=lambda i: word[i])
        sign = permutation_sign(order)
        c = coeff if isinstance(coeff, Poly) else Poly.const(m, coeff)
        return cls(m, {tuple(sorted(word)): c.scale(sign)})

    @classmethod
    def function(cls, p: Poly) -> "Form":
        return cls(p.m, {(): p})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def key(self):
        if self._key is None:
            self._key = tuple(sorted((w, p.key()) for w, p in self.terms.items()))
        return self._key

    def __eq__(self, other) -> bool:
        if isinstance(other, Form):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key())

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("form is zero or inhomogeneous")
        return ds.pop()

    def part(self, k: int) -> "Form":
        return Form(self.m, {w: p for w, p in self.terms.items() if len(w) == k})

    def __add__(self, other: "Form") -> "Form":
        if isinstance(other, int) and other == 0:
            return self
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for w, p in other.terms.items():
            q = out.get(w)
            out[w] = p if q is None else q + p
        return Form(self.m, out)

    __radd__ = __add__

    def __neg__(self) -> "Form":
        return Form(self.m, {w: -p for w, p in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        """Multiply by a rational number or a Poly."""
        if isinstance(c, Poly):
            return Form(self.m, {w: p * c for w, p in self.terms.items()})
        if not c:
            return Form(self.m)
        if c == 1:
            return self
        return Form(self.m, {w: p.scale(c) for w, p in self.terms.items()})

    def __mul__(self, c) -> "Form":
        return self.scale(c)

    __rmul__ = __mul__

    def evaluate(self, point) -> "Form":
        """Coefficients frozen at a point (constant-coefficient form)."""
        return Form(self.m, {w: Poly.const(self.m, p.evaluate(point)) for w, p in self.terms.items()})

    def has_constant_coefficients(self) -> bool:
        return all(p.is_constant() for p in self.terms.values())

    def __str__(self) -> str:
        return format_form(self)

    def __repr__(self) -> str:
        return f"Form({self})"


class VectorField:
    """Sparse polynomial vector field: coordinate index -> Poly."""

    __slots__ = ("m", "comps", "_key")

    def __init__(self, m: int, comps: Mapping[int, Poly] | None = None):
        self.m = m
        self.comps = {i: p for i, p in comps.items() if p} if comps else {}
        self._key = None

    @classmethod
    def zero(cls, m: int) -> "VectorField":
        return cls(m)

    @classmethod
    def coordinate(cls, m: int, i: int, coeff=1) -> "VectorField":
        c = coeff if isinstance(coeff, Poly) else Poly.const(m, coeff)
        return cls(m, {i: c})

    def __bool__(self) -> bool:
        return bool(self.comps)

    def key(self):
        if self._key is None:
            self._key = tuple(sorted((i, p.key()) for i, p in self.comps.items()))
        return self._key

    def __eq__(self, other) -> bool:
        if isinstance(other, VectorField):
            return self.comps == other.comps
        if other == 0:
            return not self.comps
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key())

    def __add__(self, other: "VectorField") -> "VectorField":
        if not other.comps:
            return self
        if not self.comps:
            return other
        out = dict(self.comps)
        for i, p in other.comps.items():
            q = out.get(i)
            out[i] = p if q is None else q + p
        return VectorField(self.m, out)

    def __neg__(self) -> "VectorField":
        return VectorField(self.m, {i: -p for i, p in self.comps.items()})

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, c) -> "VectorField":
        if isinstance(c, Poly):
            return VectorField(self.m, {i: p * c for i, p in self.comps.items()})
        if not c:
            return VectorField(self.m)
        if c == 1:
            return self
        return VectorField(self.m, {i: p.scale(c) for i, p in self.comps.items()})

    def __mul__(self, c) -> "VectorField":
        return self.scale(c)

    __rmul__ = __mul__

    def apply(self, f: Poly) -> Poly:
        """X(f) = sum_i X^i d_i f."""
        out = Poly(self.m)
        for i, p in self.comps.items():
            df = f.diff(i)
            if df:
                out = out + p * df
        return out

    def __str__(self) -> str:
        return format_vector_field(self)

    def __repr__(self) -> str:
        return f"VectorField({self})"


def wedge(a: Form, b: Form) -> Form:
    if a.m != b.m:
        raise ValueError("forms live on different spaces")
    out: dict = {}
    for wa, pa in a.terms.items():
        for wb, pb in b.terms.items():
            if set(wa) & set(wb):
                continue
            w = tuple(sorted(wa + wb))
            c = pa * pb
            if _merge_sign(wa, wb) < 0:
                c = -c
            q = out.get(w)
            out[w] = c if q is None else q + c
    return Form(a.m, out)


def exterior_d(a: Form) -> Form:
    out: dict = {}
    for w, p in a.terms.items():
        for j in range(a.m):
            if j in w:
                continue
            dp = p.diff(j)
            if not dp:
                continue
            pos = sum(1 for i in w if i < j)
            if pos % 2:
                dp = -dp
            nw = tuple(sorted(w + (j,)))
            q = out.get(nw)
            out[nw] = dp if q is None else q + dp
    return Form(a.m, out)


def contract(X: VectorField, a: Form) -> Form:
    """Interior product i_X a (degree -1 graded derivation)."""
    out: dict = {}
    for w, p in a.terms.items():
        for pos, j in enumerate(w):
            xj = X.comps.get(j)
            if xj is None:
                continue
            c = xj * p
            if pos % 2:
                c = -c
            nw = w[:pos] + w[pos + 1 :]
            q = out.get(nw)
            out[nw] = c if q is None else q + c
    return Form(a.m, out)


def lie_derivative(X: VectorField, a: Form) -> Form:
    """L_X = d i_X + i_X d."""
    return exterior_d(contract(X, a)) + contract(X, exterior_d(a))


def lie_derivative_coordinates(X: VectorField, a: Form) -> Form:
    """L_X from the coordinate rule, independent of d and i_X.

    L_X (f dx_I) = X(f) dx_I + f sum_r dx_{i_1} ^ .. ^ d(X^{i_r}) ^ .. ^ dx_{i_k}.
    """
    m = a.m
    out = Form(m)
    for w, p in a.terms.items():
        out = out + Form(m, {w: X.apply(p)})
        for r, i in enumerate(w):
            xi = X.comps.get(i)
            if xi is None:
                continue
            for j in range(m):
                dj = xi.diff(j)
                if dj:
                    out = out + Form.basis(m, w[:r] + (j,) + w[r + 1:], dj * p)
    return out


def vf_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^k = X(Y^k) - Y(X^k)."""
    out: dict = {}
    for k in set(X.comps) | set(Y.comps):
        c = Poly(X.m)
        if k in Y.comps:
            c = c + X.apply(Y.comps[k])
        if k in X.comps:
            c = c - Y.apply(X.comps[k])
        out[k] = c
    return VectorField(X.m, out)


def homotopy_primitive(a: Form) -> Form:
    """Poincare-lemma homotopy h with d h + h d = id on forms of degree >= 1.

    For a closed polynomial form b of positive degree, d(h b) = b.
    """
    m = a.m
    out = Form(m)
    for w, p in a.terms.items():
        k = len(w)
        if k == 0:
            continue
        for e, c in p.terms.items():
            weight = Fraction(1, k + sum(e))
            mono = Poly(m, {e: c * weight})
            # i_E dx_w with E the Euler field
            for pos, j in enumerate(w):
                coeff = mono * Poly.var(m, j)
                if pos % 2:
                    coeff = -coeff
                out = out + Form(m, {w[:pos] + w[pos + 1 :]: coeff})
    return out


def linear_primitive(a: Form) -> Form:
    """A primitive of a constant-coefficient form with linear coefficients.

    Each term t dx_{w0}^...^dx_{wk} becomes t x_{w0} dx_{w1}^...^dx_{wk}, so
    integer coefficients stay integer.
    """
    out = Form(a.m)
    for w, p in a.terms.items():
        if not w:
            continue
        if not p.is_constant():
            raise ValueError("linear_primitive needs constant coefficients")
        out = out + Form(a.m, {w[1:]: p * Poly.var(a.m, w[0])})
    return out


# ---------------------------------------------------------------------------
# text syntax
#
#   form:          1 dx0^dx1^dx2 + x2 dx0^dx1 - 3/2 x0^2 x1 dx2
#   vector field:  x1 d/dx0 - 2 d/dx2
#   polynomial:    x0 x1 - 1/3 x2^2
#
# A term is an optional rational coefficient, optional variables with powers,
# and (for forms / vector fields) one basis symbol.

_TOKEN = re.compile(r"\s*([+-])?\s*([^\s+-][^+-]*?)\s*(?=[+-]|$)")


def _split_terms(text: str) -> list[tuple[int, list[str]]]:
    text = text.strip()
    if not text:
        raise ParseError("empty expression")
    if text == "0":
        return []
    out = []
    pos = 0
    first = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse near {text[pos:]!r}")
        sign_s, body = m.group(1), m.group(2)
        if sign_s is None and not first:
            raise ParseError(f"missing operator near {body!r}")
        first = False
        out.append((-1 if sign_s == "-" else 1, body.split()))
        pos = m.end()
    return out


_VAR = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_NUM = re.compile(r"^\d+(?:/\d+)?$")
_DX = re.compile(r"^dx\d+(?:\^dx\d+)*$")
_DDX = re.compile(r"^d/dx(\d+)$")


def _parse_coeff(tokens: list[str], m: int) -> Poly:
    c = Fraction(1)
    exps = [0] * m
    for t in tokens:
        if _NUM.match(t):
            c *= Fraction(t)
            continue
        v = _VAR.match(t)
        if not v:
            raise ParseError(f"bad token {t!r}")
        i = int(v.group(1))
        if i >= m:
            raise ParseError(f"variable x{i} out of range for dimension {m}")
        exps[i] += int(v.group(2) or 1)
    return Poly(m, {tuple(exps): c})


def parse_poly(text: str, m: int) -> Poly:
    out = Poly(m)
    for sign, toks in _split_terms(text):
        out = out + _parse_coeff(toks, m).scale(sign)
    return out


def parse_form(text: str, m: int) -> Form:
    out = Form(m)
    for sign, toks in _split_terms(text):
        word: tuple[int, ...] = ()
        if toks and _DX.match(toks[-1]):
            word = tuple(int(s[2:]) for s in toks[-1].split("^"))
            toks = toks[:-1]
        if any(i >= m for i in word):
            raise ParseError(f"index out of range in {text!r}")
        coeff = _parse_coeff(toks, m).scale(sign)
        out = out + Form.basis(m, word, coeff)
    return out


def parse_vector_field(text: str, m: int) -> VectorField:
    out = VectorField(m)
    for sign, toks in _split_terms(text):
        if not toks or not _DDX.match(toks[-1]):
            raise ParseError(f"vector field term needs d/dxI: {' '.join(toks)!r}")
        i = int(_DDX.match(toks[-1]).group(1))
        if i >= m:
            raise ParseError(f"index out of range in {text!r}")
        out = out + VectorField(m, {i: _parse_coeff(toks[:-1], m).scale(sign)})
    return out


def _form_sort_key(w: tuple[int, ...]):
    return (-len(w), w)


def format_form(a: Form) -> str:
    items = []
    for w in sorted(a.terms, key=_form_sort_key):
        tail = "^".join(f"dx{i}" for i in w)
        for e, c in sorted(a.terms[w].terms.items(), key=lambda t: _mono_order(t[0])):
            items.append(_term_strings(c, e, tail))
    return _join_terms(items)


def format_vector_field(X: VectorField) -> str:
    items = []
    for i in sorted(X.comps):
        for e, c in sorted(X.comps[i].terms.items(), key=lambda t: _mono_order(t[0])):
            items.append(_term_strings(c, e, f"d/dx{i}"))
    return _join_terms(items)
