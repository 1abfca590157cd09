"""The observable algebra and the higher Courant algebra of a multisymplectic model.

Grading.  For an n-plectic form on R^m, the space V has, in degree 0, pairs
(X, alpha) with alpha an (n-1)-form and, in degree i < 0, forms of degree
n-1+i.  ``VinElement`` stores a vector field and an arbitrary (possibly
inhomogeneous) form, so formal sums f + e and forms of any degree (needed
for pairings against a gauge form B) are all representable.  A form of
degree p sits in degree p - (n-1).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cartan import (
    Form,
    Poly,
    VectorField,
    contract,
    exterior_d,
    lie_derivative,
    linear_primitive,
    vf_bracket,
)
from .combinatorics import bernoulli, sign_varsigma, vinogradov_coefficient
from .graded import SKEW, FunctionMap, MultiMap, NONE, add_all, decalage_map
from .linalg import rank, solve
from .sampling import SplitMix64, random_form, random_vector_field

__all__ = [
    "NotHamiltonian",
    "UnsupportedOmega",
    "ModelError",
    "VinElement",
    "MultisymplecticModel",
    "builtin_model",
    "rogers_bracket",
    "pairing",
    "courant_bracket",
    "ternary_bracket",
    "vinogradov_mu",
    "rogers_maps",
    "vinogradov_maps",
    "pairing_map",
    "bold_S",
    "rogers_structure",
    "vinogradov_structure",
]


class NotHamiltonian(ValueError):
    pass


class UnsupportedOmega(ValueError):
    pass


class ModelError(ValueError):
    pass


class VinElement:
    """f + (X, alpha): a vector field plus a form, graded by form degree."""

    __slots__ = ("n", "vf", "form", "_key")

    def __init__(self, n: int, vf: VectorField, form: Form):
        self.n = n
        self.vf = vf
        self.form = form
        self._key = None

    @classmethod
    def from_form(cls, n: int, form: Form) -> "VinElement":
        return cls(n, VectorField(form.m), form)

    @property
    def m(self) -> int:
        return self.form.m

    def key(self):
        if self._key is None:
            self._key = (self.vf.key(), self.form.key())
        return self._key

    def __bool__(self) -> bool:
        return bool(self.vf) or bool(self.form)

    def __eq__(self, other) -> bool:
        if isinstance(other, VinElement):
            return self.vf == other.vf and self.form == other.form
        if isinstance(other, int) and other == 0:
            return not self
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key())

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return VinElement(self.n, self.vf + other.vf, self.form + other.form)

    __radd__ = __add__

    def __neg__(self):
        return VinElement(self.n, -self.vf, -self.form)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return VinElement(self.n, self.vf.scale(c), self.form.scale(c))

    def parts(self):
        top = self.n - 1
        out = []
        degs = self.form.degrees()
        if self.vf or top in degs:
            out.append((0, VinElement(self.n, self.vf, self.form.part(top))))
        for p in sorted(degs):
            if p != top:
                out.append((p - top, VinElement(self.n, VectorField(self.m), self.form.part(p))))
        out.sort(key=lambda t: t[0])
        return out

    @property
    def degree(self) -> int:
        ps = self.parts()
        if len(ps) != 1:
            raise ValueError("element is zero or inhomogeneous")
        return ps[0][0]

    @property
    def alpha(self) -> Form:
        """The (n-1)-form part."""
        return self.form.part(self.n - 1)

    def __repr__(self) -> str:
        if self.vf:
            return f"VinElement({self.vf} ; {self.form})"
        return f"VinElement({self.form})"


def _zero_vf(m: int) -> VectorField:
    return VectorField(m)


class MultisymplecticModel:
    """A closed (n+1)-form on R^m with sample points for the nondegeneracy check."""

    def __init__(self, m: int, n: int, omega: Form, basepoints: Sequence[Sequence] = (), degenerate_allowed: bool = False, name: str = ""):
        if omega and omega.degrees() != {n + 1}:
            raise ModelError("omega must be a homogeneous form of degree n + 1")
        self.m = m
        self.n = n
        self.omega = omega
        self.basepoints = [tuple(Fraction(c) for c in p) for p in basepoints] or [tuple(Fraction(0) for _ in range(m))]
        self.degenerate_allowed = degenerate_allowed
        self.name = name or f"R{m}-n{n}"
        self.degree_cap = 2
        self._ham_system = None

    # validation -----------------------------------------------------------
    def validate(self) -> dict:
        """Closedness (hard error) and rank of v -> i_v omega at each basepoint."""
        if exterior_d(self.omega):
            raise ModelError("omega is not closed")
        warnings = []
        ranks = []
        for p in self.basepoints:
            om = self.omega.evaluate(p)
            r = rank(self._contraction_matrix(om)[1])
            ranks.append(r)
            if r < self.m:
                msg = f"omega is degenerate at {tuple(str(c) for c in p)} (rank {r} < {self.m})"
                if not self.degenerate_allowed:
                    raise ModelError(msg)
                warnings.append(msg)
        return {"closed": True, "ranks": ranks, "warnings": warnings, "nondegenerate": not warnings}

    def _contraction_matrix(self, om: Form):
        cols = [contract(VectorField.coordinate(self.m, i), om) for i in range(self.m)]
        words = sorted({w for c in cols for w in c.terms})
        rows = [[(c.terms[w].evaluate([0] * self.m) if w in c.terms else Fraction(0)) for c in cols] for w in words]
        return words, rows

    # Hamiltonian vector fields -------------------------------------------
    def hamiltonian_vf(self, alpha: Form) -> VectorField:
        """The v with d alpha = -i_v omega (constant-coefficient omega only)."""
        if not self.omega.has_constant_coefficients():
            raise UnsupportedOmega("Hamiltonian solve needs constant-coefficient omega")
        if self._ham_system is None:
            self._ham_system = self._contraction_matrix(self.omega)
        words, rows = self._ham_system
        da = exterior_d(alpha)
        if any(w not in words for w in da.terms):
            raise NotHamiltonian("d alpha has components outside the image of omega")
        monos = sorted({e for p in da.terms.values() for e in p.terms})
        comps: dict = {}
        for e in monos:
            rhs = [-(da.terms[w].terms.get(e, 0) if w in da.terms else 0) for w in words]
            x, _ = solve(rows, rhs)
            if x is None:
                raise NotHamiltonian("no Hamiltonian vector field")
            for i, c in enumerate(x):
                if c:
                    comps[i] = comps.get(i, Poly(self.m)) + Poly(self.m, {e: c})
        v = VectorField(self.m, comps)
        if exterior_d(alpha) + contract(v, self.omega):
            raise NotHamiltonian("no Hamiltonian vector field")
        return v

    def is_hamiltonian_pair(self, X: VectorField, alpha: Form) -> bool:
        return not (exterior_d(alpha) + contract(X, self.omega))

    def ham_pair(self, alpha: Form, X: VectorField | None = None) -> VinElement:
        if X is None:
            X = self.hamiltonian_vf(alpha)
        elif not self.is_hamiltonian_pair(X, alpha):
            raise NotHamiltonian("(X, alpha) is not a Hamiltonian pair")
        return VinElement(self.n, X, alpha)

    def form_element(self, form: Form) -> VinElement:
        return VinElement.from_form(self.n, form)

    def section(self, X: VectorField, alpha: Form) -> VinElement:
        return VinElement(self.n, X, alpha)

    def in_A(self, x: VinElement) -> bool:
        """x lies in the subspace with Hamiltonian degree-0 part."""
        for d, h in x.parts():
            if d == 0 and not self.is_hamiltonian_pair(h.vf, h.alpha):
                return False
            if d > 0:
                return False
        return True

    def twisted(self, B: Form, name: str = "") -> "MultisymplecticModel":
        out = MultisymplecticModel(self.m, self.n, self.omega + exterior_d(B), self.basepoints, self.degenerate_allowed, name or f"{self.name}+dB")
        out.degree_cap = self.degree_cap
        return out

    # sampling -------------------------------------------------------------
    def random_A(self, rng: SplitMix64, degree: int, cap: int | None = None) -> VinElement:
        """A random homogeneous element of the Hamiltonian subspace."""
        cap = self.degree_cap if cap is None else cap
        if degree == 0:
            # A sparse random alpha alone tends to give sparse, parallel fields,
            # which makes many identities vacuous; adding a primitive of
            # -i_c omega for a random constant field c keeps X generic.
            alpha = random_form(rng, self.m, self.n - 1, cap, 2)
            if self.omega.has_constant_coefficients():
                c = VectorField(self.m, {i: Poly.const(self.m, rng.randint(-3, 3)) for i in range(self.m)})
                alpha = alpha + linear_primitive(-contract(c, self.omega))
            return self.ham_pair(alpha)
        if degree < -(self.n - 1) or degree > 0:
            raise ValueError("degree out of range")
        return self.form_element(random_form(rng, self.m, self.n - 1 + degree, cap, 2))

    def random_V(self, rng: SplitMix64, degree: int, cap: int | None = None) -> VinElement:
        """A random homogeneous section (degree 0: arbitrary (X, alpha))."""
        cap = self.degree_cap if cap is None else cap
        if degree == 0:
            return VinElement(self.n, random_vector_field(rng, self.m, cap), random_form(rng, self.m, self.n - 1, cap))
        return self.random_A(rng, degree, cap)

    def random_tuple(self, rng: SplitMix64, k: int, pattern: str = "auto", space: str = "A", cap: int | None = None) -> tuple:
        """k homogeneous elements.

        pattern "top": all degree 0; "one": one lower entry at a random slot;
        "two": two lower entries; "auto": cycles through these by a coin.
        """
        gen = self.random_A if space == "A" else self.random_V
        if pattern == "auto":
            r = rng.randint(0, 9)
            pattern = "top" if r < 4 else ("one" if r < 8 else "two")
        degs = [0] * k
        lows = {"top": 0, "one": 1, "two": 2}[pattern]
        if self.n >= 2:
            slots = list(range(k))
            for _ in range(min(lows, k)):
                s = slots.pop(rng.randint(0, len(slots) - 1))
                degs[s] = -rng.randint(1, self.n - 1)
        return tuple(gen(rng, d, cap) for d in degs)

    def __repr__(self) -> str:
        return f"<model {self.name}>"


def builtin_model(name: str) -> MultisymplecticModel:
    """'R3' (volume form, n=2), 'R4' (n=3) or 'R5' (n=4)."""
    table = {"R3": 3, "R4": 4, "R5": 5}
    if name not in table:
        raise KeyError(f"unknown model {name!r}")
    m = table[name]
    omega = Form.basis(m, range(m))
    model = MultisymplecticModel(m, m - 1, omega, [tuple([0] * m), tuple(range(1, m + 1))], name=name)
    model.validate()
    return model


# ---------------------------------------------------------------------------
# brackets on homogeneous elements (unshifted)


def _forms_only(n: int, form: Form) -> VinElement:
    return VinElement.from_form(n, form)


def rogers_bracket(k: int, xs: Sequence[VinElement], model: MultisymplecticModel):
    """Rogers' k-ary bracket on the Hamiltonian subspace."""
    if len(xs) != k:
        raise ValueError("tuple length differs from k")
    n = model.n
    if k == 1:
        x = xs[0]
        if x.degree >= 0:
            return 0
        return _forms_only(n, exterior_d(x.form))
    if any(x.degree != 0 for x in xs):
        return 0
    beta = model.omega
    for x in xs:
        beta = contract(x.vf, beta)
        if not beta:
            break
    beta = beta.scale(sign_varsigma(k))
    if k == 2:
        return VinElement(n, vf_bracket(xs[0].vf, xs[1].vf), beta)
    return _forms_only(n, beta)


def pairing(sign: str, a: VinElement, b: VinElement):
    """<a, b>_{+/-} = 1/2 (i_{X_a} beta_b +/- i_{X_b} beta_a), beta = all form parts."""
    if sign not in "+-":
        raise ValueError("sign must be '+' or '-'")
    s = 1 if sign == "+" else -1
    f = contract(a.vf, b.form) + contract(b.vf, a.form).scale(s)
    return _forms_only(a.n, f.scale(Fraction(1, 2)))


def courant_bracket(e1: VinElement, e2: VinElement, twist: Form | None = None) -> VinElement:
    """([X1,X2], L_X1 a2 - L_X2 a1 - d<e1,e2>_- + i_X1 i_X2 twist)."""
    X1, X2 = e1.vf, e2.vf
    a1, a2 = e1.alpha, e2.alpha
    half = Fraction(1, 2)
    pm = (contract(X1, a2) - contract(X2, a1)).scale(half)
    form = lie_derivative(X1, a2) - lie_derivative(X2, a1) - exterior_d(pm)
    if twist is not None and twist:
        form = form + contract(X1, contract(X2, twist))
    return VinElement(e1.n, vf_bracket(X1, X2), form)


def _T(e1, e2, e3, twist):
    terms = []
    for a, b, c in ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2)):
        terms.append(pairing("+", courant_bracket(a, b, twist), c))
    return add_all(terms).scale(Fraction(1, 3)) if add_all(terms) else 0


def _mu3_f(f: VinElement, X1: VectorField, X2: VectorField) -> Form:
    """-1/6 (1/2 (i_X1 L_X2 - i_X2 L_X1) + i_[X1,X2]) f."""
    g = f.form
    inner = (contract(X1, lie_derivative(X2, g)) - contract(X2, lie_derivative(X1, g))).scale(Fraction(1, 2))
    inner = inner + contract(vf_bracket(X1, X2), g)
    return inner.scale(Fraction(-1, 6))


def ternary_bracket(beta: Form, X: VectorField, Y: VectorField, n: int) -> Form:
    """The untwisted ternary bracket [beta, X, Y]_3 for a form beta of any degree <= n-1.

    The (n-1)-form part is treated as the section (0, alpha), lower parts as
    negative-degree elements.
    """
    m = beta.m
    zero = VectorField(m)
    alpha = beta.part(n - 1)
    out = Form(m)
    if alpha:
        t = _T(VinElement(n, zero, alpha), VinElement(n, X, Form(m)), VinElement(n, Y, Form(m)), None)
        if t:
            out = out - t.form
    lower = beta - alpha
    if lower:
        out = out + _mu3_f(_forms_only(n, lower), X, Y)
    return out


def _odd_mu_with_form(k: int, beta: Form, Xs: Sequence[VectorField], n: int) -> Form:
    """mu_k(beta, X_1, ..., X_{k-1}) for odd k >= 3 (beta a form, X's pure fields)."""
    c = vinogradov_coefficient(k)
    m = beta.m
    out = Form(m)
    K = k - 1
    for i in range(K):
        for j in range(i + 1, K):
            t = ternary_bracket(beta, Xs[i], Xs[j], n)
            if not t:
                continue
            for l in range(K):
                if l != i and l != j:
                    t = contract(Xs[l], t)
                    if not t:
                        break
            if not t:
                continue
            # 1-based indices i+1, j+1: sign (-1)^(i+j+3)
            out = out + (t if (i + j + 3) % 2 == 0 else -t)
    return out.scale(c)


def vinogradov_mu(k: int, xs: Sequence[VinElement], model: MultisymplecticModel):
    """The k-ary bracket of the omega-twisted higher Courant L-infinity algebra."""
    if len(xs) != k:
        raise ValueError("tuple length differs from k")
    n = model.n
    omega = model.omega
    degs = [x.degree for x in xs]
    low = [i for i, d in enumerate(degs) if d != 0]
    if k == 1:
        x = xs[0]
        return 0 if degs[0] >= 0 else _forms_only(n, exterior_d(x.form))
    if k == 2:
        if not low:
            return courant_bracket(xs[0], xs[1], omega)
        if len(low) == 2:
            return 0
        e, f = (xs[0], xs[1]) if low == [1] else (xs[1], xs[0])
        val = lie_derivative(e.vf, f.form).scale(Fraction(1, 2))
        return _forms_only(n, val if low == [1] else -val)
    if k % 2 == 0 or len(low) >= 2:
        return 0
    if k == 3 and not low:
        t = _T(xs[0], xs[1], xs[2], omega)
        return 0 if not t else -t
    if low:
        j = low[0]
        Xs = [x.vf for i, x in enumerate(xs) if i != j]
        val = _odd_mu_with_form(k, xs[j].form, Xs, n)
        return _forms_only(n, val if j % 2 == 0 else -val)
    # all entries of degree 0
    out = Form(xs[0].m)
    for i in range(k):
        Xs = [x.vf for l, x in enumerate(xs) if l != i]
        t = _odd_mu_with_form(k, xs[i].alpha, Xs, n)
        out = out + (t if i % 2 == 0 else -t)
    coeff = (1 if ((k + 1) // 2) % 2 == 0 else -1) * k * bernoulli(k - 1)
    if coeff:
        w = omega
        for x in xs:
            w = contract(x.vf, w)
        out = out + w.scale(coeff)
    return _forms_only(n, out)


# ---------------------------------------------------------------------------
# maps


def rogers_maps(model: MultisymplecticModel, max_arity: int) -> dict:
    """Unshifted Rogers brackets l_k as skew maps of weight 2 - k."""
    out = {}
    for k in range(1, max_arity + 1):
        out[k] = FunctionMap(lambda *xs, k=k: rogers_bracket(k, xs, model), k, 2 - k, False, SKEW, f"l{k}")
    return out


def vinogradov_maps(model: MultisymplecticModel, max_arity: int) -> dict:
    out = {}
    for k in range(1, max_arity + 1):
        out[k] = FunctionMap(lambda *xs, k=k: vinogradov_mu(k, xs, model), k, 2 - k, False, SKEW, f"mu{k}")
    return out


def pairing_map(sign: str) -> MultiMap:
    """<,>_- (skew) or <,>_+ as an unshifted bilinear map of weight -1."""
    return FunctionMap(lambda a, b: pairing(sign, a, b), 2, -1, False, SKEW if sign == "-" else NONE, f"<,>{sign}")


_S_cache: dict = {}


def bold_S(model: MultisymplecticModel | None = None) -> MultiMap:
    """S = Dec(<,>_-): symmetric, weight 0, on the shifted space."""
    key = "S"
    if key not in _S_cache:
        _S_cache[key] = decalage_map(pairing_map("-"))
        _S_cache[key].name = "S"
    return _S_cache[key]


def rogers_structure(model: MultisymplecticModel, max_arity: int) -> dict:
    """Shifted Rogers brackets (the family pi_k)."""
    out = {}
    for k, m in rogers_maps(model, max_arity).items():
        out[k] = decalage_map(m)
        out[k].name = f"pi{k}"
    return out


def vinogradov_structure(model: MultisymplecticModel, max_arity: int) -> dict:
    """Shifted higher Courant brackets (the family mu_k)."""
    out = {}
    for k, m in vinogradov_maps(model, max_arity).items():
        out[k] = decalage_map(m)
        out[k].name = f"mu{k}"
    return out
