"""The embedding of observables into the higher Courant algebra, gauge
transformations, homotopy comoment maps and the pentagon check.

Unshifted maps (skew, weight 1 - k for morphism components) are the primary
objects here; their shifted versions come from ``decalage_map``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from .cartan import Form, VectorField, contract, exterior_d, homotopy_primitive, lie_derivative
from .combinatorics import bernoulli, compositions, permutation_sign, phi_coefficient, sign_varsigma
from .graded import (
    NONE,
    SKEW,
    FunctionMap,
    GradedSpace,
    MultiMap,
    Vector,
    add_all,
    apply_block_operator,
    decalage_map,
    elements_equal,
    evaluation_cache,
    is_zero,
    parts,
    scale,
)
from .nr import IdentityMap, LinftyMorphism, compose_shifted, iterated_power, verify_morphism
from .structures import (
    ModelError,
    MultisymplecticModel,
    VinElement,
    pairing,
    pairing_map,
    rogers_structure,
)

__all__ = [
    "embedding_component",
    "embedding_maps",
    "embedding_via_pairing",
    "embedding_morphism",
    "iterated_pairing_eval",
    "evaluated_pairing_power",
    "insertion_map",
    "GaugeData",
    "gauge_tau",
    "LieAlgebra",
    "ComomentMap",
    "complete_comoment",
    "twist_comoment",
    "compose",
    "UnshiftedComposite",
    "pentagon_check",
    "binomial_bernoulli_sum",
    "rhsbm_check",
    "desk_comoment",
    "translation_comoment",
]


# ---------------------------------------------------------------------------
# the embedding psi


def _contract_all(Xs: Sequence[VectorField], beta: Form) -> Form:
    """i_{X_1} ... i_{X_r} beta (X_r is inserted first)."""
    for X in reversed(Xs):
        if not beta:
            break
        beta = contract(X, beta)
    return beta


def embedding_component(k: int, xs: Sequence[VinElement], n: int):
    """psi_k on homogeneous observables.

    psi_1 is the inclusion; for k >= 2
    psi_k = B_{k-1} sum_j (-1)^(k-j) i_{v_1} .. (omit v_j) .. i_{v_k} (f_j + alpha_j).
    """
    if len(xs) != k:
        raise ValueError("tuple length differs from k")
    if k == 1:
        return xs[0]
    b = bernoulli(k - 1)
    if not b:
        return 0
    total = Form(xs[0].m)
    for j in range(k):
        others = [x.vf for i, x in enumerate(xs) if i != j]
        term = _contract_all(others, xs[j].form)
        if term:
            total = total + term.scale((-1) ** (k - 1 - j))
    if not total:
        return 0
    return VinElement.from_form(n, total.scale(b))


def embedding_maps(n: int, max_arity: int) -> dict:
    """psi_k for k <= max_arity as unshifted skew maps of weight 1 - k."""
    out: dict = {1: IdentityMap(False)}
    for k in range(2, max_arity + 1):
        out[k] = FunctionMap(lambda *xs, k=k: embedding_component(k, xs, n), k, 1 - k, False, SKEW, f"psi{k}")
    return out


def embedding_via_pairing(max_arity: int) -> dict:
    """The same components written as phi_k times powers of <,>_-."""
    pm = pairing_map("-")
    out: dict = {1: IdentityMap(False)}
    for k in range(2, max_arity + 1):
        c = phi_coefficient(k)
        out[k] = c * iterated_power(pm, k - 1)
    return out


def embedding_morphism(n: int, max_arity: int) -> dict:
    """Shifted components Dec(psi_k)."""
    out = {}
    for k, m in embedding_maps(n, max_arity).items():
        out[k] = IdentityMap(True) if k == 1 else decalage_map(m)
    return out


def iterated_pairing_eval(m: int, B: Form, Xs: Sequence[VectorField]) -> Form:
    """Closed form of (<,>_-)^m on (B, X_1, .., X_m): -s(m) m!/2^m i_{X_m}..i_{X_1} B."""
    if len(Xs) != m:
        raise ValueError("need m vector fields")
    v = B
    for X in Xs:
        v = contract(X, v)
    return v.scale(-sign_varsigma(m) * Fraction(factorial(m), 2 ** m))


def evaluated_pairing_power(m: int, vs: Sequence[VinElement]) -> Form:
    """(<,>_-)^m on v_1..v_{m+1} with v_i = X_i + beta_i, in closed form.

    m!/2^m sum_j (-1)^(j+m+1) i_{X_1} .. (omit X_j) .. i_{X_{m+1}} beta_j,
    with j counted from 1.
    """
    if len(vs) != m + 1:
        raise ValueError("need m + 1 entries")
    total = Form(vs[0].m)
    for j in range(m + 1):
        others = [v.vf for i, v in enumerate(vs) if i != j]
        total = total + _contract_all(others, vs[j].form).scale((-1) ** (j + m))
    return total.scale(Fraction(factorial(m), 2 ** m))


def insertion_map(B: Form, n: int) -> MultiMap:
    """The unary map X -> <B, X>_-, of weight |B| - n."""
    Be = VinElement.from_form(n, B)
    return FunctionMap(lambda x: pairing("-", Be, x), 1, B.degree - n, False, NONE, "<B,.>")


# ---------------------------------------------------------------------------
# gauge transformations


class GaugeData:
    """An n-form B together with the twisted model omega + dB."""

    def __init__(self, model: MultisymplecticModel, B: Form):
        if B and B.degree != model.n:
            raise ModelError("B must be an n-form")
        self.model = model
        self.B = B
        self.twisted = model.twisted(B)
        self.twisted.validate()

    def apply(self, x: VinElement) -> VinElement:
        """(X, alpha) -> (X, alpha + i_X B); identity on forms without a field."""
        if not x.vf:
            return x
        return VinElement(x.n, x.vf, x.form + contract(x.vf, self.B))

    def is_invariant(self, X: VectorField) -> bool:
        return not lie_derivative(X, self.B)


def gauge_tau(gauge: GaugeData, shifted: bool = False) -> LinftyMorphism:
    """The strict morphism with unary component id - 2 <B, .>_-."""
    tau = FunctionMap(gauge.apply, 1, 0, False, NONE, "tau_B")
    comps = {1: decalage_map(tau) if shifted else tau}
    return LinftyMorphism(comps, shifted=shifted, name="tau_B")


# ---------------------------------------------------------------------------
# Lie algebras and comoment maps


class LieAlgebra:
    """A Lie algebra given by structure constants [e_i, e_j] = sum_k c^k_ij e_k."""

    def __init__(self, dim: int, brackets: dict | None = None, name: str = "g"):
        self.dim = dim
        self.space = GradedSpace([0] * dim, name)
        self.consts: dict = {}
        for (i, j), out in (brackets or {}).items():
            if i == j:
                raise ValueError("bracket of a basis element with itself must vanish")
            cs = {k: Fraction(c) for k, c in out.items() if c}
            if i > j:
                i, j = j, i
                cs = {k: -c for k, c in cs.items()}
            self.consts[(i, j)] = cs
        self.check_jacobi()

    def basis(self, i: int) -> Vector:
        return self.space.basis(i)

    def bracket(self, x: Vector, y: Vector) -> Vector:
        out: dict = {}
        for i, a in x.coeffs.items():
            for j, b in y.coeffs.items():
                if i == j:
                    continue
                s, key = (1, (i, j)) if i < j else (-1, (j, i))
                for k, c in self.consts.get(key, {}).items():
                    out[k] = out.get(k, 0) + s * a * b * c
        return self.space.vector(out)

    def check_jacobi(self) -> None:
        for i, j, k in combinations(range(self.dim), 3):
            x, y, z = self.basis(i), self.basis(j), self.basis(k)
            t = self.bracket(x, self.bracket(y, z)) + self.bracket(y, self.bracket(z, x)) + self.bracket(z, self.bracket(x, y))
            if t:
                raise ValueError("structure constants violate the Jacobi identity")

    def bracket_map(self) -> MultiMap:
        return FunctionMap(self.bracket, 2, 0, False, SKEW, "[,]_g")

    def structure(self) -> dict:
        """The shifted structure (only a binary bracket)."""
        return {2: decalage_map(self.bracket_map())}


def _skew_extend(table: dict, xs: Sequence[Vector], zero):
    """Multilinear skew extension of values on strictly increasing index tuples."""
    acc = []
    for combo in _index_products(xs):
        idx = tuple(i for i, _ in combo)
        if len(set(idx)) < len(idx):
            continue
        order = sorted(range(len(idx)), key=lambda t: idx[t])
        val = table.get(tuple(idx[t] for t in order))
        if val is None or not val:
            continue
        c = Fraction(permutation_sign(order))
        for _, v in combo:
            c *= v
        acc.append(val.scale(c))
    return add_all(acc) if acc else zero


def _index_products(xs):
    from itertools import product

    return product(*[sorted(x.coeffs.items()) for x in xs])


class ComomentMap:
    """A homotopy comoment map for a Lie algebra action on a model.

    ``rho`` lists the fundamental vector fields of the basis; ``f`` maps
    k to a table {increasing basis index tuple: (n-k)-form}.
    """

    def __init__(self, algebra: LieAlgebra, rho: Sequence[VectorField], f: dict, model: MultisymplecticModel, name: str = "f"):
        if len(rho) != algebra.dim:
            raise ValueError("need one vector field per basis element")
        self.algebra = algebra
        self.rho = list(rho)
        self.f = {k: dict(v) for k, v in f.items()}
        self.model = model
        self.name = name

    @property
    def n(self) -> int:
        return self.model.n

    def rho_of(self, x: Vector) -> VectorField:
        out = VectorField(self.model.m)
        for i, c in x.coeffs.items():
            out = out + self.rho[i].scale(c)
        return out

    def component(self, k: int, xs: Sequence[Vector]):
        """f_k(xs) as an element of the observable algebra."""
        zero = Form(self.model.m)
        val = _skew_extend(self.f.get(k, {}), xs, zero)
        if k == 1:
            X = self.rho_of(xs[0])
            if not X and not val:
                return 0
            return VinElement(self.n, X, val)
        if not val:
            return 0
        return VinElement.from_form(self.n, val)

    def maps(self, max_arity: int | None = None) -> dict:
        top = max_arity or self.n + 1
        out = {}
        for k in range(1, top + 1):
            out[k] = FunctionMap(lambda *xs, k=k: self.component(k, xs), k, 1 - k, False, SKEW, f"{self.name}{k}")
        return out

    def shifted_maps(self, max_arity: int | None = None) -> dict:
        return {k: decalage_map(m) for k, m in self.maps(max_arity).items()}

    def basis_words(self, k: int):
        for idx in combinations(range(self.algebra.dim), k):
            yield tuple(self.algebra.basis(i) for i in idx)

    def defect(self, word: tuple, max_arity: int | None = None):
        top = max_arity or self.n + 1
        target = rogers_structure(self.model, top)
        return verify_morphism(self.shifted_maps(top), self.algebra.structure(), target, word)

    def validate(self, max_arity: int | None = None) -> dict:
        """Invariance of omega, the arity-1 condition and the morphism defect."""
        om = self.model.omega
        problems = []
        for i, X in enumerate(self.rho):
            if lie_derivative(X, om):
                problems.append(f"rho(e{i}) does not preserve omega")
            f1 = self.f.get(1, {}).get((i,), Form(self.model.m))
            if exterior_d(f1) + contract(X, om):
                problems.append(f"d f1(e{i}) != -i_rho omega")
        top = max_arity or self.n + 1
        for k in range(1, top + 1):
            for word in self.basis_words(k):
                with evaluation_cache():
                    d = self.defect(word, top)
                if not is_zero(d):
                    problems.append(f"morphism defect on basis tuple of arity {k}")
        return {"ok": not problems, "problems": problems}


def complete_comoment(algebra: LieAlgebra, rho: Sequence[VectorField], f1: dict, model: MultisymplecticModel) -> ComomentMap:
    """Fill in f_2 .. f_n by solving the morphism equations with primitives.

    At arity k the only unknown term is d f_k, so the defect with f_k = 0 is
    an exact form up to sign; its homotopy primitive (with the sign that
    cancels the defect) gives f_k on each basis tuple.
    """
    fm = ComomentMap(algebra, rho, {1: f1}, model)
    for k in range(2, model.n + 1):
        fm.f[k] = {}
        for idx in combinations(range(algebra.dim), k):
            word = tuple(algebra.basis(i) for i in idx)
            with evaluation_cache():
                d = fm.defect(word, k)
            if is_zero(d):
                continue
            h = homotopy_primitive(d.form)
            for s in (1, -1):
                fm.f[k][idx] = h.scale(s)
                with evaluation_cache():
                    if is_zero(fm.defect(word, k)):
                        break
            else:
                raise ValueError(f"could not solve for f_{k} on {idx}")
    # nothing is left to solve for at arity n + 1; a defect there is an obstruction
    top = model.n + 1
    for idx in combinations(range(algebra.dim), top):
        word = tuple(algebra.basis(i) for i in idx)
        with evaluation_cache():
            if not is_zero(fm.defect(word, top)):
                raise ValueError(f"no comoment map: obstruction on basis tuple {idx}")
    return fm


def twist_comoment(fm: ComomentMap, gauge: GaugeData) -> ComomentMap:
    """f~_k = f_k + b_k with b_k = s(k+1) i_{rho(x_k)} .. i_{rho(x_1)} B."""
    for i, X in enumerate(fm.rho):
        if not gauge.is_invariant(X):
            raise ValueError(f"B is not invariant under rho(e{i})")
    new: dict = {k: dict(v) for k, v in fm.f.items()}
    for k in range(1, fm.n + 1):
        tab = new.setdefault(k, {})
        for idx in combinations(range(fm.algebra.dim), k):
            b = gauge.B
            for i in idx:
                b = contract(fm.rho[i], b)
            if b:
                tab[idx] = tab.get(idx, Form(fm.model.m)) + b.scale(sign_varsigma(k + 1))
    return ComomentMap(fm.algebra, fm.rho, new, gauge.twisted, name=fm.name + "~")


# ---------------------------------------------------------------------------
# composition of unshifted morphisms


def _degree(x) -> int:
    return x.degree


class UnshiftedComposite(MultiMap):
    """(g o f)_m = sum_l g_l o S_{l,m}(f) for skew morphism components."""

    def __init__(self, g: dict, f: dict, m: int):
        super().__init__(m, 1 - m, False, SKEW, f"(g o f)_{m}")
        self.g, self.f = g, f

    def _eval(self, xs):
        degs = [_degree(x) for x in xs]
        m = len(xs)
        acc = []
        for ell in range(1, m + 1):
            gl = self.g.get(ell)
            if gl is None:
                continue
            for ks in compositions(m, ell):
                if any(ks[i] > ks[i + 1] for i in range(ell - 1)):
                    continue
                fs = [self.f.get(k) for k in ks]
                if any(fk is None for fk in fs):
                    continue
                pre = sum(fs[i].weight * (ell - 1 - i) for i in range(ell - 1)) % 2
                for sign, ys in apply_block_operator("P<", ks, xs, degs):
                    s = -sign if pre else sign
                    outs, pos, seen = [], 0, 0
                    for fk, k in zip(fs, ks):
                        block = ys[pos:pos + k]
                        if (fk.weight * seen) % 2:
                            s = -s
                        v = fk(*block)
                        if is_zero(v):
                            break
                        outs.append(v)
                        seen += sum(_degree(y) for y in block)
                        pos += k
                    else:
                        acc.append(scale(_apply_on_parts(gl, outs), s))
        return add_all(acc)


def _apply_on_parts(g: MultiMap, outs: list):
    from itertools import product

    acc = []
    for combo in product(*[[e for _, e in parts(o)] for o in outs]):
        acc.append(g(*combo))
    return add_all(acc)


def compose(g: dict, f: dict, max_arity: int, shifted: bool = False) -> dict:
    """Components of g o f up to max_arity (both given in the same convention)."""
    if shifted:
        return compose_shifted(g, f, max_arity)
    return {m: UnshiftedComposite(g, f, m) for m in range(1, max_arity + 1)}


# ---------------------------------------------------------------------------
# pentagon


def binomial_bernoulli_sum(m: int) -> Fraction:
    """sum_{l=1}^{m} C(m, l-1) B_{l-1}; zero for m >= 2."""
    return sum((comb(m, l - 1) * bernoulli(l - 1) for l in range(1, m + 1)), Fraction(0))


def pentagon_check(fm: ComomentMap, gauge: GaugeData, max_arity: int | None = None, scalar_range: int = 20) -> dict:
    """Compare (tau_B o psi o f)_m with (psi~ o f~)_m on basis tuples."""
    top = max_arity or fm.n + 1
    ft = twist_comoment(fm, gauge)
    psi = embedding_maps(fm.n, top)
    tau = gauge_tau(gauge).components
    left = compose(tau, compose(psi, fm.maps(top), top), top)
    right = compose(psi, ft.maps(top), top)
    cells = []
    first_failure = None
    for m in range(1, top + 1):
        for word in fm.basis_words(m):
            with evaluation_cache():
                a = left[m](*word)
                b = right[m](*word)
            ok = elements_equal(a, b)
            idx = tuple(next(iter(x.coeffs)) for x in word)
            cells.append({"arity": m, "tuple": list(idx), "ok": ok})
            if not ok and first_failure is None:
                first_failure = {"arity": m, "tuple": list(idx), "lhs": repr(a), "rhs": repr(b)}
    scalars = {m: binomial_bernoulli_sum(m) for m in range(2, scalar_range + 1)}
    scalar_ok = all(v == 0 for v in scalars.values())
    return {
        "ok": first_failure is None and scalar_ok,
        "cells": cells,
        "first_failure": first_failure,
        "scalar_ok": scalar_ok,
        "twisted": ft,
    }


def rhsbm_check(fm: ComomentMap, B: Form, m: int, ell: int) -> bool:
    """<,>_-^(l-1) o (f1^(l-1) (x) b_{m-l+1}) o P_{l-1,m-l+1} = C(m,l-1) (l-1)!/2^(l-1) b_m.

    Checked on every increasing basis tuple of length m.
    """
    n = fm.n
    pm = pairing_map("-")

    def b(xs):
        v = B
        for x in xs:
            v = contract(fm.rho_of(x), v)
        return VinElement.from_form(n, v.scale(sign_varsigma(len(xs) + 1)))

    power = iterated_power(pm, ell - 1) if ell > 1 else None
    coeff = comb(m, ell - 1) * Fraction(factorial(ell - 1), 2 ** (ell - 1))
    for word in fm.basis_words(m):
        acc = []
        for sign, ys in apply_block_operator("P", (ell - 1, m - ell + 1), word, [0] * m):
            ins = [fm.component(1, (y,)) for y in ys[:ell - 1]]
            last = b(ys[ell - 1:])
            if is_zero(last) or any(is_zero(v) for v in ins):
                continue
            val = last if power is None else power(*ins, last)
            acc.append(scale(val, sign))
        lhs = add_all(acc)
        if not elements_equal(lhs, scale(b(word), coeff)):
            return False
    return True


# ---------------------------------------------------------------------------
# built-in examples


def desk_comoment(model: MultisymplecticModel) -> ComomentMap:
    """R^2 acting by translations along x0, x1 on the 3-dimensional volume model."""
    from .cartan import Poly

    if model.m != 3 or model.n != 2:
        raise ModelError("the desk example lives on R^3 with n = 2")
    m = 3
    algebra = LieAlgebra(2, name="R2")
    rho = [VectorField.coordinate(m, 0), VectorField.coordinate(m, 1)]
    f1 = {
        (0,): Form.basis(m, (2,), Poly.var(m, 1)).scale(-1),
        (1,): Form.basis(m, (2,), Poly.var(m, 0)),
    }
    return complete_comoment(algebra, rho, f1, model)


def translation_comoment(model: MultisymplecticModel, dims: int | None = None) -> ComomentMap:
    """Translations along x_0 .. x_{dims-1}, f1 from linear primitives.

    With more than n directions the constant i_{X_{n+1}} .. i_{X_1} omega
    obstructs the existence of a comoment map, so dims defaults to n.
    """
    from .cartan import linear_primitive

    dims = model.n if dims is None else dims
    if dims > min(model.n, model.m):
        raise ValueError("at most n translation directions admit a comoment map")
    algebra = LieAlgebra(dims, name=f"R{dims}")
    rho = [VectorField.coordinate(model.m, i) for i in range(dims)]
    f1 = {(i,): linear_primitive(-contract(X, model.omega)) for i, X in enumerate(rho)}
    return complete_comoment(algebra, rho, f1, model)
