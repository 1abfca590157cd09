"""Line-oriented scenario files.

One directive per line, ``#`` starts a comment.  Example::

    model desk
    dimension 3
    n 2
    omega 1 dx0^dx1^dx2
    basepoint 0 0 0
    basepoint 1 2 3
    degenerate no
    gauge 1 x2 dx0^dx1
    algebra 2
    bracket 0 1 -> 0
    rho 0 = 1 d/dx0
    rho 1 = 1 d/dx1
    f 0 = -1 x1 dx2
    f 1 = 1 x0 dx2
    f 0 1 = -1 x2
    suite pentagon
    seed 1
    max-arity 3
    tuples 20
    degree-cap 2

``bracket i j -> c:k ...`` lists [e_i, e_j] = sum c e_k (``0`` for an
abelian pair).  ``f i1 .. ik = text`` gives f_k on an increasing tuple of
basis indices.  ``serialize`` writes the canonical form: fixed directive
order, forms and fields in their canonical text, so parsing and writing a
canonical file reproduces it byte for byte.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import Form, ParseError, VectorField, format_form, format_vector_field, parse_form, parse_vector_field
from .morphisms import ComomentMap, LieAlgebra
from .structures import MultisymplecticModel, builtin_model

__all__ = ["ScenarioError", "Scenario", "parse_scenario", "load_scenario", "serialize", "SUITES"]

SUITES = ("tables", "identities", "structures", "embedding", "pentagon", "appendixb")


class ScenarioError(ParseError):
    pass


@dataclass
class Scenario:
    name: str = "model"
    dimension: int = 3
    n: int = 2
    omega: Form | None = None
    basepoints: list = field(default_factory=list)
    degenerate: bool = False
    gauge: Form | None = None
    algebra_dim: int | None = None
    brackets: dict = field(default_factory=dict)
    rho: dict = field(default_factory=dict)
    f: dict = field(default_factory=dict)
    suites: list = field(default_factory=list)
    seed: int = 1
    max_arity: int | None = None
    tuples: int | None = None
    degree_cap: int = 2

    def model(self) -> MultisymplecticModel:
        omega = self.omega if self.omega is not None else Form.basis(self.dimension, range(self.dimension))
        model = MultisymplecticModel(self.dimension, self.n, omega, self.basepoints, self.degenerate, self.name)
        model.degree_cap = self.degree_cap
        return model

    def comoment(self, model: MultisymplecticModel | None = None) -> ComomentMap | None:
        if self.algebra_dim is None:
            return None
        model = model or self.model()
        algebra = LieAlgebra(self.algebra_dim, self.brackets, "g")
        rho = [self.rho.get(i, VectorField(self.dimension)) for i in range(self.algebra_dim)]
        table: dict = {}
        for idx, form in self.f.items():
            table.setdefault(len(idx), {})[idx] = form
        return ComomentMap(algebra, rho, table, model, "f")


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ScenarioError(f"line {lineno}: expected an integer, got {tok!r}") from None


_SINGLE = {"model", "dimension", "n", "omega", "degenerate", "gauge", "algebra", "seed", "max-arity", "tuples", "degree-cap"}


def parse_scenario(text: str) -> Scenario:
    sc = Scenario()
    seen: set = set()
    pending: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key in _SINGLE:
            if key in seen:
                raise ScenarioError(f"line {lineno}: duplicate {key!r}")
            seen.add(key)
        if key == "model":
            if not rest or " " in rest:
                raise ScenarioError(f"line {lineno}: model needs a single-word name")
            if rest in ("R3", "R4", "R5") and not {"dimension", "n", "omega"} & seen:
                b = builtin_model(rest)
                sc.dimension, sc.n = b.m, b.n
            sc.name = rest
        elif key == "dimension":
            sc.dimension = _int(rest, lineno)
            if sc.dimension < 1:
                raise ScenarioError(f"line {lineno}: dimension must be positive")
        elif key == "n":
            sc.n = _int(rest, lineno)
        elif key in ("omega", "gauge", "rho", "f", "basepoint"):
            pending.append((lineno, key, rest))
        elif key == "degenerate":
            if rest not in ("yes", "no"):
                raise ScenarioError(f"line {lineno}: degenerate must be yes or no")
            sc.degenerate = rest == "yes"
        elif key == "algebra":
            sc.algebra_dim = _int(rest, lineno)
        elif key == "bracket":
            lhs, arrow, rhs = rest.partition("->")
            if not arrow:
                raise ScenarioError(f"line {lineno}: bracket needs '->'")
            ij = lhs.split()
            if len(ij) != 2:
                raise ScenarioError(f"line {lineno}: bracket needs two indices")
            i, j = (_int(t, lineno) for t in ij)
            if not i < j:
                raise ScenarioError(f"line {lineno}: bracket indices must increase")
            out = {}
            toks = rhs.split()
            if toks != ["0"]:
                for tok in toks:
                    c, colon, k = tok.partition(":")
                    if not colon:
                        raise ScenarioError(f"line {lineno}: bracket term must be coeff:index")
                    try:
                        out[_int(k, lineno)] = Fraction(c)
                    except ValueError:
                        raise ScenarioError(f"line {lineno}: bad coefficient {c!r}") from None
            sc.brackets[(i, j)] = out
        elif key == "suite":
            for s in rest.split():
                if s not in SUITES:
                    raise ScenarioError(f"line {lineno}: unknown suite {s!r}")
                sc.suites.append(s)
        elif key == "seed":
            sc.seed = _int(rest, lineno)
            if not 0 <= sc.seed < 2**64:
                raise ScenarioError(f"line {lineno}: seed must be an unsigned 64-bit integer")
        elif key == "max-arity":
            sc.max_arity = _int(rest, lineno)
        elif key == "tuples":
            sc.tuples = _int(rest, lineno)
        elif key == "degree-cap":
            sc.degree_cap = _int(rest, lineno)
        else:
            raise ScenarioError(f"line {lineno}: unknown directive {key!r}")
    # forms need the final dimension
    m = sc.dimension
    for lineno, key, rest in pending:
        try:
            if key == "omega":
                sc.omega = parse_form(rest, m)
            elif key == "gauge":
                sc.gauge = parse_form(rest, m)
            elif key == "basepoint":
                pt = [Fraction(t) for t in rest.split()]
                if len(pt) != m:
                    raise ScenarioError(f"line {lineno}: basepoint needs {m} coordinates")
                sc.basepoints.append(tuple(pt))
            elif key == "rho":
                idx, eq, body = rest.partition("=")
                if not eq:
                    raise ScenarioError(f"line {lineno}: rho needs '='")
                i = _int(idx.strip(), lineno)
                if i in sc.rho:
                    raise ScenarioError(f"line {lineno}: duplicate rho {i}")
                sc.rho[i] = parse_vector_field(body, m)
            elif key == "f":
                idx, eq, body = rest.partition("=")
                if not eq:
                    raise ScenarioError(f"line {lineno}: f needs '='")
                t = tuple(_int(x, lineno) for x in idx.split())
                if not t or list(t) != sorted(set(t)):
                    raise ScenarioError(f"line {lineno}: f indices must be strictly increasing")
                if t in sc.f:
                    raise ScenarioError(f"line {lineno}: duplicate f {t}")
                sc.f[t] = parse_form(body, m)
        except ScenarioError:
            raise
        except (ParseError, ValueError, ZeroDivisionError) as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from None
    if sc.algebra_dim is None and (sc.rho or sc.f or sc.brackets):
        raise ScenarioError("rho, f and bracket need an 'algebra' line")
    if sc.algebra_dim is not None:
        bad = [i for i in sc.rho if not 0 <= i < sc.algebra_dim]
        bad += [i for t in sc.f for i in t if not 0 <= i < sc.algebra_dim]
        bad += [i for k in sc.brackets for i in k if not 0 <= i < sc.algebra_dim]
        bad += [k for out in sc.brackets.values() for k in out if not 0 <= k < sc.algebra_dim]
        if bad:
            raise ScenarioError(f"basis index {bad[0]} out of range")
    return sc


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(str(exc)) from None
    return parse_scenario(text)


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def serialize(sc: Scenario) -> str:
    lines = [f"model {sc.name}", f"dimension {sc.dimension}", f"n {sc.n}"]
    if sc.omega is not None:
        lines.append(f"omega {format_form(sc.omega)}")
    for p in sc.basepoints:
        lines.append("basepoint " + " ".join(_frac(c) for c in p))
    lines.append(f"degenerate {'yes' if sc.degenerate else 'no'}")
    if sc.gauge is not None:
        lines.append(f"gauge {format_form(sc.gauge)}")
    if sc.algebra_dim is not None:
        lines.append(f"algebra {sc.algebra_dim}")
        for (i, j) in sorted(sc.brackets):
            out = sc.brackets[(i, j)]
            body = " ".join(f"{_frac(c)}:{k}" for k, c in sorted(out.items()) if c) or "0"
            lines.append(f"bracket {i} {j} -> {body}")
        for i in sorted(sc.rho):
            lines.append(f"rho {i} = {format_vector_field(sc.rho[i])}")
        for t in sorted(sc.f, key=lambda t: (len(t), t)):
            lines.append("f " + " ".join(str(i) for i in t) + f" = {format_form(sc.f[t])}")
    if sc.suites:
        lines.append("suite " + " ".join(sc.suites))
    lines.append(f"seed {sc.seed}")
    if sc.max_arity is not None:
        lines.append(f"max-arity {sc.max_arity}")
    if sc.tuples is not None:
        lines.append(f"tuples {sc.tuples}")
    lines.append(f"degree-cap {sc.degree_cap}")
    return "\n".join(lines) + "\n"
