from fractions import Fraction

import pytest

from hcourant.cartan import (
    Form,
    ParseError,
    Poly,
    VectorField,
    contract,
    exterior_d,
    format_form,
    format_vector_field,
    homotopy_primitive,
    lie_derivative,
    lie_derivative_coordinates,
    linear_primitive,
    parse_form,
    parse_poly,
    parse_vector_field,
    vf_bracket,
    wedge,
)
from hcourant.sampling import SplitMix64, random_form, random_poly, random_vector_field

M = 3


def f(text, m=M):
    return parse_form(text, m)


def v(text, m=M):
    return parse_vector_field(text, m)


def test_wedge_examples():
    assert wedge(f("dx0"), f("dx1")) == f("dx0^dx1")
    assert wedge(f("dx0"), f("dx0")) == 0
    assert wedge(f("x0 dx1"), f("dx2")) == f("x0 dx1^dx2")
    assert wedge(f("dx1"), f("dx0")) == f("-1 dx0^dx1")


def test_d_examples():
    assert exterior_d(f("x0 dx1")) == f("dx0^dx1")
    assert exterior_d(f("dx0^dx1^dx2")) == 0
    assert exterior_d(f("x0^2 x1")) == f("2 x0 x1 dx0 + x0^2 dx1")


def test_contraction_examples():
    vol = f("dx0^dx1^dx2")
    assert contract(v("d/dx2"), vol) == f("dx0^dx1")
    assert contract(v("d/dx0"), f("dx1")) == 0
    assert contract(v("d/dx1"), vol) == f("-1 dx0^dx2")


def test_lie_and_bracket_examples():
    assert lie_derivative(v("d/dx0"), f("x0 dx1")) == f("dx1")
    assert vf_bracket(v("d/dx0"), v("x0 d/dx1")) == v("d/dx1")


def forms(seed, count, m=M):
    rng = SplitMix64(seed)
    for _ in range(count):
        yield rng, random_form(rng, m, rng.randint(0, m), 2, 3)


@pytest.mark.parametrize("m", [3, 4])
def test_cartan_laws(m):
    for rng, a in forms(11 + m, 40, m):
        X = random_vector_field(rng, m)
        Y = random_vector_field(rng, m)
        assert exterior_d(exterior_d(a)) == 0
        assert contract(X, contract(X, a)) == 0
        assert lie_derivative_coordinates(X, a) == exterior_d(contract(X, a)) + contract(X, exterior_d(a))
        L = lie_derivative_coordinates
        assert contract(vf_bracket(X, Y), a) == L(X, contract(Y, a)) - contract(Y, L(X, a))
        assert L(vf_bracket(X, Y), a) == L(X, L(Y, a)) - L(Y, L(X, a))


def test_leibniz_rules():
    for rng, a in forms(5, 30):
        b = random_form(rng, M, rng.randint(0, M))
        X = random_vector_field(rng, M)
        g = random_poly(rng, M)
        p = min(a.degrees(), default=0)
        a = a.part(p)
        sign = -1 if p % 2 else 1
        assert exterior_d(wedge(a, b)) == wedge(exterior_d(a), b) + wedge(a, exterior_d(b)).scale(sign)
        assert contract(X, wedge(a, b)) == wedge(contract(X, a), b) + wedge(a, contract(X, b)).scale(sign)
        ga = wedge(Form.function(g), a)
        assert lie_derivative(X, ga) == wedge(Form.function(X.apply(g)), a) + wedge(Form.function(g), lie_derivative(X, a))


def test_homotopy_primitive_inverts_d_on_closed_forms():
    for rng, a in forms(9, 30):
        if not a.degrees() or min(a.degrees()) == 0:
            a = a + f("x1 dx0")
        b = exterior_d(a)
        if b:
            assert exterior_d(homotopy_primitive(b)) == b


def test_linear_primitive():
    c = f("2 dx0^dx1 - 3 dx1^dx2")
    assert exterior_d(linear_primitive(c)) == c
    with pytest.raises(ValueError):
        linear_primitive(f("x0 dx1"))


def test_parse_and_format_round_trip():
    rng = SplitMix64(3)
    for _ in range(50):
        a = random_form(rng, 4, rng.randint(0, 4))
        assert parse_form(format_form(a), 4) == a
        X = random_vector_field(rng, 4)
        assert parse_vector_field(format_vector_field(X), 4) == X
    assert format_form(f("x2 dx0^dx1 + dx0^dx1^dx2")) == "1 dx0^dx1^dx2 + 1 x2 dx0^dx1"
    assert parse_poly("x0 x1 - 1/3 x2^2", 3) == Poly(3, {(1, 1, 0): Fraction(1), (0, 0, 2): Fraction(-1, 3)})
    assert f("0") == 0


@pytest.mark.parametrize("bad", ["dx5", "x7 dx0", "1 +", "y dx0", "2 dx0 3 dx1"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_form(bad, 3)


def test_vector_field_parse_error():
    with pytest.raises(ParseError):
        parse_vector_field("x0 dx1", 3)


def test_evaluate_and_inhomogeneous_forms():
    a = f("x0 dx1 + 2 x2")
    assert a.degrees() == {0, 1}
    assert a.evaluate((1, 0, 3)) == f("dx1 + 6")
    with pytest.raises(ValueError):
        _ = a.degree
    assert VectorField.coordinate(3, 1).apply(parse_poly("x1^2", 3)) == parse_poly("2 x1", 3)
