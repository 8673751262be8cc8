import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from gmcd.algebra import (
    MultiPoly, ParseError, RationalFunction, StructuralError, VarTable, divide_track,
    exact_divide, format_poly, parse_poly, poly_gcd, poly_ring,
)

R = poly_ring("x:2,y:3;a,b")
SYM = sympy.symbols("x y a b")

coef = st.fractions(min_value=-20, max_value=20, max_denominator=7)
mono = st.tuples(*[st.integers(0, 3)] * 4)
polys = st.dictionaries(mono, coef, max_size=6).map(
    lambda d: MultiPoly(R, {e: mpq(c.numerator, c.denominator) for e, c in d.items()}))


def to_sympy(p):
    return sympy.sympify(format_poly(p) if not p.is_zero() else "0", locals=dict(zip("xyab", SYM)))


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p).is_zero()


@given(polys)
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), R) == p


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_product_matches_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0


@given(polys, polys)
@settings(max_examples=40, deadline=None)
def test_gcd_matches_sympy(p, q):
    g = poly_gcd(p * q, q)
    expected = sympy.gcd(to_sympy(p * q), to_sympy(q))
    if q.is_zero():
        return
    ratio = sympy.cancel(to_sympy(g) / expected)
    assert ratio.is_number and ratio != 0


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_division_identity(p, q):
    divisors = [d for d in (q, MultiPoly.var(R, "x") + 1) if not d.is_zero()]
    cofs, rem = divide_track(p, divisors)
    assert sum((c * d for c, d in zip(cofs, divisors)), MultiPoly(R)) + rem == p


@given(polys, polys)
def test_exact_divide(p, q):
    if q.is_zero():
        return
    assert exact_divide(p * q, q) == p


def test_exact_divide_rejects_non_multiple():
    x = MultiPoly.var(R, "x")
    assert exact_divide(x + 1, x) is None
    with pytest.raises(ZeroDivisionError):
        exact_divide(x, MultiPoly(R))


def test_diff_and_weights():
    p = parse_poly("y^2 - 4*x^3 + a*x", R)
    assert p.diff("x") == parse_poly("-12*x^2 + a", R)
    assert p.leading_part() == parse_poly("y^2 - 4*x^3", R)
    assert p.leading_part().is_homogeneous()


def test_value_at_and_subs():
    p = parse_poly("x*y + a^2", R)
    assert p.value_at({"x": 2, "y": mpq(1, 2), "a": 3, "b": 0}) == 10
    q = p.subs({"a": MultiPoly.var(R, "b") + 1})
    assert q == parse_poly("x*y + b^2 + 2*b + 1", R)


def test_change_ring_keeps_terms():
    S = poly_ring("a,b,x,y")
    p = parse_poly("x*a + b", R)
    assert p.change_ring(S) == parse_poly("x*a + b", S)


@pytest.mark.parametrize("text", ["x +", "x^^2", "3*(x", "q + 1", "x^-1"])
def test_parse_errors(text):
    with pytest.raises((ParseError, StructuralError)):
        parse_poly(text, R)


def test_bad_variable_names():
    with pytest.raises(StructuralError):
        VarTable(["x", "x"])


class TestRationalFunction:
    def test_normalizes(self):
        r = RationalFunction(parse_poly("x^2 - y^2", R), parse_poly("x - y", R))
        assert r.is_polynomial()
        assert r.as_poly() == parse_poly("x + y", R)

    def test_field_ops(self):
        a = RationalFunction(parse_poly("x", R), parse_poly("a + 1", R))
        b = RationalFunction(parse_poly("b", R), parse_poly("x", R))
        assert (a * b) / b == a
        assert a * a.inverse() == RationalFunction(MultiPoly.const(R, 1))

    def test_quotient_rule(self):
        r = RationalFunction(MultiPoly.const(R, 1), parse_poly("a^2 + 1", R))
        assert r.diff("a") == RationalFunction(parse_poly("-2*a", R), parse_poly("a^4 + 2*a^2 + 1", R))

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunction(MultiPoly.const(R, 1), MultiPoly(R))
