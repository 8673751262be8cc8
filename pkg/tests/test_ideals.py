import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gmcd.algebra import MultiPoly, parse_poly, poly_ring
from gmcd.ideals import NOT_FINITE, buchberger, local_algebra_dim, normal_form, standard_monomials

R = poly_ring("x,y,z")


def milnor_dim_sympy(texts):
    x, y, z = sympy.symbols("x y z")
    G = sympy.groebner([sympy.sympify(t) for t in texts], x, y, z, order="grevlex")
    # count standard monomials with a crude box enumeration
    lms = [sympy.Poly(g, x, y, z).monoms(order="grevlex")[0] for g in G.exprs]
    n = 0
    for i in range(12):
        for j in range(12):
            for k in range(12):
                if not any(i >= a and j >= b and k >= c for a, b, c in lms):
                    n += 1
    return n


@pytest.mark.parametrize("f, mu", [
    ("x^3 + y^3 + z^3", 8),
    ("x^2 + y^2 + z^5", 4),
    ("x^2*y + y^4 + z^2", 5),
])
def test_milnor_number_against_sympy(f, mu):
    p = parse_poly(f, R)
    gb = buchberger([p.diff(v) for v in "xyz"])
    sm = standard_monomials(gb)
    assert len(sm) == mu
    assert milnor_dim_sympy([str(p.diff(v)).replace("^", "**") for v in "xyz"]) == mu


def test_normal_form_cofactors():
    gens = [parse_poly("x^2 - y", R), parse_poly("y^2 - z", R)]
    gb = buchberger(gens)
    p = parse_poly("x^4*z + y^3", R)
    rem, cof = normal_form(p, gb, original=True)
    assert sum((c * g for c, g in zip(cof, gens)), MultiPoly(R)) + rem == p


small = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
                           st.integers(-3, 3)), min_size=1, max_size=3)


@given(small, small)
@settings(max_examples=25, deadline=None)
def test_ideal_members_reduce_to_zero(t1, t2):
    g1 = MultiPoly(R, {(a, b, c): k for a, b, c, k in t1 if k}) + parse_poly("x^3", R)
    g2 = MultiPoly(R, {(a, b, c): k for a, b, c, k in t2 if k}) + parse_poly("y^3", R)
    gb = buchberger([g1, g2])
    member = g1 * parse_poly("x*z + 1", R) - g2 * parse_poly("y - 2", R)
    rem, _ = normal_form(member, gb)
    assert rem.is_zero()


def test_infinite_quotient_flagged():
    gb = buchberger([parse_poly("x^2", R), parse_poly("y", R)])
    assert not standard_monomials(gb).finite


@pytest.mark.parametrize("f, mu, rank", [
    ("x^2 + y^2 + z^2", 1, 3),
    ("x^2 + y^2 + z^12", 11, 2),
    ("x^3 + y^4 + z^2", 6, 1),
])
def test_local_probe(f, mu, rank):
    r = local_algebra_dim(parse_poly(f, R), ["x", "y", "z"])
    assert (r.local_milnor_number, r.hessian_rank) == (mu, rank)


def test_local_probe_stabilizes():
    r = local_algebra_dim(parse_poly("x^2 + y^2 + z^6", R), ["x", "y", "z"])
    dims = [d for _, d in r.history]
    assert dims[-1] == dims[-2] == dims[-3] == 5


def test_local_probe_non_isolated():
    r = local_algebra_dim(parse_poly("x^2 + y^2", R), ["x", "y", "z"], degree_cap=8, max_cap=16)
    assert r.local_milnor_number == NOT_FINITE


def test_local_probe_needs_origin():
    with pytest.raises(ValueError):
        local_algebra_dim(parse_poly("x + 1", R), ["x", "y", "z"])
