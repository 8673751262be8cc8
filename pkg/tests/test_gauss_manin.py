import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from gmcd.algebra import MultiPoly, RationalFunction, parse_poly
from gmcd.gauss_manin import (
    GaussManin, PointRejected, PoleForm, SpecializedFamily, a_beta, check_point_off_sigma,
    filtration_sets, flatness_defect, gm_connection, hodge_frame, sample_off_sigma,
    transversality_check,
)
from gmcd.tame import sample_point


@pytest.fixture(scope="module")
def ell_conn(ell_gm):
    return {p: gm_connection(ell_gm, p) for p in ("a", "b")}


def rf(ring, num, den):
    return RationalFunction(parse_poly(num, ring), parse_poly(den, ring))


def test_elliptic_connection_closed_form(ell, ell_conn):
    den = "a^3 - 27*b^2"
    Aa = [[rf(ell.ring, "-1/4*a^2", den), rf(ell.ring, "-9/2*b", den)],
          [rf(ell.ring, "3/8*a*b", den), rf(ell.ring, "1/4*a^2", den)]]
    Ab = [[rf(ell.ring, "9/2*b", den), rf(ell.ring, "3*a", den)],
          [rf(ell.ring, "-1/4*a^2", den), rf(ell.ring, "-9/2*b", den)]]
    assert ell_conn["a"].entries == Aa
    assert ell_conn["b"].entries == Ab


def test_elliptic_connection_traceless(ell_conn):
    for M in ell_conn.values():
        assert (M.entries[0][0] + M.entries[1][1]).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_elliptic_flatness(ell, ell_conn, seed):
    rng = random.Random(seed)
    pt = sample_point(["a", "b"], rng, [parse_poly("a^3 - 27*b^2", ell.ring)])
    D = flatness_defect(ell_conn, "a", "b", pt)
    assert all(x == 0 for row in D for x in row)


def test_flatness_detects_perturbation(ell, ell_conn):
    import copy
    bad = copy.deepcopy(ell_conn)
    bad["a"].entries[0][1] = bad["a"].entries[0][1] + RationalFunction(MultiPoly.var(ell.ring, "b"))
    D = flatness_defect(bad, "a", "b", {"a": 2, "b": 1})
    assert any(x != 0 for row in D for x in row)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(1, 4), st.integers(-5, 5))
@settings(max_examples=25, deadline=None)
def test_symbolic_reduction_certificates(ell_gm, i, j, k, c):
    ring = ell_gm.t.ring
    num = parse_poly(f"x^{i}*y^{j}", ring) * (MultiPoly.var(ring, "a") + c)
    red = ell_gm.reduce(PoleForm(num, k))
    assert ell_gm.verify_steps(red)


def test_specialized_reduction_certificates(cd, rng, sigma):
    pt = sample_off_sigma(cd.param_names, rng, sigma)
    gm, _ = SpecializedFamily(cd).at(pt)
    ring = gm.t.ring
    for _ in range(25):
        e = tuple(rng.randint(0, 4) for _ in range(3))
        red = gm.reduce(PoleForm(MultiPoly.monomial(ring, e, rng.randint(1, 9)), rng.randint(1, 3)))
        assert gm.verify_steps(red)


def test_euler_identity(cd, rng, sigma):
    # the weighted Euler field acts on dx/f by -1
    pt = sample_off_sigma(cd.param_names, rng, sigma)
    gm, dfs = SpecializedFamily(cd).at(pt)
    w0 = gm.basis_form(0, 1)
    weights = {"a": 4, "b": 6, "c": 10, "d": 12, "s": 24}
    total = [mpq(0)] * cd.mu
    for p, wt in weights.items():
        v = gm.reduce(gm.derivative_form(w0, p, dfs[p])).coefficients()
        total = [t + wt * pt[p] * x for t, x in zip(total, v)]
    assert total == [mpq(-1)] + [mpq(0)] * (cd.mu - 1)


def test_a_beta_values():
    assert a_beta((0, 0, 0)) == mpq(23, 24)
    assert a_beta((1, 0, 3)) == mpq(49, 24)


def test_hodge_frame_levels(cd, cd_table):
    levels = sorted(lvl for _, _, lvl in hodge_frame(cd, cd_table))
    assert levels == [0] + [1] * 8 + [2]


def test_filtration_sets(cd_table):
    b2, b3 = filtration_sets(cd_table, 0)
    assert b2 == [((0, 0, 0), 3)] and b3 == []
    b2, _ = filtration_sets(cd_table, 1)
    assert len(b2) == 8 and all(order == 2 for _, order in b2)
    b2, _ = filtration_sets(cd_table, 2)
    assert b2 == [((0, 0, 0), 1)]


@pytest.mark.parametrize("seed", range(3))
def test_transversality(cd, cd_table, sigma, seed):
    pt = sample_off_sigma(cd.param_names, random.Random(seed), sigma)
    rep = transversality_check(cd, pt, sigma, cd_table, parameters=["a", "d"])
    assert rep.ok


def test_point_on_sigma_rejected(sigma):
    with pytest.raises(PointRejected, match="s"):
        check_point_off_sigma({"a": 1, "b": 1, "c": 1, "d": 1, "s": 0}, sigma)
