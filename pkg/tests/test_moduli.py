import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from gmcd.gauss_manin import sample_off_sigma
from gmcd.lie import bracket, load_matrix, psi_matrix, to_q
from gmcd.linalg import identity, inverse, matmul, transpose
from gmcd.moduli import (
    ELLIPTIC_ELEMENTS, ELLIPTIC_SHAPE, ELLIPTIC_WEIGHTS, K3_SHAPE, PreconditionError, amsy_basis,
    elliptic_chart, elliptic_components, elliptic_solve, gm_alpha, group_membership,
    k3_frame_data, k3_solve_points, lambda_action, random_admissible, s_complete, scaling_action,
    vf_solve, weighted_degree_rf,
)
from gmcd.tame import load_locus

PSI = psi_matrix()


def test_s_complete_identity_chart():
    I3 = [[mpq(int(i == j)) for j in range(3)] for i in range(3)]
    S = s_complete([[mpq(0)]] * 3, I3, PSI, PSI)
    assert S == [[mpq(int(i == j)) for j in range(5)] for i in range(5)]


@given(st.integers(0, 10 ** 6))
@settings(max_examples=50, deadline=None)
def test_s_complete_random_admissible(seed):
    Omega, S10, S11 = random_admissible(random.Random(seed), PSI)
    S = s_complete(S10, S11, Omega, PSI)
    assert matmul(matmul(S, Omega), transpose(S)) == PSI
    assert K3_SHAPE.is_s_shaped(S)


def test_s_complete_rejects_perturbed_s11():
    Omega, S10, S11 = random_admissible(random.Random(1), PSI)
    S11[0][0] += 1
    with pytest.raises(PreconditionError, match="S11"):
        s_complete(S10, S11, Omega, PSI)


def test_s_complete_rejects_bad_omega():
    Omega, S10, S11 = random_admissible(random.Random(2), PSI)
    Omega[0][4] = Omega[4][0] = mpq(0)
    with pytest.raises(PreconditionError, match="2,0"):
        s_complete(S10, S11, Omega, PSI)


def test_gm_alpha_identity_frame():
    A = {"a": to_q([[1, 2], [3, 4]]), "b": to_q([[0, 1], [1, 0]])}
    I = identity(2, mpq(1), mpq(0))
    Z = [[mpq(0)] * 2 for _ in range(2)]
    G = gm_alpha(I, A, {"a": mpq(2), "b": mpq(-1)}, Z)
    assert G == to_q([[2, 3], [5, 8]])


def test_gm_alpha_frame_change():
    A = {"a": to_q([[1, 2], [3, 4]])}
    S = to_q([[1, 0], [5, 2]])
    Z = [[mpq(0)] * 2 for _ in range(2)]
    assert gm_alpha(S, A, {"a": mpq(1)}, Z) == matmul(matmul(S, A["a"]), inverse(S))


# ---------------------------------------------------------------- elliptic tier

@pytest.fixture(scope="module")
def chart():
    return elliptic_chart()


def test_elliptic_raising_field(chart):
    sol = elliptic_solve(ELLIPTIC_ELEMENTS["raising"], chart)
    assert sol.unique and sol.certificate and sol.antisymmetric
    comps = elliptic_components(sol)
    degs = [weighted_degree_rf(comps[k], ELLIPTIC_WEIGHTS) for k in ("s21", "a", "b")]
    assert degs == [4, 6, 8]
    assert str(comps["s21"]) == "1/12*a*s22^2 - s21^2"
    assert comps["s22"].is_zero()


def test_elliptic_borel_fields_have_no_base_part(chart):
    sol = elliptic_solve(ELLIPTIC_ELEMENTS["nilpotent"], chart)
    assert sol.ok and sol.base["a"].is_zero() and sol.base["b"].is_zero()


def test_elliptic_grading_field_is_euler(chart):
    comps = elliptic_components(elliptic_solve(ELLIPTIC_ELEMENTS["grading"], chart))
    assert str(comps["a"]) == "-4*a" and str(comps["b"]) == "-6*b"


def test_elliptic_fields_represent_the_bracket(chart):
    E = ELLIPTIC_ELEMENTS

    def field(g):
        return elliptic_components(elliptic_solve(g, chart))

    def lie(X, Y):
        zero = X["a"] - X["a"]
        return {i: sum((X[j] * Y[i].diff(j) - Y[j] * X[i].diff(j) for j in X), zero) for i in X}

    names = list(E)
    for i in range(3):
        for j in range(i + 1, 3):
            g, h = E[names[i]], E[names[j]]
            L, R = lie(field(g), field(h)), field(bracket(g, h))
            assert all((L[k] - R[k]).is_zero() for k in L)


def test_elliptic_rejects_non_algebra_element(chart):
    with pytest.raises(PreconditionError):
        elliptic_solve(to_q([[1, 2], [3, 4]]), chart)


# ---------------------------------------------------------------- K3 tier

@pytest.fixture(scope="module")
def k3_setup(cd):
    rng = random.Random(5)
    from gmcd.gauss_manin import sigma_factors
    pt = sample_off_sigma(cd.param_names, rng, sigma_factors(cd.ring))
    Omega, S10, S11 = random_admissible(rng, PSI)
    S = s_complete(S10, S11, Omega, PSI)
    return pt, S, k3_frame_data(pt, Omega)


def test_k3_frame_is_transversal(k3_setup):
    _, _, data = k3_setup
    assert data.transversal and data.frame_rank == 5


@pytest.mark.parametrize("name", ["g1", "g2", "g3", "g4", "g5", "g6"])
def test_k3_lie_g_fields_have_no_base_part(k3_setup, name):
    _, S, data = k3_setup
    sol = vf_solve(S, data.A, load_matrix(name), PSI, K3_SHAPE)
    assert sol.ok
    assert all(v == 0 for v in sol.base.values())


def test_k3_g0_field_is_minus_euler(k3_setup):
    pt, S, data = k3_setup
    sol = vf_solve(S, data.A, load_matrix("g0"), PSI, K3_SHAPE)
    assert sol.ok
    assert {k: sol.base[k] / pt[k] for k in "abcd"} == {"a": -4, "b": -6, "c": -10, "d": -12}


def test_k3_full_amsy_basis(k3_setup):
    _, S, data = k3_setup
    for g in amsy_basis(PSI):
        assert vf_solve(S, data.A, g, PSI, K3_SHAPE).ok


@given(st.lists(st.integers(-3, 3), min_size=10, max_size=10))
@settings(max_examples=10, deadline=None)
def test_k3_solver_is_linear(k3_setup, cs):
    _, S, data = k3_setup
    basis = amsy_basis(PSI)
    g1 = [[sum(c * b[i][j] for c, b in zip(cs[:5], basis[:5])) for j in range(5)] for i in range(5)]
    g2 = [[sum(c * b[i][j] for c, b in zip(cs[5:], basis[5:])) for j in range(5)] for i in range(5)]
    gs = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(g1, g2)]
    s1, s2, s = (vf_solve(S, data.A, g, PSI, K3_SHAPE) for g in (g1, g2, gs))
    assert all(s.base[k] == s1.base[k] + s2.base[k] for k in s.base)
    assert all(s.frame[k] == s1.frame[k] + s2.frame[k] for k in s.frame)


def test_k3_solve_points_certificates():
    res = k3_solve_points(load_matrix("g0"), n_points=3, seed=11)
    assert all(r.solution.ok for r in res)


# ---------------------------------------------------------------- actions

def test_scaling_identity_and_errors():
    p = (mpq(1), mpq(2), mpq(3), mpq(4))
    assert scaling_action(p, 1) == p and lambda_action(p, 1) == p
    with pytest.raises(ValueError):
        scaling_action(p, 0)
    with pytest.raises(ValueError):
        lambda_action(p, 0)


@given(st.fractions(min_value=-5, max_value=5).filter(bool))
def test_lambda_of_q_squared_is_scaling_by_inverse_q(q):
    p = (mpq(2), mpq(-1), mpq(3, 7), mpq(5))
    q = mpq(q.numerator, q.denominator)
    assert lambda_action(p, q * q) == scaling_action(p, 1 / q)


@pytest.mark.parametrize("seed", range(10))
def test_d4_vanishing_preserved(seed, cd):
    from gmcd.algebra import MultiPoly
    D4 = load_locus("D4", cd.ring)
    rng = random.Random(seed)
    lam = mpq(rng.randint(1, 9), rng.randint(1, 9))
    a, b, c = (mpq(rng.randint(-9, 9)) for _ in range(3))
    # quasi-homogeneity of weight 30 implies the zero locus is preserved
    p = {"a": a, "b": b, "c": c, "d": mpq(rng.randint(-9, 9)), "s": 0}
    pa = dict(zip("abcd", lambda_action([p[k] for k in "abcd"], lam)), s=0)
    assert D4.value_at(pa) == lam ** 30 * D4.value_at(p)


def test_group_membership():
    I = [[mpq(int(i == j)) for j in range(5)] for i in range(5)]
    assert group_membership(I, PSI)
    g1 = load_matrix("g1")
    assert group_membership([[I[i][j] + g1[i][j] for j in range(5)] for i in range(5)], PSI)
    swap = [row[:] for row in I]
    swap[0], swap[4] = swap[4], swap[0]
    assert not group_membership(swap, PSI)
