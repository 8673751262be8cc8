import random

import pytest
from gmpy2 import mpq

from gmcd.lie import load_matrix, psi_matrix
from gmcd.linalg import matmul
from gmcd.moduli import amsy_basis
from gmcd.period import (
    SiegelPoint, SiegelPointError, ToleranceProfile, compose_check, evaluate, is_zero_poly_matrix,
    orthogonality_residual, pi_membership, resolve_variant, sample_siegel, t_abs_map, t_map,
    t_map_displayed, tangent_check,
)

PSI = psi_matrix()
I2 = SiegelPoint(1j, 0j, 1j)


def test_row_four_of_displayed_map():
    T = t_map_displayed()
    assert [str(x) for x in T[3]] == ["t1", "1", "0", "0", "0"]


def test_variant_resolution():
    r = resolve_variant(PSI)
    assert r.passing == ["last-row-e1"] and r.orientation == "transpose"
    assert not any(v for k, v in r.detail.items() if k.endswith("as-printed"))


def test_resolved_map_is_orthogonal():
    assert is_zero_poly_matrix(orthogonality_residual(t_map(), PSI))


def test_other_variant_fails():
    assert not is_zero_poly_matrix(orthogonality_residual(t_map("last-row-e1e4e5"), PSI))


def test_t_abs_symplectic():
    assert is_zero_poly_matrix(orthogonality_residual(t_abs_map(), load_matrix("psi_abs")))


def test_t_abs_at_i():
    N = evaluate(t_abs_map(), I2)
    assert N == [[1j, 0, -1, 0], [0, 1j, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]


def test_member_at_i():
    r = pi_membership(t_map(), PSI, tau=I2)
    assert r.exact and r.member


def test_identity_fails_positivity():
    I = [[mpq(int(i == j)) for j in range(5)] for i in range(5)]
    r = pi_membership(I, PSI)
    assert r.orthogonal and not r.positive


def test_perturbation_fails_orthogonality():
    N = evaluate(t_map(), I2)
    N[0][0] += 0.5
    assert not pi_membership(N, PSI).orthogonal


def test_non_square_rejected():
    with pytest.raises(ValueError):
        pi_membership([[1, 2]], PSI)


@pytest.mark.parametrize("seed", range(5))
def test_random_members(seed):
    tau = sample_siegel(random.Random(seed))
    r = pi_membership(t_map(), PSI, tau=tau)
    assert r.member and r.orthogonality_residual < 1e-9


def test_siegel_point_validation():
    with pytest.raises(SiegelPointError):
        SiegelPoint(-1j, 0j, 1j)
    with pytest.raises(SiegelPointError):
        SiegelPoint(1j, 2j, 1j)


def test_tolerance_profile():
    with pytest.raises(ValueError):
        ToleranceProfile(eps=0)


@pytest.mark.parametrize("seed", range(5))
def test_lie_fields_tangent(seed):
    N = evaluate(t_map(), sample_siegel(random.Random(seed)))
    for g in amsy_basis(PSI):
        X = [[sum(N[i][k] * complex(float(g[k][j])) for k in range(5)) for j in range(5)]
             for i in range(5)]
        assert tangent_check(N, X)


def test_tangent_trivial_and_generic_failure():
    N = evaluate(t_map(), I2)
    assert tangent_check(N, [[0j] * 5 for _ in range(5)])
    assert not tangent_check(N, N)


def test_compose_normalization():
    r = compose_check()
    assert r.equal and not r.diagonal_only
    from gmcd.period import read_conventions
    conv = read_conventions()
    n1 = [[mpq(x) for x in row.split()] for row in conv["compose_N1"].split(";")]
    assert n1 == r.left


def test_compose_entry_four_one():
    assert str(t_map()[0][3]) == "t1"
