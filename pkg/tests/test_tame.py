import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from gmcd.algebra import MultiPoly, VarTable, parse_poly, poly_ring
from gmcd.linalg import det
from gmcd.tame import (
    GoldenDataError, NotTameError, PARAM_WEIGHTS, TamePolynomial, discriminant,
    discriminant_probabilistic, discriminant_symbolic, load_d_table, load_locus,
    locus_load_and_check, sample_point, singularity_probe, tjurina_annihilation_check,
    weighted_degree_in,
)

APPENDIX_BASIS = {"1", "w", "y", "x", "w^2", "x*w", "x*y", "w^3", "x*w^2", "x*w^3"}


def test_cd_basis(cd):
    assert cd.mu == 10
    assert set(cd.basis_labels()) == APPENDIX_BASIS
    assert cd.d == 24 and cd.weights == [8, 9, 6]


def test_elliptic_basis(ell):
    assert ell.basis_labels() == ["1", "x"]


def test_custom_quadric():
    ring = VarTable(["x", "y"], [1, 1], ["fiber", "fiber"])
    t = TamePolynomial(parse_poly("x^2 + y^2", ring))
    assert t.basis_labels() == ["1"]


def test_non_tame_rejected():
    ring = VarTable(["x", "y", "a"], [1, 1, 0], ["fiber", "fiber", "parameter"])
    with pytest.raises(NotTameError):
        TamePolynomial(parse_poly("a*x^2 + y^2", ring))


@given(st.lists(st.integers(-4, 4), min_size=10, max_size=10))
@settings(max_examples=20, deadline=None)
def test_milnor_reduction_reconstructs(cd, cs):
    ring = cd.ring
    x, y, w = (MultiPoly.var(ring, v) for v in "xyw")
    a = MultiPoly.var(ring, "a")
    P = cs[0] * x ** 3 * w + cs[1] * y ** 2 * x + cs[2] * a * w ** 4 + cs[3] * x * y * w + cs[4]
    red = cd.milnor_reduce(P)
    assert cd.check_reduction(P, red)


def test_discriminant_elliptic_exact(ell):
    assert discriminant_symbolic(ell) == parse_poly("b^2 - 1/27*a^3", ell.ring)


def test_discriminant_cd_symbolic_equals_appendix(cd):
    assert discriminant_symbolic(cd, None) == load_locus("Delta_f", cd.ring)


def test_discriminant_probabilistic_ratio(cd):
    s = MultiPoly.var(cd.ring, "s")
    rep = discriminant_probabilistic(cd, load_locus("Delta_f", cd.ring), seed=3, trials=20, avoid=[s])
    assert rep.consistent and rep.ratio == 1
    # each point agrees exactly, independently of the symbolic expansion
    T = cd.mult_by_f_matrix()
    for pt, (dv, cv) in list(zip(rep.points, rep.per_point))[:3]:
        assert det([[e.value_at(pt) for e in row] for row in T]) == dv == cv


def test_discriminant_probabilistic_detects_wrong_candidate(cd):
    wrong = load_locus("Delta_f", cd.ring) + MultiPoly.var(cd.ring, "a")
    rep = discriminant_probabilistic(cd, wrong, seed=1, trials=5)
    assert not rep.consistent


def test_discriminant_budget_falls_back(cd):
    res = discriminant(cd, "symbolic", candidate=load_locus("Delta_f", cd.ring), term_budget=10, trials=3)
    assert res.mode == "probabilistic" and res.report.consistent


def test_tjurina_certificate(cd):
    D = load_locus("Delta_f", cd.ring)
    cert = tjurina_annihilation_check(cd, D, D)
    assert cert.holds and cert.scale is None
    assert cert.verify(cd, D)


def test_tjurina_specialized_unit_fails_on_singular_fiber(cd):
    # s = 0 lies on the discriminant, so 1 is not in Jacob(f) + <f>
    tp = cd.specialize({"a": 1, "b": 2, "c": 3, "d": 4, "s": 0})
    assert not tjurina_annihilation_check(tp, MultiPoly.const(tp.ring, 1)).holds


def test_tjurina_specialized_unit_holds_off_discriminant(cd, rng):
    D = load_locus("Delta_f", cd.ring)
    pt = sample_point(cd.param_names, rng, [D])
    tp = cd.specialize(pt)
    one = MultiPoly.const(tp.ring, 1)
    cert = tjurina_annihilation_check(tp, one)
    assert cert.holds and cert.verify(tp, one)


def test_locus_relations():
    res = locus_load_and_check()
    assert res.ok, [n for n, ok in res.checks if not ok]


def test_locus_quasi_homogeneous_degrees():
    D = load_locus("Delta_f")
    assert weighted_degree_in(D, PARAM_WEIGHTS) is not None


def test_corrupted_locus_file_named(tmp_path):
    import shutil
    from gmcd.tame import DATA_DIR
    shutil.copytree(DATA_DIR, tmp_path / "data")
    f = tmp_path / "data" / "appendix" / "c_0_0_2.txt"
    f.write_text(f.read_text().replace("+", "-", 1))
    with pytest.raises(GoldenDataError, match="b_1_0_0"):
        locus_load_and_check(tmp_path / "data")


def test_d_table_covers_basis(cd):
    table = load_d_table()
    assert set(table) == set(cd.basis)


@pytest.mark.parametrize("which, c, expected", [("O", 5, (11, 2)), ("P", 5, (5, 2)), ("P", 0, (6, 1))])
def test_singularity_probes(which, c, expected):
    r = singularity_probe({"a": 2, "b": -3, "c": c, "d": 7}, which)
    assert (r.local_milnor_number, r.hessian_rank) == expected
