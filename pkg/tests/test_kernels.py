import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from gmcd import _pykernels, kernels

ckernels = pytest.importorskip("gmcd._ckernels")

coef = st.integers(-50, 50).map(mpq)
terms = st.dictionaries(st.tuples(*[st.integers(0, 4)] * 3), coef.filter(bool), max_size=8)


@given(terms, terms)
def test_mul_agrees(a, b):
    assert ckernels.mul_terms(a, b) == _pykernels.mul_terms(a, b)


@given(terms, terms, coef)
def test_add_agrees(a, b, c):
    assert ckernels.add_terms(a, b, c) == _pykernels.add_terms(a, b, c)


@given(terms, terms, coef, st.tuples(*[st.integers(0, 2)] * 3))
def test_addmul_agrees(a, b, c, shift):
    x, y = dict(a), dict(a)
    ckernels.addmul_inplace(x, b, c, shift)
    _pykernels.addmul_inplace(y, b, c, shift)
    assert x == y


@given(terms, st.tuples(*[st.integers(-3, 3).map(mpq)] * 3))
def test_eval_agrees(a, vals):
    assert ckernels.eval_terms(a, list(vals)) == _pykernels.eval_terms(a, list(vals))


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
