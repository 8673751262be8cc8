# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_pykernels``."""
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM, PyTuple_GET_ITEM
from cpython.ref cimport Py_INCREF


cdef inline tuple _add_exp(tuple ea, tuple eb, Py_ssize_t n):
    cdef tuple r = PyTuple_New(n)
    cdef Py_ssize_t i
    cdef object v
    for i in range(n):
        v = <long>(<object>PyTuple_GET_ITEM(ea, i)) + <long>(<object>PyTuple_GET_ITEM(eb, i))
        Py_INCREF(v)
        PyTuple_SET_ITEM(r, i, v)
    return r


def mul_terms(dict a, dict b):
    if len(a) < len(b):
        a, b = b, a
    cdef dict out = {}
    cdef tuple ea, eb, e
    cdef object ca, cb, v
    cdef Py_ssize_t n
    if not a or not b:
        return out
    n = len(next(iter(a)))
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = _add_exp(ea, eb, n)
            v = out.get(e)
            if v is None:
                out[e] = ca * cb
            else:
                out[e] = v + ca * cb
    return {e: v for e, v in out.items() if v}


def add_terms(dict a, dict b, scale=1):
    cdef dict out = dict(a)
    cdef object e, c, v
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c * scale
        else:
            v = v + c * scale
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def addmul_inplace(dict acc, dict b, coef, tuple shift):
    cdef tuple e, e2
    cdef object c, v
    cdef Py_ssize_t n = len(shift)
    for e, c in b.items():
        e2 = _add_exp(e, shift, n)
        v = acc.get(e2)
        if v is None:
            acc[e2] = coef * c
        else:
            v = v + coef * c
            if v:
                acc[e2] = v
            else:
                del acc[e2]


def eval_terms(dict terms, list values):
    cdef object total = 0
    cdef object t, v
    cdef tuple e
    cdef Py_ssize_t i, n
    for e, c in terms.items():
        t = c
        n = len(e)
        for i in range(n):
            k = e[i]
            if k:
                t = t * values[i] ** k
        total = total + t
    return total
