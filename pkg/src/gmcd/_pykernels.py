"""Pure-Python sparse polynomial kernels.

Polynomials are plain dicts mapping exponent tuples to nonzero coefficients.
The compiled module ``_ckernels`` exposes the same functions.
"""


def mul_terms(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple([i + j for i, j in zip(ea, eb)])
            v = get(e)
            out[e] = ca * cb if v is None else v + ca * cb
    return {e: c for e, c in out.items() if c}


def add_terms(a, b, scale=1):
    out = dict(a)
    get = out.get
    for e, c in b.items():
        v = get(e)
        if v is None:
            out[e] = c * scale
        else:
            v = v + c * scale
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def addmul_inplace(acc, b, coef, shift):
    """acc += coef * x^shift * b, in place; zero entries are removed."""
    get = acc.get
    for e, c in b.items():
        e2 = tuple([i + j for i, j in zip(e, shift)])
        v = get(e2)
        if v is None:
            acc[e2] = coef * c
        else:
            v = v + coef * c
            if v:
                acc[e2] = v
            else:
                del acc[e2]


def eval_terms(terms, values):
    """Evaluate at a full point given as a list of coefficient-ring values."""
    total = 0
    for e, c in terms.items():
        t = c
        for v, k in zip(values, e):
            if k:
                t = t * v ** k
        total = total + t
    return total
