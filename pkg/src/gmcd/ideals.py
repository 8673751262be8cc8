"""Groebner bases over the rationals, normal forms and local algebra probes.

Every basis element remembers how it was built from the input generators, so
normal forms can report cofactors either against the basis or against the
original generators (the partial derivatives, for Jacobian ideals).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import kernels
from .algebra import (
    ONE,
    ZERO,
    Exponent,
    MonomialOrder,
    MultiPoly,
    VarTable,
    canonical_order,
)


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


class _Tracked:
    """A polynomial plus its expression in the original generators."""

    __slots__ = ("terms", "rep")

    def __init__(self, terms, rep):
        self.terms = terms          # dict exponent -> mpq
        self.rep = rep              # list of dicts, one per original generator

    def scaled(self, c):
        return _Tracked({e: v * c for e, v in self.terms.items()},
                        [{e: v * c for e, v in r.items()} for r in self.rep])


def _addmul(acc: _Tracked, other: _Tracked, coef, shift):
    kernels.addmul_inplace(acc.terms, other.terms, coef, shift)
    for r, o in zip(acc.rep, other.rep):
        kernels.addmul_inplace(r, o, coef, shift)


@dataclass
class GroebnerBasis:
    generators: List[MultiPoly]
    order: MonomialOrder
    reduced: bool = True
    originals: List[MultiPoly] = field(default_factory=list)
    # representation of each generator in terms of ``originals``
    representations: List[List[MultiPoly]] = field(default_factory=list)

    @property
    def ring(self) -> VarTable:
        return self.order.ring

    def leading_monomials(self) -> List[Exponent]:
        return [g.leading_term(self.order)[0] for g in self.generators]

    def __len__(self):
        return len(self.generators)


def _reduce_tracked(p: _Tracked, basis: List[_Tracked], lts, key, full=True) -> _Tracked:
    """Reduce ``p`` by ``basis`` (fully when ``full``), updating its representation."""
    rem: Dict[Exponent, mpq] = {}
    work = p
    while work.terms:
        e = max(work.terms, key=key)
        c = work.terms[e]
        for b, (le, lc) in zip(basis, lts):
            if _divides(le, e):
                _addmul(work, b, -c / lc, _sub(e, le))
                break
        else:
            if not full:
                break
            rem[e] = c
            del work.terms[e]
    work.terms.update(rem)
    return work


def buchberger(generators: Sequence[MultiPoly], order: MonomialOrder = None) -> GroebnerBasis:
    """Reduced Groebner basis with normal pair selection and both criteria."""
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        raise ValueError("need at least one nonzero generator")
    ring = gens[0].ring
    if any(g.ring != ring for g in gens):
        raise ValueError("generators live in different rings")
    order = order or canonical_order(ring)
    key = order.key
    m = len(gens)
    n = len(ring)
    zero_e = (0,) * n

    basis: List[_Tracked] = []
    lts: List[Tuple[Exponent, mpq]] = []
    pairs: list = []

    def wdeg(e):
        return ring.wdeg(e) if any(ring.weights) else sum(e)

    def add(t: _Tracked):
        le = max(t.terms, key=key)
        lc = t.terms[le]
        idx = len(basis)
        basis.append(t)
        lts.append((le, lc))
        for j in range(idx):
            if basis[j] is None:
                continue
            l = _lcm(lts[j][0], le)
            heapq.heappush(pairs, (wdeg(l), key(l), j, idx, l))

    for i, g in enumerate(gens):
        rep = [dict() for _ in range(m)]
        rep[i] = {zero_e: ONE}
        t = _Tracked(dict(g.terms), rep)
        active = [(b, lt) for b, lt in zip(basis, lts) if b is not None]
        t = _reduce_tracked(t, [b for b, _ in active], [lt for _, lt in active], key)
        if t.terms:
            add(t)

    done = set()
    while pairs:
        _, _, i, j, l = heapq.heappop(pairs)
        if basis[i] is None or basis[j] is None:
            continue
        done.add((i, j))
        ei, ci = lts[i]
        ej, cj = lts[j]
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or basis[k] is None:
                continue
            if _divides(lts[k][0], l):
                p1 = (min(i, k), max(i, k))
                p2 = (min(j, k), max(j, k))
                if p1 in done and p2 in done:
                    skip = True
                    break
        if skip:
            continue
        s = _Tracked({}, [dict() for _ in range(m)])
        _addmul(s, basis[i], ONE / ci, _sub(l, ei))
        _addmul(s, basis[j], -ONE / cj, _sub(l, ej))
        active = [k for k in range(len(basis)) if basis[k] is not None]
        s = _reduce_tracked(s, [basis[k] for k in active], [lts[k] for k in active], key)
        if s.terms:
            add(s)

    # minimalize, normalize, interreduce
    keep = [k for k in range(len(basis)) if basis[k] is not None]
    minimal = []
    for k in keep:
        le = lts[k][0]
        if not any(o != k and _divides(lts[o][0], le) and (lts[o][0] != le or o < k) for o in keep):
            minimal.append(k)
    elems = [basis[k].scaled(ONE / lts[k][1]) for k in minimal]
    for idx in range(len(elems)):
        el = elems[idx]
        others = elems[:idx] + elems[idx + 1:]
        olts = [(max(o.terms, key=key), ONE) for o in others]
        le = max(el.terms, key=key)
        lc = el.terms.pop(le)
        # leading monomials are pairwise non-dividing, so only the tail moves
        tail = _reduce_tracked(el, others, olts, key)
        tail.terms[le] = lc
        elems[idx] = tail
    elems.sort(key=lambda t: key(max(t.terms, key=key)))
    gb = GroebnerBasis(
        generators=[MultiPoly(ring, t.terms, _clean=True) for t in elems],
        order=order,
        reduced=True,
        originals=list(gens),
        representations=[[MultiPoly(ring, {e: c for e, c in r.items() if c}, _clean=True)
                          for r in t.rep] for t in elems],
    )
    return gb


def normal_form(p: MultiPoly, gb: GroebnerBasis, original=False):
    """Return ``(remainder, cofactors)``.

    Cofactors are against ``gb.generators``, or against the original input
    generators when ``original`` is true.
    """
    key = gb.order.key
    ring = gb.ring
    lts = [g.leading_term(gb.order) for g in gb.generators]
    cof = [dict() for _ in gb.generators]
    rem: Dict[Exponent, mpq] = {}
    work = dict(p.terms)
    while work:
        e = max(work, key=key)
        c = work[e]
        for i, (le, lc) in enumerate(lts):
            if _divides(le, e):
                q = c / lc
                shift = _sub(e, le)
                cof[i][shift] = cof[i].get(shift, ZERO) + q
                kernels.addmul_inplace(work, gb.generators[i].terms, -q, shift)
                break
        else:
            rem[e] = c
            del work[e]
    remainder = MultiPoly(ring, rem, _clean=True)
    cofs = [MultiPoly(ring, {e: c for e, c in d.items() if c}, _clean=True) for d in cof]
    if original:
        out = [MultiPoly(ring) for _ in gb.originals]
        for c, rep in zip(cofs, gb.representations):
            if c.is_zero():
                continue
            for k, r in enumerate(rep):
                if not r.is_zero():
                    out[k] = out[k] + c * r
        cofs = out
    return remainder, cofs


INFINITE = "infinite"


@dataclass
class StandardMonomialSet:
    monomials: object            # list of exponents, or INFINITE
    leading_terms: List[Exponent]

    @property
    def finite(self):
        return self.monomials != INFINITE

    def __len__(self):
        if not self.finite:
            raise ValueError("quotient is infinite-dimensional")
        return len(self.monomials)


def standard_monomials(gb: GroebnerBasis, variables: Optional[Sequence[str]] = None) -> StandardMonomialSet:
    """Monomials (in ``variables``, default all) not divisible by any leading term."""
    ring = gb.ring
    lts = gb.leading_monomials()
    idx = [ring.index(v) for v in variables] if variables else list(range(len(ring)))
    # finiteness: each variable needs a pure power among the leading terms
    bounds = {}
    for i in idx:
        powers = [le[i] for le in lts if all(le[j] == 0 for j in range(len(ring)) if j != i)]
        if not powers:
            return StandardMonomialSet(INFINITE, lts)
        bounds[i] = min(powers)
    out = []
    n = len(ring)

    def rec(pos, cur):
        if pos == len(idx):
            e = tuple(cur)
            if not any(_divides(le, e) for le in lts):
                out.append(e)
            return
        i = idx[pos]
        for k in range(bounds[i]):
            cur[i] = k
            e = tuple(cur)
            if any(_divides(le, e) for le in lts):
                break
            rec(pos + 1, cur)
        cur[i] = 0

    rec(0, [0] * n)
    out.sort(key=gb.order.key)
    return StandardMonomialSet(out, lts)


# ---------------------------------------------------------------- local probes

NOT_FINITE = "not-finite"


@dataclass
class LocalProbeResult:
    local_milnor_number: object  # int or NOT_FINITE
    hessian_rank: int
    truncation_degree_used: int
    history: List[Tuple[int, int]] = field(default_factory=list)


def _monomials_below(nvars: int, N: int) -> List[Exponent]:
    out = []
    for deg in range(N):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _sparse_rank(rows: List[Dict[int, mpq]]) -> int:
    """Exact rank over Q; pivots on the smallest column index."""
    pivots: Dict[int, Dict[int, mpq]] = {}
    for row in rows:
        r = dict(row)
        while r:
            col = min(r)
            prow = pivots.get(col)
            if prow is None:
                c = r[col]
                pivots[col] = {k: v / c for k, v in r.items()}
                break
            c = r[col]
            for k, v in prow.items():
                nv = r.get(k, ZERO) - c * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return len(pivots)


def _truncated_dim(parts: List[Dict[Exponent, mpq]], nvars: int, N: int) -> int:
    mons = _monomials_below(nvars, N)
    index = {e: i for i, e in enumerate(mons)}
    rows = []
    for a in mons:
        for p in parts:
            row = {}
            for e, c in p.items():
                e2 = tuple(x + y for x, y in zip(a, e))
                if sum(e2) < N:
                    row[index[e2]] = c
            if row:
                rows.append(row)
    return len(mons) - _sparse_rank(rows)


def local_algebra_dim(p: MultiPoly, local_vars: Sequence[str], degree_cap: int = 16,
                      max_cap: int = 128) -> LocalProbeResult:
    """Milnor number at the origin via the truncations dim Q[x]/(J + m^N).

    ``p`` may only involve ``local_vars``.  Equal dimensions at N and N+1 give
    m^N in J + m^(N+1), hence m^N in J locally (Nakayama), so the value is
    final; the loop asks for this twice in a row before accepting.
    """
    ring = p.ring
    extra = [v for v in p.variables() if v not in local_vars]
    if extra:
        raise ValueError(f"specialize {extra} before probing")
    idx = [ring.index(v) for v in local_vars]
    zero = {v: 0 for v in local_vars}
    if p.value_at(zero) != 0:
        raise ValueError("polynomial does not vanish at the origin")

    def local(q: MultiPoly):
        return {tuple(e[i] for i in idx): c for e, c in q.terms.items()}

    partials = [local(p.diff(v)) for v in local_vars]
    hess = [[p.diff(u).diff(v).value_at(zero) for v in local_vars] for u in local_vars]
    hrank = _sparse_rank([{j: c for j, c in enumerate(r) if c} for r in hess])

    nv = len(local_vars)
    history = []
    cap = degree_cap
    N = 1
    prev = _truncated_dim(partials, nv, N)
    history.append((N, prev))
    stable = 0
    while True:
        N += 1
        if N > cap:
            if cap >= max_cap:
                return LocalProbeResult(NOT_FINITE, hrank, N - 1, history)
            cap *= 2
        cur = _truncated_dim(partials, nv, N)
        history.append((N, cur))
        stable = stable + 1 if cur == prev else 0
        if stable >= 2:
            return LocalProbeResult(cur, hrank, N, history)
        prev = cur
