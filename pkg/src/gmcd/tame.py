"""Tame polynomials: Milnor bases, multiplication by f, discriminants and the
Tjurina certificate.

Internally a polynomial is split into fiber monomials with coefficients in
the parameter ring: ``{fiber exponent: {parameter exponent: mpq}}``.  Because
the leading part g has rational coefficients, the Groebner basis of its
Jacobian ideal lives over Q and reduction modulo Jacob(f) lifts it degree by
degree without ever dividing by a parameter.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import kernels
from .algebra import (
    ONE,
    ZERO,
    Exponent,
    MultiPoly,
    VarTable,
    canonical_order,
    exact_divide,
    parse_poly,
    poly_ring,
    to_rational,
)
from .ideals import INFINITE, buchberger, normal_form, standard_monomials
from .linalg import BudgetExceeded, bareiss_det, det

Split = Dict[Exponent, Dict[Exponent, mpq]]


class NotTameError(ValueError):
    pass


class ConsistencyError(AssertionError):
    pass


class _JacobianTable:
    """Reduction data of fiber monomials modulo Jacob(g), over Q."""

    def __init__(self, g: MultiPoly, fiber_ring: VarTable):
        self.ring = fiber_ring
        self.partials = [g.diff(v) for v in fiber_ring.names]
        self.gb = buchberger(self.partials)
        sm = standard_monomials(self.gb)
        if not sm.finite:
            raise NotTameError("Milnor algebra of the leading part is infinite-dimensional "
                               f"(leading terms {sm.leading_terms})")
        self.basis: List[Exponent] = list(sm.monomials)
        self.index = {e: i for i, e in enumerate(self.basis)}
        self._cache: Dict[Exponent, tuple] = {}

    def reduce_monomial(self, e: Exponent):
        """x^e = sum c_b x^b + sum h_i dg/dx_i, as ({b: c}, [h_i terms])."""
        hit = self._cache.get(e)
        if hit is None:
            rem, cofs = normal_form(MultiPoly.monomial(self.ring, e), self.gb, original=True)
            coords = {self.index[b]: c for b, c in rem.terms.items()}
            hit = (coords, [dict(h.terms) for h in cofs])
            self._cache[e] = hit
        return hit


_TABLES: Dict[tuple, _JacobianTable] = {}


@dataclass
class MilnorReduction:
    coords: List[MultiPoly]          # parameter polynomials, one per basis monomial
    cofactors: List[MultiPoly]       # Q_i with P - sum coords*x^b = sum Q_i df/dx_i


class TamePolynomial:
    """A tame polynomial with its Milnor basis taken from the leading part."""

    def __init__(self, f: MultiPoly, point: Optional[Mapping[str, object]] = None):
        ring = f.ring
        self.f = f
        self.ring = ring
        self.fiber_idx = list(ring.fiber)
        self.param_idx = list(ring.params)
        self.fiber_names = [ring.names[i] for i in self.fiber_idx]
        self.param_names = [ring.names[i] for i in self.param_idx]
        self.point = dict(point or {})
        g = f.leading_part()
        if any(any(e[i] for i in self.param_idx) for e in g.terms):
            raise NotTameError("leading part must have rational coefficients")
        self.g = g
        self.d = g.wdeg()
        self.weights = [ring.weights[i] for i in self.fiber_idx]
        fring = VarTable(self.fiber_names, self.weights)
        gf = MultiPoly(fring, {tuple(e[i] for i in self.fiber_idx): c for e, c in g.terms.items()},
                       _clean=True)
        key = (tuple(self.fiber_names), tuple(self.weights), frozenset(gf.terms.items()))
        table = _TABLES.get(key)
        if table is None:
            table = _TABLES[key] = _JacobianTable(gf, fring)
        self.table = table
        self.basis: List[Exponent] = table.basis
        self.mu = len(self.basis)
        self.partials = [f.diff(v) for v in self.fiber_names]
        self._low = [self._split(df - dg) for df, dg in
                     zip(self.partials, [g.diff(v) for v in self.fiber_names])]
        self._T = None

    # ---- representation helpers
    def _split(self, p: MultiPoly) -> Split:
        fi, pi = self.fiber_idx, self.param_idx
        out: Split = {}
        for e, c in p.terms.items():
            fe = tuple(e[i] for i in fi)
            pe = tuple(e[i] for i in pi)
            out.setdefault(fe, {})[pe] = c
        return out

    def _join(self, s: Split) -> MultiPoly:
        n = len(self.ring)
        fi, pi = self.fiber_idx, self.param_idx
        terms = {}
        for fe, cd in s.items():
            for pe, c in cd.items():
                e = [0] * n
                for i, k in zip(fi, fe):
                    e[i] = k
                for i, k in zip(pi, pe):
                    e[i] = k
                terms[tuple(e)] = c
        return MultiPoly(self.ring, terms, _clean=True)

    def _param_poly(self, cd: Dict[Exponent, mpq]) -> MultiPoly:
        return self._join({(0,) * len(self.fiber_idx): cd}) if cd else MultiPoly(self.ring)

    def basis_poly(self, i: int) -> MultiPoly:
        e = [0] * len(self.ring)
        for j, k in zip(self.fiber_idx, self.basis[i]):
            e[j] = k
        return MultiPoly.monomial(self.ring, e)

    def basis_labels(self) -> List[str]:
        from .algebra import format_monomial
        fr = VarTable(self.fiber_names, self.weights)
        return [format_monomial(fr, e) or "1" for e in self.basis]

    def fdeg(self, fe: Exponent) -> int:
        return sum(w * k for w, k in zip(self.weights, fe))

    def with_polynomial(self, f: MultiPoly) -> "TamePolynomial":
        return TamePolynomial(f, self.point)

    # ---- specialization
    def specialize(self, point: Mapping[str, object]) -> "TamePolynomial":
        """Substitute rationals for all parameters; the result lives in the fiber ring."""
        missing = [p for p in self.param_names if p not in point]
        if missing:
            raise ValueError(f"point misses parameters {missing}")
        fring = VarTable(self.fiber_names, self.weights)
        val = self.f.evaluate({p: point[p] for p in self.param_names})
        fs = MultiPoly(fring, {tuple(e[i] for i in self.fiber_idx): c for e, c in val.terms.items()},
                       _clean=True)
        return TamePolynomial(fs, {p: to_rational(point[p]) for p in self.param_names})

    def to_fiber(self, p: MultiPoly, tp: "TamePolynomial") -> MultiPoly:
        """Move a polynomial of this ring into the ring of a specialization ``tp``."""
        val = p.evaluate({k: v for k, v in tp.point.items() if k in self.ring})
        return MultiPoly(tp.ring, {tuple(e[i] for i in self.fiber_idx): c for e, c in val.terms.items()},
                         _clean=True)

    # ---- Milnor reduction
    def reduce_split(self, work: Split):
        """Destructively reduce ``work``; returns (coords, cofactors) in split form."""
        basis_index = self.table.index
        fdeg = self.fdeg
        npar = len(self.param_idx)
        zero_pe = (0,) * npar
        coords: List[Dict[Exponent, mpq]] = [dict() for _ in range(self.mu)]
        cof: List[Split] = [dict() for _ in self.fiber_idx]
        low = self._low
        while work:
            D = max(fdeg(fe) for fe in work)
            layer = [fe for fe in work if fdeg(fe) == D]
            for fe in layer:
                cd = work.pop(fe)
                if not cd:
                    continue
                b = basis_index.get(fe)
                if b is not None:
                    kernels.addmul_inplace(coords[b], cd, ONE, zero_pe)
                    continue
                bc, hs = self.table.reduce_monomial(fe)
                for b, q in bc.items():
                    kernels.addmul_inplace(coords[b], cd, q, zero_pe)
                for i, h in enumerate(hs):
                    if not h:
                        continue
                    Li = low[i]
                    Qi = cof[i]
                    for he, hq in h.items():
                        acc = Qi.get(he)
                        if acc is None:
                            acc = Qi[he] = {}
                        kernels.addmul_inplace(acc, cd, hq, zero_pe)
                        if not acc:
                            del Qi[he]
                        for le, lcd in Li.items():
                            tgt = tuple(x + y for x, y in zip(he, le))
                            acc = work.get(tgt)
                            if acc is None:
                                acc = work[tgt] = {}
                            kernels.addmul_inplace(acc, kernels.mul_terms(cd, lcd), -hq, zero_pe)
                            if not acc:
                                del work[tgt]
        return coords, cof

    def milnor_reduce(self, P: MultiPoly) -> MilnorReduction:
        if P.ring != self.ring:
            raise ValueError("polynomial lives in another ring")
        coords, cof = self.reduce_split(self._split(P))
        return MilnorReduction([self._param_poly(c) for c in coords], [self._join(q) for q in cof])

    def check_reduction(self, P: MultiPoly, red: MilnorReduction) -> bool:
        acc = sum((c * self.basis_poly(i) for i, c in enumerate(red.coords)), MultiPoly(self.ring))
        acc = acc + sum((q * d for q, d in zip(red.cofactors, self.partials)), MultiPoly(self.ring))
        return acc == P

    def from_coords(self, coords: Sequence[MultiPoly]) -> MultiPoly:
        return sum((c * self.basis_poly(i) for i, c in enumerate(coords) if not c.is_zero()),
                   MultiPoly(self.ring))

    # ---- multiplication by f
    def mult_by_f_matrix(self) -> List[List[MultiPoly]]:
        """Column j holds the Milnor coordinates of f * x^(basis j)."""
        if self._T is None:
            cols = [self.milnor_reduce(self.f * self.basis_poly(j)).coords for j in range(self.mu)]
            self._T = [[cols[j][i] for j in range(self.mu)] for i in range(self.mu)]
        return self._T


def make_tame(f: MultiPoly) -> TamePolynomial:
    return TamePolynomial(f)


# ---------------------------------------------------------------- discriminant

def _sample_value(rng: random.Random) -> mpq:
    while True:
        num = rng.randint(-99, 99)
        den = rng.randint(1, 99)
        if num:
            return mpq(num, den)


def sample_point(names: Sequence[str], rng: random.Random, avoid: Sequence[MultiPoly] = (),
                 max_tries: int = 1000) -> Dict[str, mpq]:
    """Random rational point with all ``avoid`` polynomials nonzero."""
    for _ in range(max_tries):
        pt = {n: _sample_value(rng) for n in names}
        if all(p.value_at(pt) != 0 for p in avoid):
            return pt
    raise RuntimeError("could not find a sample point off the given locus")


@dataclass
class ProportionalityReport:
    ratio: Optional[mpq]
    points: List[Dict[str, mpq]]
    per_point: List[Tuple[mpq, mpq]]   # (det, candidate)
    seed: int
    consistent: bool
    detail: str = ""


def discriminant_symbolic(t: TamePolynomial, term_budget: Optional[int] = 200000) -> MultiPoly:
    """det(T_f) exactly by fraction-free elimination (may raise BudgetExceeded)."""
    return bareiss_det(t.mult_by_f_matrix(), term_budget=term_budget)


def discriminant_probabilistic(t: TamePolynomial, candidate: MultiPoly, seed: int = 0,
                               trials: int = 20, avoid: Sequence[MultiPoly] = ()) -> ProportionalityReport:
    """Compare det(T_f) against ``candidate`` at random rational points."""
    rng = random.Random(seed)
    T = t.mult_by_f_matrix()
    pts, vals = [], []
    ratios = set()
    for _ in range(trials):
        pt = sample_point(t.param_names, rng, avoid)
        Tv = [[e.value_at(pt) for e in row] for row in T]
        dv = det(Tv)
        cv = candidate.value_at(pt)
        pts.append(pt)
        vals.append((mpq(dv), cv))
        if cv == 0:
            ratios.add(None if dv else "both-zero")
        else:
            ratios.add(mpq(dv) / cv)
    nonzero = [r for r in ratios if isinstance(r, type(mpq(1)))]
    if all(cv == 0 for _, cv in vals):
        raise ArithmeticError("inconclusive: candidate vanished at every sample")
    ok = len(ratios) == 1 and len(nonzero) == 1 and nonzero[0] != 0
    return ProportionalityReport(nonzero[0] if ok else None, pts, vals, seed, ok,
                                 "" if ok else f"ratios {sorted(map(str, ratios))}")


@dataclass
class DiscriminantResult:
    mode: str
    polynomial: Optional[MultiPoly] = None
    report: Optional[ProportionalityReport] = None
    note: str = ""


def discriminant(t: TamePolynomial, mode: str = "symbolic", candidate: MultiPoly = None,
                 seed: int = 0, trials: int = 20, term_budget: Optional[int] = 200000,
                 avoid: Sequence[MultiPoly] = ()) -> DiscriminantResult:
    """det(T_f), exactly or verified against ``candidate`` up to a constant.

    In symbolic mode an exceeded term budget falls back to the probabilistic
    protocol when a candidate is available.
    """
    if mode == "symbolic":
        try:
            return DiscriminantResult("symbolic", polynomial=discriminant_symbolic(t, term_budget))
        except BudgetExceeded as exc:
            if candidate is None:
                raise
            rep = discriminant_probabilistic(t, candidate, seed, trials, avoid)
            return DiscriminantResult("probabilistic", report=rep, note=f"fallback: {exc}")
    if mode == "probabilistic":
        if candidate is None:
            raise ValueError("probabilistic mode needs a candidate polynomial")
        return DiscriminantResult("probabilistic",
                                  report=discriminant_probabilistic(t, candidate, seed, trials, avoid))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------- Tjurina

def shift_parameter(t: TamePolynomial) -> Optional[Tuple[str, mpq]]:
    """A parameter p with f = f0 + gamma*p, p absent from f0 (gamma rational)."""
    n = len(t.ring)
    for i in t.param_idx:
        occ = [(e, c) for e, c in t.f.terms.items() if e[i]]
        if len(occ) == 1:
            e, c = occ[0]
            unit = tuple(1 if j == i else 0 for j in range(n))
            if e == unit:
                return t.ring.names[i], c
    return None


def _charpoly_from_det(detpoly: MultiPoly, p: str, gamma: mpq, mu: int, ring) -> List[MultiPoly]:
    """Coefficients c_0..c_mu of det(sigma*I - T0) where T = T0 + gamma*p*I."""
    sign = -1 if mu % 2 else 1
    by_power = {}
    i = ring.index(p)
    for e, c in detpoly.terms.items():
        k = e[i]
        e2 = e[:i] + (0,) + e[i + 1:]
        by_power.setdefault(k, {})[e2] = c * sign / (-gamma) ** k
    out = [MultiPoly(ring, by_power.get(k, {}), _clean=True) for k in range(mu + 1)]
    if max(by_power) != mu or out[mu] != MultiPoly.const(ring, 1):
        raise ConsistencyError("determinant is not monic of degree mu in the shift parameter")
    return out


def adjugate_apply(t: TamePolynomial, v: Sequence[MultiPoly], detpoly: MultiPoly) -> List[MultiPoly]:
    """adj(T_f) v, via the Faddeev-LeVerrier recursion in the shift parameter."""
    T = t.mult_by_f_matrix()
    mu = t.mu
    sp = shift_parameter(t)
    ring = t.ring
    zero = MultiPoly(ring)
    if sp is None:
        # generic route: full adjugate with traces
        from .linalg import identity, matmul
        n = mu
        Mk = identity(n, MultiPoly.const(ring, 1), zero)
        cs = []
        AM = None
        result = None
        # adj(T) = (-1)^(n-1) * (M_n) where M_k from FL on T itself
        for k in range(1, n + 1):
            AM = matmul(T, Mk)
            ck = -sum((AM[i][i] for i in range(n)), zero) * mpq(1, k)
            cs.append(ck)
            if k == n:
                break
            Mk = [[AM[i][j] + (ck if i == j else zero) for j in range(n)] for i in range(n)]
        sign = 1 if (n - 1) % 2 == 0 else -1
        adj = [[Mk[i][j] * sign for j in range(n)] for i in range(n)]
        return [sum((adj[i][j] * v[j] for j in range(n)), zero) for i in range(n)]
    p, gamma = sp
    pv = MultiPoly.var(ring, p)
    T0 = [[T[i][j] - (gamma * pv if i == j else zero) for j in range(mu)] for i in range(mu)]
    if any(T0[i][j].degree_in(p) > 0 for i in range(mu) for j in range(mu)):
        raise ConsistencyError("multiplication matrix is not affine in the shift parameter")
    c = _charpoly_from_det(detpoly, p, gamma, mu, ring)
    sigma = pv * (-gamma)
    # adj(sigma I - T0) v = sum_k (M_k v) sigma^(mu-k)
    Mv = list(v)
    total = [m * sigma ** (mu - 1) for m in Mv]
    for k in range(2, mu + 1):
        Mv = [sum((T0[i][j] * Mv[j] for j in range(mu) if not T0[i][j].is_zero() and not Mv[j].is_zero()),
                  zero) + c[mu - k + 1] * v[i] for i in range(mu)]
        powk = sigma ** (mu - k)
        total = [tt + m * powk for tt, m in zip(total, Mv)]
    # T = -(sigma I - T0) so adj(T) = (-1)^(mu-1) adj(sigma I - T0)
    if (mu - 1) % 2:
        total = [-x for x in total]
    return total


@dataclass
class TjurinaCertificate:
    """``scale*p = f*U + sum Q_i df/dx_i`` when ``holds``; scale is 1 or det(T_f)."""
    holds: bool
    U: Optional[MultiPoly] = None
    Q: List[MultiPoly] = field(default_factory=list)
    scale: Optional[MultiPoly] = None
    detail: str = ""

    def verify(self, t: TamePolynomial, p: MultiPoly) -> bool:
        if not self.holds:
            return False
        rhs = t.f * self.U + sum((q * d for q, d in zip(self.Q, t.partials)), MultiPoly(t.ring))
        lhs = p if self.scale is None else p * self.scale
        return rhs == lhs


def tjurina_annihilation_check(t: TamePolynomial, p: MultiPoly, detpoly: MultiPoly = None,
                               ratio: mpq = ONE) -> TjurinaCertificate:
    """Decide p in Jacob(f) + <f> and return cofactors when it is.

    Symbolically, with ``detpoly`` (det(T_f) = ratio*detpoly), the adjugate
    identity certifies p itself when p is a multiple of the discriminant and
    det(T_f)*p otherwise.  With all parameters specialized the question is a
    rational linear system and is decided exactly.
    """
    red = t.milnor_reduce(p)
    if all(c.is_zero() for c in red.coords):
        return TjurinaCertificate(True, MultiPoly(t.ring), red.cofactors)
    if not t.param_idx:
        from .linalg import SingularMatrixError, rank, solve
        T = t.mult_by_f_matrix()
        Tq = [[e.constant_value() if not e.is_zero() else ZERO for e in row] for row in T]
        v = [c.constant_value() if not c.is_zero() else ZERO for c in red.coords]
        try:
            u = solve(Tq, v)
        except SingularMatrixError:
            aug = [row + [x] for row, x in zip(Tq, v)]
            if rank(aug) > rank(Tq):
                return TjurinaCertificate(False, detail="Milnor coordinates outside the image of T_f")
            from .linalg import rref
            M, piv = rref(aug)
            u = [ZERO] * t.mu
            for r, c in enumerate(piv):
                u[c] = M[r][-1]
        U = t.from_coords([MultiPoly.const(t.ring, x) for x in u])
        r2 = t.milnor_reduce(p - t.f * U)
        if any(not c.is_zero() for c in r2.coords):
            raise ConsistencyError("residual after solving T u = v is not in the Jacobian ideal")
        return TjurinaCertificate(True, U, r2.cofactors)
    if detpoly is None:
        return TjurinaCertificate(False, detail="symbolic case needs the discriminant")
    true_det = detpoly * ratio
    q = exact_divide(p, true_det)
    base = t.milnor_reduce(q) if q is not None else red
    W = t.from_coords(adjugate_apply(t, base.coords, true_det))
    fw = t.milnor_reduce(t.f * W)
    if any(a != c * true_det for a, c in zip(fw.coords, base.coords)):
        return TjurinaCertificate(False, detail="adjugate identity failed; discriminant mismatch")
    # det*base = f*W + sum(det*Q_base - Q_fw) df_i
    Q = [qb * true_det - r for qb, r in zip(base.cofactors, fw.cofactors)]
    if q is not None:
        return TjurinaCertificate(True, W, Q, None, "p is a multiple of det(T_f); adjugate certificate")
    return TjurinaCertificate(True, W, Q, true_det, "certificate for det(T_f)*p")


# ---------------------------------------------------------------- golden data

DATA_DIR = Path(__file__).resolve().parent / "data"

LOCUS_FILES = {
    "D4": "D4.txt",
    "Delta_f": "Delta_f.txt",
    "c_1_0_3": "c_1_0_3.txt",
    "c_1_0_2": "c_1_0_2.txt",
    "b_1_0_1": "b_1_0_1.txt",
    "c_1_0_1": "c_1_0_1.txt",
    "c_0_0_2": "c_0_0_2.txt",
    "c_1_0_0": "c_1_0_0.txt",
    "b_1_0_3": "b_1_0_3.txt",
    "b_1_0_2": "b_1_0_2.txt",
    "b_0_0_3": "b_0_0_3.txt",
    "b_0_0_2": "b_0_0_2.txt",
    "b_1_0_0": "b_1_0_0.txt",
}

# weights making every Clingher-Doran quantity quasi-homogeneous
PARAM_WEIGHTS = {"a": 4, "b": 6, "c": 10, "d": 12, "s": 24}


class GoldenDataError(ValueError):
    pass


def data_dir(override=None) -> Path:
    import os
    if override:
        return Path(override)
    env = os.environ.get("GMCD_DATA_DIR")
    return Path(env) if env else DATA_DIR


def clingher_doran_ring() -> VarTable:
    return VarTable(["x", "y", "w", "a", "b", "c", "d", "s"], [8, 9, 6, 0, 0, 0, 0, 0],
                    ["fiber"] * 3 + ["parameter"] * 5)


CD_POLY = "y^2*w - 4*x^3 + 3*a*x*w^2 + b*w^3 + c*x*w - 1/2*(d*w^2 + w^4) - s"
ELLIPTIC_POLY = "y^2 - 4*x^3 + a*x + b"


def clingher_doran() -> TamePolynomial:
    ring = clingher_doran_ring()
    return TamePolynomial(parse_poly(CD_POLY, ring))


def elliptic_ring() -> VarTable:
    return VarTable(["x", "y", "a", "b"], [2, 3, 0, 0], ["fiber", "fiber", "parameter", "parameter"])


def elliptic() -> TamePolynomial:
    return TamePolynomial(parse_poly(ELLIPTIC_POLY, elliptic_ring()))


def read_expression(path: Path) -> str:
    lines = [ln.split("#", 1)[0] for ln in path.read_text().splitlines()]
    return " ".join(ln.strip() for ln in lines if ln.strip())


def load_locus(name: str, ring: VarTable = None, directory=None) -> MultiPoly:
    ring = ring or clingher_doran_ring()
    path = data_dir(directory) / "appendix" / LOCUS_FILES[name]
    return parse_poly(read_expression(path), ring)


@dataclass
class LocusPolynomial:
    name: str
    value: MultiPoly


@dataclass
class LocusCheck:
    polynomials: Dict[str, MultiPoly]
    checks: List[Tuple[str, bool]]

    @property
    def ok(self):
        return all(ok for _, ok in self.checks)


def weighted_degree_in(p: MultiPoly, weights: Mapping[str, int]) -> Optional[int]:
    """Common weighted degree of all terms, or None when p is not homogeneous."""
    w = [weights.get(n, 0) for n in p.ring.names]
    degs = {sum(a * b for a, b in zip(w, e)) for e in p.terms}
    return degs.pop() if len(degs) == 1 else None


def locus_load_and_check(directory=None, strict=True) -> LocusCheck:
    """Parse every appendix polynomial and verify the printed relations."""
    ring = clingher_doran_ring()
    polys = {}
    for name in LOCUS_FILES:
        try:
            polys[name] = load_locus(name, ring, directory)
        except Exception as exc:
            raise GoldenDataError(f"{name}: {exc}") from exc
    P = polys
    s = MultiPoly.var(ring, "s")
    a = MultiPoly.var(ring, "a")
    checks = [
        ("b_1_0_3*s^4 = -41278242816*Delta_f", P["b_1_0_3"] * s ** 4 == P["Delta_f"] * -41278242816),
        ("b_1_0_2 = s*c_1_0_3", P["b_1_0_2"] == s * P["c_1_0_3"]),
        ("b_0_0_3 = 12*s*c_1_0_2", P["b_0_0_3"] == s * P["c_1_0_2"] * 12),
        ("b_0_0_2 = -c_1_0_1/18", P["b_0_0_2"] == P["c_1_0_1"] * mpq(-1, 18)),
        ("b_1_0_0 = c_0_0_2/18", P["b_1_0_0"] == P["c_0_0_2"] * mpq(1, 18)),
        ("c_1_0_0 = 2*a^2", P["c_1_0_0"] == a * a * 2),
        ("D4(0,0,1,0) = 3125", P["D4"].value_at({"a": 0, "b": 0, "c": 1, "d": 0}) == 3125),
    ]
    for name, p in P.items():
        checks.append((f"{name} quasi-homogeneous", weighted_degree_in(p, PARAM_WEIGHTS) is not None))
    for name in ("b_1_0_3", "b_1_0_2", "b_0_0_3", "b_0_0_2", "b_1_0_0", "c_1_0_3", "c_1_0_2",
                 "c_1_0_1", "c_0_0_2", "b_1_0_1"):
        checks.append((f"{name} has integer coefficients",
                       all(c.denominator == 1 for c in P[name].terms.values())))
    result = LocusCheck(P, checks)
    if strict and not result.ok:
        bad = [n for n, ok in checks if not ok]
        raise GoldenDataError("golden data relations failed: " + ", ".join(bad))
    return result


def load_d_table(directory=None) -> Dict[Exponent, int]:
    out = {}
    for ln in (data_dir(directory) / "appendix" / "d_table.txt").read_text().splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            i, j, k, d = (int(x) for x in ln.split())
            out[(i, j, k)] = d
    return out


# ---------------------------------------------------------------- projective probes

PROJECTIVE_CD = "y^2*z*w - 4*x^3*z + 3*a*x*z*w^2 + b*z*w^3 + c*x*z^2*w - 1/2*(d*z^2*w^2 + w^4)"
PROBE_CHARTS = {"O": ("y", ("x", "z", "w")), "P": ("z", ("x", "y", "w"))}


def projective_surface(point: Mapping[str, object]) -> MultiPoly:
    """The quartic surface in P^3 at a parameter point, over (x, y, z, w)."""
    ring = poly_ring("x,y,z,w,a,b,c,d")
    F = parse_poly(PROJECTIVE_CD, ring).subs({k: mpq(point[k]) for k in "abcd"})
    return F.change_ring(poly_ring("x,y,z,w"))


def singularity_probe(point: Mapping[str, object], which: str):
    """Local Milnor number and Hessian rank of the surface at O or P."""
    from .ideals import local_algebra_dim
    dehom, local_vars = PROBE_CHARTS[which]
    F = projective_surface(point).subs({dehom: 1})
    return local_algebra_dim(F, list(local_vars))
