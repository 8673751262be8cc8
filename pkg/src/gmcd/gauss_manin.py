"""Gauss-Manin connections of tame polynomials by pole reduction.

Forms are ``P dx / f^k``.  Reduction from order k to k-1 writes
``Delta*P = f*U + sum Q_i df/dx_i`` and uses

    sum Q_i df/dx_i dx / f^k  ==  (1/(k-1)) div(Q) dx / f^(k-1)

(the exact-form correction).  At order one the Euler field E = sum (nu_i/d) x_i d/dx_i
removes the Jacobian part: split Q = h*E + G with div G = 0, then
``sum Q_i df/dx_i dx/f == -h*(f - E f) dx/f``, which lowers the degree.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import ONE, ZERO, Exponent, MultiPoly, RationalFunction, to_rational
from .linalg import SingularMatrixError, inverse, matmul, matvec, rank, solve, transpose
from .tame import (
    ConsistencyError,
    TamePolynomial,
    adjugate_apply,
    discriminant_symbolic,
    load_d_table,
    sample_point,
)


@dataclass
class PoleForm:
    numerator: MultiPoly
    pole_order: int

    def __post_init__(self):
        if self.pole_order < 1:
            raise ValueError("pole order must be positive")


@dataclass
class ReductionStep:
    kind: str                       # "pole" or "euler"
    order: int
    P: MultiPoly
    U: Optional[MultiPoly]
    Q: List[MultiPoly]
    scale: object                   # Delta (symbolic) or 1
    coords: Optional[List[MultiPoly]] = None
    h: Optional[MultiPoly] = None


@dataclass
class PoleReduction:
    """The class of a form as sum coords[b] * x^b dx/f, coords = num/Delta^m."""
    numerators: List[MultiPoly]
    denominator_power: int
    delta: Optional[MultiPoly]
    steps: List[ReductionStep] = field(default_factory=list)

    def coefficients(self):
        """RationalFunction entries (symbolic) or rationals (specialized)."""
        if self.delta is None:
            return [n.constant_value() if not n.is_zero() else ZERO for n in self.numerators]
        den = self.delta ** self.denominator_power
        return [RationalFunction(n, den) for n in self.numerators]


def divergence(t: TamePolynomial, Q: Sequence[MultiPoly]) -> MultiPoly:
    out = MultiPoly(t.ring)
    for q, v in zip(Q, t.fiber_names):
        if not q.is_zero():
            out = out + q.diff(v)
    return out


def euler_field(t: TamePolynomial) -> List[MultiPoly]:
    """Components nu_i x_i / d of the weighted Euler field."""
    return [MultiPoly.var(t.ring, v) * mpq(w, t.d) for v, w in zip(t.fiber_names, t.weights)]


class GaussManin:
    """Pole reduction and connection matrices for a tame polynomial.

    ``t`` may be symbolic (then ``delta`` must be det(T_f) or is computed) or
    fully specialized (all coefficients rational).
    """

    def __init__(self, t: TamePolynomial, delta: Optional[MultiPoly] = None):
        self.t = t
        self.symbolic = bool(t.param_idx)
        self._Tinv = None
        if self.symbolic:
            self.delta = delta if delta is not None else discriminant_symbolic(t, None)
        else:
            self.delta = None
        w = t.weights
        self.nu_sum = sum(w)
        f = t.f
        wd = t.fdeg
        fi = t.fiber_idx
        # f - E(f) = sum over homogeneous parts (1 - D/d) f_D
        terms = {}
        for e, c in f.terms.items():
            D = wd(tuple(e[i] for i in fi))
            if D != t.d:
                terms[e] = c * mpq(t.d - D, t.d)
        self.f_low = MultiPoly(t.ring, terms, _clean=True)

    # ---- helpers
    def _Tinverse(self):
        if self._Tinv is None:
            T = self.t.mult_by_f_matrix()
            Tq = [[e.constant_value() if not e.is_zero() else ZERO for e in row] for row in T]
            try:
                self._Tinv = inverse(Tq)
            except SingularMatrixError as exc:
                raise SingularMatrixError("fiber is singular: T_f is not invertible") from exc
        return self._Tinv

    def lower_pole(self, P: MultiPoly, k: int) -> Tuple[MultiPoly, ReductionStep]:
        """One step k -> k-1; returns the new numerator (times 1/Delta when symbolic)."""
        t = self.t
        red = t.milnor_reduce(P)
        if self.symbolic:
            W = t.from_coords(adjugate_apply(t, red.coords, self.delta))
            fw = t.milnor_reduce(t.f * W)
            Q = [q * self.delta - r for q, r in zip(red.cofactors, fw.cofactors)]
            scale = self.delta
        else:
            v = [c.constant_value() if not c.is_zero() else ZERO for c in red.coords]
            u = matvec(self._Tinverse(), v)
            W = t.from_coords([MultiPoly.const(t.ring, x) for x in u])
            fw = t.milnor_reduce(t.f * W)
            if any(a != b for a, b in zip(fw.coords, red.coords)):
                raise ConsistencyError("T_f inverse does not reproduce the Milnor coordinates")
            Q = [q - r for q, r in zip(red.cofactors, fw.cofactors)]
            scale = ONE
        new = W + divergence(t, Q) * mpq(1, k - 1)
        return new, ReductionStep("pole", k, P, W, Q, scale)

    def euler_reduce(self, P: MultiPoly) -> Tuple[List[MultiPoly], List[ReductionStep]]:
        """Coordinates of P dx/f in the frame x^b dx/f."""
        t = self.t
        coords = [MultiPoly(t.ring) for _ in range(t.mu)]
        steps = []
        guard = 0
        while not P.is_zero():
            guard += 1
            if guard > 1000:
                raise ConsistencyError("Euler reduction does not terminate")
            red = t.milnor_reduce(P)
            coords = [a + b for a, b in zip(coords, red.coords)]
            div = divergence(t, red.cofactors)
            h = MultiPoly(t.ring)
            if not div.is_zero():
                parts: Dict[int, dict] = {}
                fi = t.fiber_idx
                for e, c in div.terms.items():
                    D = t.fdeg(tuple(e[i] for i in fi))
                    parts.setdefault(D, {})[e] = c * mpq(t.d, D + self.nu_sum)
                for D, terms in parts.items():
                    h = h + MultiPoly(t.ring, terms, _clean=True)
            steps.append(ReductionStep("euler", 1, P, None, red.cofactors, ONE, red.coords, h))
            P = -(h * self.f_low)
        return coords, steps

    def reduce(self, form: PoleForm) -> PoleReduction:
        P, k = form.numerator, form.pole_order
        steps = []
        m = 0
        while k > 1:
            P, st = self.lower_pole(P, k)
            steps.append(st)
            k -= 1
            if self.symbolic:
                m += 1
        coords, esteps = self.euler_reduce(P)
        steps.extend(esteps)
        return PoleReduction(coords, m, self.delta, steps)

    # ---- certificates
    def verify_steps(self, red: PoleReduction) -> bool:
        """Re-check every identity used by a reduction."""
        t = self.t
        for st in red.steps:
            jac = sum((q * d for q, d in zip(st.Q, t.partials)), MultiPoly(t.ring))
            if st.kind == "pole":
                if st.P * st.scale != t.f * st.U + jac:
                    return False
            else:
                if st.P != t.from_coords(st.coords) + jac:
                    return False
                E = euler_field(t)
                G = [q - st.h * e for q, e in zip(st.Q, E)]
                if not divergence(t, G).is_zero():
                    return False
        return True

    # ---- connection
    def derivative_form(self, form: PoleForm, parameter: str, df: MultiPoly = None) -> PoleForm:
        """nabla_{d/dparameter} of P dx/f^k as a form of order k+1."""
        t = self.t
        P, k = form.numerator, form.pole_order
        if df is None:
            df = t.f.diff(parameter)
        dP = P.diff(parameter) if parameter in t.ring else MultiPoly(t.ring)
        return PoleForm(dP * t.f - P * df * k, k + 1)

    def basis_form(self, i: int, order: int = 1) -> PoleForm:
        return PoleForm(self.t.basis_poly(i), order)

    def connection_row(self, form: PoleForm, parameter: str, df: MultiPoly = None):
        red = self.reduce(self.derivative_form(form, parameter, df))
        return red


@dataclass
class GMConnectionMatrix:
    parameter: str
    entries: list                   # mu x mu; RationalFunction or mpq
    denominator_power: int          # entries have denominators dividing Delta^m
    reductions: List[PoleReduction] = field(default_factory=list)

    def at(self, point: Mapping[str, object]):
        return [[e.value_at(point) if isinstance(e, RationalFunction) else e for e in row]
                for row in self.entries]


def gm_connection(gm: GaussManin, parameter: str, df: MultiPoly = None) -> GMConnectionMatrix:
    """Rows b: nabla_{d/dparameter}(x^b dx/f) = sum_c M[b][c] x^c dx/f."""
    t = gm.t
    rows, reds = [], []
    m = 0
    for i in range(t.mu):
        red = gm.connection_row(gm.basis_form(i), parameter, df)
        rows.append(red.coefficients())
        reds.append(red)
        m = max(m, red.denominator_power)
    return GMConnectionMatrix(parameter, rows, m, reds)


class SpecializedFamily:
    """A symbolic tame polynomial evaluated at rational parameter points."""

    def __init__(self, t: TamePolynomial):
        self.t = t

    def at(self, point: Mapping[str, object]) -> Tuple[GaussManin, Dict[str, MultiPoly]]:
        tp = self.t.specialize(point)
        dfs = {p: self.t.to_fiber(self.t.f.diff(p), tp) for p in self.t.param_names}
        return GaussManin(tp), dfs

    def connection_at(self, point, parameter) -> List[List[mpq]]:
        gm, dfs = self.at(point)
        return gm_connection(gm, parameter, dfs[parameter]).entries


def flatness_defect(A: Dict[str, GMConnectionMatrix], p: str, q: str, point: Mapping[str, object]):
    """d_p A_q + A_q A_p - d_q A_p - A_p A_q at a point (nabla w = A w)."""
    def d(M: GMConnectionMatrix, v):
        return [[e.diff(v).value_at(point) if isinstance(e, RationalFunction) else ZERO
                 for e in row] for row in M.entries]
    Ap, Aq = A[p].at(point), A[q].at(point)
    dpAq, dqAp = d(A[q], p), d(A[p], q)
    L = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(dpAq, matmul(Aq, Ap))]
    R = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(dqAp, matmul(Ap, Aq))]
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(L, R)]


# ---------------------------------------------------------------- filtrations

def a_beta(beta: Exponent, weights=(8, 9, 6), d: int = 24) -> mpq:
    """(weighted degree of x^beta dx) / d."""
    return mpq(sum(weights) + sum(w * b for w, b in zip(weights, beta)), d)


@dataclass
class FiltrationTable:
    A: Dict[Exponent, mpq]
    d: Dict[Exponent, int]
    n_plus_1: int = 3

    @classmethod
    def for_basis(cls, basis: Sequence[Exponent], weights, deg, dtable: Dict[Exponent, int]):
        missing = [b for b in basis if b not in dtable]
        if missing:
            raise ValueError(f"d-table misses {missing}")
        return cls({b: a_beta(b, weights, deg) for b in basis}, {b: dtable[b] for b in basis},
                   len(weights))

    def hodge_level(self, beta: Exponent) -> int:
        """Largest i with x^beta dx / f^l in F^i for l = ceil(A_beta)."""
        l = -(-self.A[beta].numerator // self.A[beta].denominator)
        return self.n_plus_1 - l

    def pole_order(self, beta: Exponent) -> int:
        return -(-self.A[beta].numerator // self.A[beta].denominator)


def filtration_sets(table: FiltrationTable, m: int):
    """Literal evaluation of the B^m_2 / B^m_3 inequalities; pole order 3-m."""
    if m not in (0, 1, 2):
        raise ValueError("m must be 0, 1 or 2")
    top = table.n_plus_1 - m
    b2, b3 = [], []
    for beta, A in table.A.items():
        lo = top - mpq(table.d[beta] + 1, 24)
        if lo < A < top:
            b2.append(PoleForm_key(beta, top))
        if A == top:
            b3.append(PoleForm_key(beta, top))
    return sorted(b2), sorted(b3)


def PoleForm_key(beta, order):
    return (beta, order)


def cd_filtration_table(t: TamePolynomial, directory=None) -> FiltrationTable:
    return FiltrationTable.for_basis(t.basis, t.weights, t.d, load_d_table(directory))


# ---------------------------------------------------------------- Hodge frame

def hodge_frame(t: TamePolynomial, table: FiltrationTable) -> List[Tuple[int, int, int]]:
    """(basis index, pole order, level) for x^b dx / f^ceil(A_b), highest level first."""
    out = []
    for i, b in enumerate(t.basis):
        out.append((i, table.pole_order(b), table.hodge_level(b)))
    out.sort(key=lambda r: (-r[2], r[0]))
    return out


@dataclass
class TransversalityReport:
    point: Dict[str, mpq]
    rows: List[Tuple[str, str, int, bool]]   # (parameter, basis label, level, ok)

    @property
    def ok(self):
        return all(r[3] for r in self.rows)


class PointRejected(ValueError):
    pass


def check_point_off_sigma(point: Mapping[str, object], factors: Mapping[str, MultiPoly]):
    for name, p in factors.items():
        if p.value_at(point) == 0:
            raise PointRejected(f"point lies on Z({name})")


def hodge_frame_matrix(gm: GaussManin, frame) -> List[List[mpq]]:
    """Rows: the frame elements in pole-one coordinates at a specialized point."""
    rows = []
    for i, order, _ in frame:
        red = gm.reduce(gm.basis_form(i, order))
        rows.append(red.coefficients())
    return rows


def transversality_check(t: TamePolynomial, point: Mapping[str, object],
                         sigma: Mapping[str, MultiPoly], table: FiltrationTable,
                         parameters: Sequence[str] = None) -> TransversalityReport:
    """nabla F^i in F^(i-1) for the Hodge frame x^b dx/f^ceil(A_b), at one point."""
    check_point_off_sigma(point, sigma)
    fam = SpecializedFamily(t)
    gm, dfs = fam.at(point)
    tp = gm.t
    frame = hodge_frame(tp, table)
    B = hodge_frame_matrix(gm, frame)
    Binv = inverse(B)
    labels = t.basis_labels()
    levels = [lvl for _, _, lvl in frame]
    rows = []
    for p in parameters or t.param_names:
        for r, (i, order, lvl) in enumerate(frame):
            form = gm.derivative_form(gm.basis_form(i, order), p, dfs[p])
            v = gm.reduce(form).coefficients()
            comp = matvec(transpose(Binv), v)       # coordinates in the Hodge frame
            ok = all(c == 0 for c, l in zip(comp, levels) if l < lvl - 1)
            rows.append((p, labels[i], lvl, ok))
    return TransversalityReport(dict(point), rows)


SIGMA_FILES = ("Delta_f", "c_1_0_3", "c_1_0_2", "b_1_0_1", "c_1_0_1", "c_0_0_2")


def sigma_factors(ring=None, directory=None) -> Dict[str, MultiPoly]:
    """The eight printed components of the locus Sigma."""
    from .tame import clingher_doran_ring, load_locus
    ring = ring or clingher_doran_ring()
    out = {name: load_locus(name, ring, directory) for name in SIGMA_FILES}
    out["s"] = MultiPoly.var(ring, "s")
    out["a"] = MultiPoly.var(ring, "a")
    return out


def sample_off_sigma(names: Sequence[str], rng: random.Random, sigma: Mapping[str, MultiPoly],
                     max_rejections: int = 1000) -> Dict[str, mpq]:
    for _ in range(max_rejections + 1):
        pt = sample_point(names, rng)
        if all(p.value_at(pt) != 0 for p in sigma.values()):
            return pt
    raise PointRejected(f"no point off Sigma after {max_rejections} rejections")
