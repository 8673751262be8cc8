"""Enhanced-moduli charts and the modular vector field solver.

A chart point is (t, S) with t the family parameters and S a lower
block-triangular frame change, alpha = S omega.  For a vector field
R = sum a_k d/dt_k + sum b_ij d/ds_ij the connection matrix in the alpha frame is

    GM_alpha(R) = (B + S * sum a_k A_k) S^-1,     B[i][j] = b_ij,

where nabla_k omega = A_k omega (rows index the frame).  Solving
GM_alpha(R) = g^T is linear in (a, b).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import MultiPoly, RationalFunction, VarTable, poly_ring
from .gauss_manin import (
    GaussManin,
    PoleForm,
    SpecializedFamily,
    cd_filtration_table,
    gm_connection,
    hodge_frame,
    sample_off_sigma,
    sigma_factors,
)
from .lie import in_orthogonal_algebra, to_q
from .linalg import SingularMatrixError, inverse, matmul, rank, solve, transpose, zeros
from .tame import clingher_doran, elliptic, load_locus


class PreconditionError(ValueError):
    pass


# ---------------------------------------------------------------- block shapes

@dataclass(frozen=True)
class BlockShape:
    """Hodge block sizes, top level first: (1, m, 1)."""
    sizes: Tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def level(self, i: int) -> int:
        acc = 0
        for k, s in enumerate(self.sizes):
            acc += s
            if i < acc:
                return k
        raise IndexError(i)

    def free_positions(self) -> List[Tuple[int, int]]:
        """Entries of an S-shaped matrix other than the fixed (0, 0) = 1."""
        n = self.n
        return [(i, j) for i in range(n) for j in range(n)
                if self.level(j) <= self.level(i) and (i, j) != (0, 0)]

    def is_s_shaped(self, S) -> bool:
        n = self.n
        if S[0][0] != 1:
            return False
        return all(S[i][j] == 0 for i in range(n) for j in range(n)
                   if self.level(j) > self.level(i))


K3_SHAPE = BlockShape((1, 3, 1))
ELLIPTIC_SHAPE = BlockShape((1, 1))


def psi_elliptic():
    return to_q([[0, 1], [-1, 0]])


# ---------------------------------------------------------------- S completion

def _blocks(M, shape: BlockShape):
    cuts = [0]
    for s in shape.sizes:
        cuts.append(cuts[-1] + s)
    return lambda p, q: [row[cuts[q]:cuts[q + 1]] for row in M[cuts[p]:cuts[p + 1]]]


def s_complete(S10, S11, Omega, Psi, shape: BlockShape = K3_SHAPE):
    """Complete S from S10 (m x 1) and S11 (m x m) so that S Omega S^T = Psi."""
    n = shape.n
    m = shape.sizes[1]
    if any(Omega[i][j] != Omega[j][i] for i in range(n) for j in range(n)):
        raise PreconditionError("Omega is not symmetric")
    Ob = _blocks(Omega, shape)
    Pb = _blocks(Psi, shape)
    if Ob(0, 0)[0][0] != 0 or any(x != 0 for x in Ob(0, 1)[0]):
        raise PreconditionError("Omega^{0,0} and Omega^{0,1} must vanish")
    O20 = Ob(2, 0)[0][0]
    if O20 == 0:
        raise PreconditionError("Omega^{2,0} must be nonzero")
    O11 = Ob(1, 1)
    if rank(O11) != m:
        raise PreconditionError("Omega^{1,1} must be nonsingular")
    if matmul(matmul(S11, O11), transpose(S11)) != Pb(1, 1):
        raise PreconditionError("S11 Omega^{1,1} S11^T != Psi'")
    S22 = Pb(0, 2)[0][0] / O20
    O02 = [row[0] for row in Ob(1, 2)]          # Omega^{1,2} as an m-vector
    # S21^T = -(S11 O11)^-1 (S10 O^{0,2} + S11 O^{1,2}) S22
    rhs = [S10[i][0] * O20 + sum(S11[i][k] * O02[k] for k in range(m)) for i in range(m)]
    M = matmul(S11, O11)
    S21 = [-x * S22 for x in solve(M, rhs)] if m else []
    # (2,2) block: 2 S20 O20 S22 + S21 O11 S21^T + 2 S21 O12 S22 + O22 S22^2 = Psi[n-1][n-1]
    O22 = Ob(2, 2)[0][0]
    quad = sum(S21[i] * O11[i][j] * S21[j] for i in range(m) for j in range(m))
    lin = 2 * sum(S21[i] * O02[i] for i in range(m)) * S22
    S20 = (Pb(2, 2)[0][0] - quad - lin - O22 * S22 * S22) / (2 * O20 * S22)
    S = zeros(n, n, mpq(0))
    S[0][0] = mpq(1)
    for i in range(m):
        S[1 + i][0] = S10[i][0]
        for j in range(m):
            S[1 + i][1 + j] = S11[i][j]
    S[n - 1][0] = S20
    for j in range(m):
        S[n - 1][1 + j] = S21[j]
    S[n - 1][n - 1] = S22
    if matmul(matmul(S, Omega), transpose(S)) != [list(r) for r in Psi]:
        raise AssertionError("completion failed to satisfy S Omega S^T = Psi")
    return S


def _cayley(X):
    """(I - X)^-1 (I + X)."""
    n = len(X)
    I = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    return matmul(inverse([[I[i][j] - X[i][j] for j in range(n)] for i in range(n)]),
                  [[I[i][j] + X[i][j] for j in range(n)] for i in range(n)])


def random_admissible(rng: random.Random, Psi, shape: BlockShape = K3_SHAPE):
    """(Omega, S10, S11) with S11 Omega^{1,1} S11^T = Psi'."""
    n, m = shape.n, shape.sizes[1]
    q = lambda: mpq(rng.randint(-9, 9), rng.randint(1, 6))
    Pp = [row[1:1 + m] for row in Psi[1:1 + m]]
    while True:
        K = [[q() for _ in range(m)] for _ in range(m)]
        if m == 0 or rank(K) == m:
            break
    O11 = matmul(matmul(K, Pp), transpose(K)) if m else []
    # S11 = O K^-1 with O orthogonal for Psi': Cayley transform of a Psi'-skew element
    S11 = []
    if m:
        while True:
            Y = [[q() for _ in range(m)] for _ in range(m)]
            Yskew = [[Y[i][j] - Y[j][i] for j in range(m)] for i in range(m)]
            X = matmul(Yskew, inverse(Pp))        # X Psi' + Psi' X^T = 0
            try:
                O = _cayley(X)
                break
            except SingularMatrixError:
                continue
        S11 = matmul(O, inverse(K))
    Omega = zeros(n, n, mpq(0))
    o20 = q()
    while o20 == 0:
        o20 = q()
    Omega[0][n - 1] = Omega[n - 1][0] = o20
    for i in range(m):
        for j in range(m):
            Omega[1 + i][1 + j] = O11[i][j]
        v = q()
        Omega[1 + i][n - 1] = Omega[n - 1][1 + i] = v
    Omega[n - 1][n - 1] = q()
    S10 = [[q()] for _ in range(m)]
    return Omega, S10, S11


# ---------------------------------------------------------------- solver

@dataclass
class VectorFieldSolution:
    base: Dict[str, object]                     # a_k
    frame: Dict[Tuple[int, int], object]        # b_ij
    gm_alpha: list                              # GM_alpha(R)
    first_row_matrix: list
    first_row_rank: int
    unique: bool
    certificate: bool
    antisymmetric: bool

    @property
    def ok(self) -> bool:
        return self.unique and self.certificate and self.antisymmetric


def _zero_like(x):
    return x - x


def gm_alpha(S, A: Mapping[str, list], a: Mapping[str, object], B):
    """(B + S * sum a_k A_k) S^-1."""
    n = len(S)
    z = _zero_like(S[0][0])
    Aa = [[z] * n for _ in range(n)]
    for k, Ak in A.items():
        if a[k] == 0:
            continue
        Aa = [[x + a[k] * y for x, y in zip(r1, r2)] for r1, r2 in zip(Aa, Ak)]
    M = matmul(S, Aa)
    M = [[z + x + y for x, y in zip(r1, r2)] for r1, r2 in zip(M, B)]
    return matmul(M, inverse(S))


def vf_solve(S, A: Mapping[str, list], g, Psi, shape: BlockShape) -> VectorFieldSolution:
    """Solve GM_alpha(R) = g^T for (a_k, b_ij)."""
    if not in_orthogonal_algebra(to_q(g), Psi):
        raise PreconditionError("g does not satisfy Psi g + g^T Psi = 0")
    n = shape.n
    names = list(A)
    gT = transpose(to_q(g))
    z = _zero_like(S[0][0])
    one = z + 1
    gTS = matmul([[one * x for x in row] for row in gT], S)
    SA = {k: matmul(S, A[k]) for k in names}
    # first-row system: (S A(a))[0][j] = (g^T S)[0][j]
    cols = range(n - 1) if len(shape.sizes) > 2 and shape.sizes[1] > 0 else range(n)
    M = [[SA[k][0][j] for k in names] for j in cols]
    rhs = [gTS[0][j] for j in cols]
    r = rank(M)
    if r < len(names) or len(M) != len(names):
        return VectorFieldSolution({}, {}, [], M, r, False, False, False)
    sol = solve(M, rhs)
    base = dict(zip(names, sol))
    SAa = [[z] * n for _ in range(n)]
    for k in names:
        if base[k] != 0:
            SAa = [[x + base[k] * y for x, y in zip(r1, r2)] for r1, r2 in zip(SAa, SA[k])]
    frame = {}
    B = [[z] * n for _ in range(n)]
    for (i, j) in shape.free_positions():
        frame[(i, j)] = gTS[i][j] - SAa[i][j]
        B[i][j] = frame[(i, j)]
    G = gm_alpha(S, A, base, B)
    cert = all(G[i][j] == gT[i][j] for i in range(n) for j in range(n))
    GP = matmul(G, [[one * x for x in row] for row in Psi])
    PG = matmul([[one * x for x in row] for row in Psi], transpose(G))
    anti = all(GP[i][j] + PG[i][j] == 0 for i in range(n) for j in range(n))
    return VectorFieldSolution(base, frame, G, M, r, True, cert, anti)


# ---------------------------------------------------------------- elliptic tier

ELLIPTIC_CHART = ("a", "b", "s21", "s22")
ELLIPTIC_WEIGHTS = {"s21": 2, "a": 4, "b": 6, "s22": 0}


@dataclass
class EllipticChart:
    ring: VarTable
    S: list
    A: Dict[str, list]
    delta: MultiPoly


def elliptic_chart() -> EllipticChart:
    """Symbolic chart (a, b, s21, s22) over the family y^2 - 4x^3 + a x + b."""
    t = elliptic()
    gm = GaussManin(t)
    ring = poly_ring(",".join(ELLIPTIC_CHART))
    conv = lambda e: RationalFunction(e.num.change_ring(ring), e.den.change_ring(ring))
    A = {p: [[conv(e) for e in row] for row in gm_connection(gm, p).entries] for p in ("a", "b")}
    one = RationalFunction(MultiPoly.const(ring, 1))
    zero = one - one
    S = [[one, zero], [RationalFunction(MultiPoly.var(ring, "s21")),
                       RationalFunction(MultiPoly.var(ring, "s22"))]]
    return EllipticChart(ring, S, A, gm.delta.change_ring(ring))


def weighted_degree_rf(x: RationalFunction, weights: Mapping[str, int]) -> Optional[int]:
    """Weighted degree of a homogeneous rational function, None if inhomogeneous."""
    def deg(p: MultiPoly):
        ds = {sum(weights[n] * k for n, k in zip(p.ring.names, e)) for e in p.terms}
        return ds.pop() if len(ds) == 1 else None
    if x.is_zero():
        return None
    dn, dd = deg(x.num), deg(x.den)
    if dn is None or dd is None:
        return None
    return dn - dd


def elliptic_solve(g, chart: EllipticChart = None) -> VectorFieldSolution:
    chart = chart or elliptic_chart()
    return vf_solve(chart.S, chart.A, g, psi_elliptic(), ELLIPTIC_SHAPE)


def elliptic_components(sol: VectorFieldSolution) -> Dict[str, object]:
    """t-components (s21, a, b) of a solved field, plus s22."""
    return {"s21": sol.frame[(1, 0)], "a": sol.base["a"], "b": sol.base["b"],
            "s22": sol.frame[(1, 1)]}


ELLIPTIC_ELEMENTS = {
    "raising": to_q([[0, 0], [1, 0]]),     # transpose of the nilradical
    "nilpotent": to_q([[0, 1], [0, 0]]),
    "grading": to_q([[1, 0], [0, -1]]),
}


# ---------------------------------------------------------------- K3 tier

K3_PARAMS = ("a", "b", "c", "d")


@dataclass
class K3FrameData:
    point: Dict[str, mpq]
    A: Dict[str, list]                  # compressed 5x5, HR-completed last column
    raw_last_column: Dict[str, list]    # compressed values before completion
    transversal: bool                   # A_k[0][4] == 0 for every k
    frame_rank: int


def _k3_frame(gm: GaussManin, dfs, table):
    """Frame forms: omega_000/f, its a,b,c derivatives, x w^3 / f^3, then a complement.

    The complement starts with the s-derivative of omega_000/f, so the s-direction
    is quotiented away together with the rest of the complement.
    """
    tp = gm.t
    w0 = gm.basis_form(0, 1)
    forms = [w0] + [gm.derivative_form(w0, p, dfs[p]) for p in ("a", "b", "c")]
    top = next(i for i, o, l in hodge_frame(tp, table) if l == 0)
    forms.append(gm.basis_form(top, table.pole_order(tp.basis[top])))
    rows = [gm.reduce(f).coefficients() for f in forms]
    base_rank = rank(rows)
    ds = gm.derivative_form(w0, "s", dfs["s"])
    forms.append(ds)
    rows.append(gm.reduce(ds).coefficients())
    for i, order, lvl in hodge_frame(tp, table):
        if lvl != 1:
            continue
        cand = gm.basis_form(i, order)
        v = gm.reduce(cand).coefficients()
        if rank(rows + [v]) > len(rows):
            forms.append(cand)
            rows.append(v)
    return forms, rows, base_rank


def k3_frame_data(point: Mapping[str, object], Omega, t=None, table=None) -> K3FrameData:
    t = t or clingher_doran()
    table = table or cd_filtration_table(t)
    fam = SpecializedFamily(t)
    gm, dfs = fam.at(point)
    forms, E, base_rank = _k3_frame(gm, dfs, table)
    if len(E) != gm.t.mu:
        raise SingularMatrixError("could not complete the frame to a basis")
    Einv = inverse(E)
    A, raw = {}, {}
    transversal = True
    for p in K3_PARAMS:
        V = [gm.reduce(gm.derivative_form(f, p, dfs[p])).coefficients() for f in forms]
        full = matmul(V, Einv)
        Ak = [row[:5] for row in full[:5]]
        transversal = transversal and Ak[0][4] == 0
        raw[p] = [Ak[j][4] for j in range(1, 4)]
        # pairing compatibility: A[j][4] Omega[0][4] = -sum_m A[0][m] Omega[m][j]
        for j in range(1, 4):
            Ak[j][4] = -sum(Ak[0][m] * Omega[m][j] for m in range(5)) / Omega[0][4]
        A[p] = Ak
    return K3FrameData(dict(point), A, raw, transversal, base_rank)


@dataclass
class K3PointResult:
    point: Dict[str, mpq]
    solution: VectorFieldSolution
    frame: K3FrameData
    S: list
    Omega: list


def k3_solve_points(g, n_points: int = 10, seed: int = 0, Psi=None) -> List[K3PointResult]:
    from .lie import psi_matrix
    Psi = Psi or psi_matrix()
    rng = random.Random(seed)
    t = clingher_doran()
    table = cd_filtration_table(t)
    sigma = sigma_factors(t.ring)
    out = []
    while len(out) < n_points:
        pt = sample_off_sigma(t.param_names, rng, sigma)
        Omega, S10, S11 = random_admissible(rng, Psi)
        S = s_complete(S10, S11, Omega, Psi)
        data = k3_frame_data(pt, Omega, t, table)
        sol = vf_solve(S, data.A, g, Psi, K3_SHAPE)
        out.append(K3PointResult(pt, sol, data, S, Omega))
    return out


# ---------------------------------------------------------------- actions

def scaling_action(point: Sequence, k) -> Tuple:
    """(a, b, c, d) -> (k^-4 a, k^-6 b, k^-10 c, k^-12 d)."""
    k = mpq(k)
    if k == 0:
        raise ValueError("k must be nonzero")
    a, b, c, d = (mpq(x) for x in point)
    return (a / k ** 4, b / k ** 6, c / k ** 10, d / k ** 12)


def lambda_action(point: Sequence, lam) -> Tuple:
    """(a, b, c, d) -> (l^2 a, l^3 b, l^5 c, l^6 d)."""
    lam = mpq(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    a, b, c, d = (mpq(x) for x in point)
    return (lam ** 2 * a, lam ** 3 * b, lam ** 5 * c, lam ** 6 * d)


def group_membership(g, Psi, shape: BlockShape = K3_SHAPE) -> bool:
    """g^T Psi g = Psi and g^T respects the filtration (g block upper triangular)."""
    g = to_q(g)
    if matmul(matmul(transpose(g), Psi), g) != [list(r) for r in Psi]:
        return False
    n = shape.n
    return all(g[i][j] == 0 for i in range(n) for j in range(n) if shape.level(i) > shape.level(j))


def amsy_basis(Psi) -> List[list]:
    """Basis Psi^-1 (E_ij - E_ji), i < j, of {x : x^T Psi + Psi x = 0}."""
    n = len(Psi)
    Pinv = inverse(to_q(Psi))
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            K = zeros(n, n, mpq(0))
            K[i][j], K[j][i] = mpq(1), mpq(-1)
            out.append(matmul(Pinv, K))
    return out
