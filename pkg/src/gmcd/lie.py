"""Matrix Lie algebras over Q: brackets, closures, Killing forms, lattices.

Everything is exact (mpq).  Matrices are lists of rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .linalg import Matrix, det, identity, inverse, matmul, nullspace, rank, rref, transpose, zeros
from .tame import data_dir


def to_q(A) -> Matrix:
    return [[mpq(x) for x in row] for row in A]


def bracket(x: Matrix, y: Matrix) -> Matrix:
    if len(x) != len(y) or len(x[0]) != len(y[0]):
        raise ValueError("size mismatch")
    xy, yx = matmul(x, y), matmul(y, x)
    return [[mpq(a) - mpq(b) for a, b in zip(r1, r2)] for r1, r2 in zip(xy, yx)]


def is_zero(x: Matrix) -> bool:
    return all(v == 0 for row in x for v in row)


def flat(x: Matrix) -> list:
    return [v for row in x for v in row]


def unflat(v: Sequence, n: int) -> Matrix:
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


def trace(x: Matrix):
    return sum((x[i][i] for i in range(len(x))), mpq(0))


def in_orthogonal_algebra(x: Matrix, gram: Matrix) -> bool:
    """x^T G + G x == 0."""
    a, b = matmul(transpose(x), gram), matmul(gram, x)
    return all(p + q == 0 for r1, r2 in zip(a, b) for p, q in zip(r1, r2))


# ---------------------------------------------------------------- file io

def read_matrix(path) -> Matrix:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([mpq(tok) for tok in line.split()])
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError(f"{path}: ragged or empty matrix")
    return rows


def load_matrix(name: str, directory=None) -> Matrix:
    return read_matrix(data_dir(directory) / "matrices" / f"{name}.txt")


GENERATOR_LABELS = ("g1", "g2", "g3", "g4", "g5", "g6", "g0")


def k3_generators(directory=None) -> Dict[str, Matrix]:
    return {g: load_matrix(g, directory) for g in GENERATOR_LABELS}


def psi_matrix(directory=None) -> Matrix:
    return load_matrix("psi", directory)


# ---------------------------------------------------------------- algebras

class _Span:
    """Incremental row-reduced span of flattened matrices, with coordinates."""

    def __init__(self, size: int):
        self.size = size
        self.rows: List[list] = []      # echelon rows
        self.pivots: List[int] = []
        self.combos: List[list] = []    # echelon row in terms of inserted elements
        self.count = 0

    def _reduce(self, v):
        v = list(v)
        c = [mpq(0)] * self.count
        for row, p, comb in zip(self.rows, self.pivots, self.combos):
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
                c = [a - f * b for a, b in zip(c, comb + [mpq(0)] * (self.count - len(comb)))]
        return v, c

    def add(self, v) -> bool:
        r, c = self._reduce(v)
        piv = next((i for i, x in enumerate(r) if x != 0), None)
        if piv is None:
            return False
        f = r[piv]
        r = [x / f for x in r]
        c = [x / f for x in c] + [1 / f]
        self.count += 1
        # keep reduced form: clear the new pivot from older rows
        for k, (row, comb) in enumerate(zip(self.rows, self.combos)):
            if row[piv] != 0:
                g = row[piv]
                self.rows[k] = [a - g * b for a, b in zip(row, r)]
                comb = comb + [mpq(0)] * (self.count - len(comb))
                self.combos[k] = [a - g * b for a, b in zip(comb, c)]
        self.rows.append(r)
        self.pivots.append(piv)
        self.combos.append(c)
        return True

    def coordinates(self, v) -> Optional[list]:
        """Coefficients w.r.t. the inserted (independent) elements, or None."""
        r, c = self._reduce(v)
        if any(x != 0 for x in r):
            return None
        return [-x for x in c] + [mpq(0)] * (self.count - len(c))


@dataclass
class MatrixLieAlgebra:
    n: int
    basis: List[Matrix]
    labels: List[str]
    structure: Dict[Tuple[int, int], list] = field(default_factory=dict)

    def __post_init__(self):
        self._span = _Span(self.n * self.n)
        for b in self.basis:
            if not self._span.add(flat(b)):
                raise ValueError("basis is linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, x: Matrix) -> Optional[list]:
        return self._span.coordinates(flat(x))

    def closure_certificate(self) -> bool:
        """Expand every bracket of basis elements; False if one leaves the span."""
        for i in range(self.dim):
            for j in range(self.dim):
                c = self.coordinates(bracket(self.basis[i], self.basis[j]))
                if c is None:
                    return False
                self.structure[(i, j)] = c
        return True

    def element(self, coords) -> Matrix:
        out = zeros(self.n, self.n, mpq(0))
        for c, b in zip(coords, self.basis):
            if c != 0:
                out = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, b)]
        return out

    def ad(self, x: Matrix) -> Matrix:
        """Matrix of ad x: column j = coordinates of [x, b_j]."""
        cols = []
        for b in self.basis:
            c = self.coordinates(bracket(x, b))
            if c is None:
                raise ValueError("element does not normalize the algebra")
            cols.append(c)
        return transpose(cols)

    def killing(self) -> Matrix:
        ads = [self.ad(b) for b in self.basis]
        return [[trace(matmul(ads[i], ads[j])) for j in range(self.dim)] for i in range(self.dim)]

    def derived_span(self) -> List[list]:
        sp = _Span(self.dim)
        out = []
        for i, j in combinations(range(self.dim), 2):
            c = self.coordinates(bracket(self.basis[i], self.basis[j]))
            if sp.add(c):
                out.append(c)
        return out

    def jacobi_holds(self) -> bool:
        B = self.basis
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    s = bracket(B[i], bracket(B[j], B[k]))
                    s2 = bracket(B[j], bracket(B[k], B[i]))
                    s3 = bracket(B[k], bracket(B[i], B[j]))
                    if not is_zero([[a + b + c for a, b, c in zip(r1, r2, r3)]
                                    for r1, r2, r3 in zip(s, s2, s3)]):
                        return False
        return True


def radical_dimension(alg: MatrixLieAlgebra) -> int:
    """dim {x : kappa(x, [L, L]) = 0} (Cartan criterion, char 0)."""
    K = alg.killing()
    D = alg.derived_span()
    if not D:
        return alg.dim
    rows = [[sum(K[i][j] * d[j] for j in range(alg.dim)) for i in range(alg.dim)] for d in D]
    return alg.dim - rank(rows)


def closure(n: int, generators: Sequence[Matrix], labels=None, max_dim=None) -> MatrixLieAlgebra:
    """Smallest bracket-closed subspace containing the generators."""
    bound = max_dim or n * n
    sp = _Span(n * n)
    basis, labs = [], []
    for k, g in enumerate(generators):
        if sp.add(flat(g)):
            basis.append(g)
            labs.append(labels[k] if labels else f"x{len(basis)}")
    i = 0
    while i < len(basis):
        for j in range(i):
            c = bracket(basis[j], basis[i])
            if sp.add(flat(c)):
                basis.append(c)
                labs.append(f"[{labs[j]},{labs[i]}]")
                if len(basis) > bound:
                    raise RuntimeError("closure exceeded the ambient dimension bound")
        i += 1
    return MatrixLieAlgebra(n, basis, labs)


# ---------------------------------------------------------------- bracket table

@dataclass
class BracketTable:
    labels: List[str]
    entries: Dict[Tuple[str, str], Dict[str, mpq]]   # [x, y] = sum c * label

    def antisymmetric(self) -> bool:
        for (x, y), v in self.entries.items():
            w = self.entries.get((y, x), {})
            keys = set(v) | set(w)
            if any(v.get(k, 0) + w.get(k, 0) != 0 for k in keys):
                return False
        return True

    def _br(self, x: Dict[str, mpq], y: str) -> Dict[str, mpq]:
        out: Dict[str, mpq] = {}
        for lab, c in x.items():
            for k, v in self.entries[(lab, y)].items():
                out[k] = out.get(k, mpq(0)) + c * v
        return {k: v for k, v in out.items() if v != 0}

    def jacobi_failures(self) -> List[Tuple[str, str, str]]:
        bad = []
        L = self.labels
        for i, x in enumerate(L):
            for j in range(i + 1, len(L)):
                for k in range(j + 1, len(L)):
                    y, z = L[j], L[k]
                    tot: Dict[str, mpq] = {}
                    # [x,[y,z]] + [y,[z,x]] + [z,[x,y]], expanded as -[[y,z],x] etc.
                    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                        inner = self.entries[(b, c)]
                        for lab, v in self._br(inner, a).items():
                            tot[lab] = tot.get(lab, mpq(0)) - v
                    if any(v != 0 for v in tot.values()):
                        bad.append((x, y, z))
        return bad


def parse_signed_label(tok: str) -> Dict[str, mpq]:
    tok = tok.strip()
    if tok == "0":
        return {}
    sign = mpq(1)
    if tok[0] in "+-":
        sign = mpq(-1) if tok[0] == "-" else sign
        tok = tok[1:]
    coef = mpq(1)
    if "*" in tok:
        c, tok = tok.split("*", 1)
        coef = mpq(c)
    return {tok: sign * coef}


def load_bracket_table(directory=None) -> BracketTable:
    path = data_dir(directory) / "matrices" / "bracket_table.txt"
    entries = {}
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        x, y, v = line.split()
        entries[(x, y)] = parse_signed_label(v)
    labels = list(GENERATOR_LABELS)
    missing = [(x, y) for x in labels for y in labels if (x, y) not in entries]
    if missing:
        raise ValueError(f"bracket table misses {missing[:3]}")
    return BracketTable(labels, entries)


def computed_bracket_table(gens: Dict[str, Matrix]) -> BracketTable:
    labels = list(gens)
    alg = MatrixLieAlgebra(len(next(iter(gens.values()))), [gens[l] for l in labels], labels)
    entries = {}
    for x in labels:
        for y in labels:
            c = alg.coordinates(bracket(gens[x], gens[y]))
            if c is None:
                raise ValueError(f"[{x},{y}] leaves the span of the generators")
            entries[(x, y)] = {l: v for l, v in zip(labels, c) if v != 0}
    return BracketTable(labels, entries)


@dataclass
class BracketReport:
    mismatches: List[Tuple[str, str, dict, dict]]   # (x, y, expected, computed)
    computed_jacobi: bool
    expected_antisymmetric: bool
    expected_jacobi_failures: List[Tuple[str, str, str]]

    @property
    def ok(self):
        return not self.mismatches and self.computed_jacobi


def format_combo(c: Dict[str, mpq]) -> str:
    if not c:
        return "0"
    parts = []
    for lab, v in c.items():
        if v == 1:
            parts.append(f"+{lab}")
        elif v == -1:
            parts.append(f"-{lab}")
        else:
            parts.append(f"{'+' if v > 0 else '-'}{abs(v)}*{lab}")
    return "".join(parts).lstrip("+")


def verify_bracket_table(gens: Dict[str, Matrix], expected: BracketTable) -> BracketReport:
    got = computed_bracket_table(gens)
    mism = []
    for x in expected.labels:
        for y in expected.labels:
            e, g = expected.entries[(x, y)], got.entries[(x, y)]
            if e != g:
                mism.append((x, y, e, g))
    alg = MatrixLieAlgebra(len(gens[expected.labels[0]]), [gens[l] for l in expected.labels],
                           list(expected.labels))
    return BracketReport(mism, alg.jacobi_holds(), expected.antisymmetric(),
                         expected.jacobi_failures())


# ---------------------------------------------------------------- general rank k

def general_gram(k: int) -> Matrix:
    """Anti-block (1, 20-k, 1) intersection matrix with identity middle block."""
    if not 1 <= k <= 20:
        raise ValueError("k must lie in 1..20")
    n = 22 - k
    G = zeros(n, n, mpq(0))
    G[0][n - 1] = G[n - 1][0] = mpq(1)
    for i in range(1, n - 1):
        G[i][i] = mpq(1)
    return G


def _check_gram_shape(gram: Matrix, n: int):
    if len(gram) != n or any(len(r) != n for r in gram):
        raise ValueError(f"gram must be {n}x{n}")
    ok = gram[0][n - 1] != 0 and gram[0][n - 1] == gram[n - 1][0]
    ok = ok and all(gram[0][j] == 0 for j in range(n - 1)) and all(gram[j][0] == 0 for j in range(1, n - 1))
    ok = ok and all(gram[i][i] == 1 and all(gram[i][j] == 0 for j in range(1, n - 1) if j != i)
                    for i in range(1, n - 1))
    if not ok:
        raise ValueError("gram does not have the (1, 20-k, 1) anti-block shape with identity middle")


def _unit(n, i, j):
    M = zeros(n, n, mpq(0))
    M[i][j] = mpq(1)
    return M


def lieG_k(k: int, gram: Matrix = None) -> MatrixLieAlgebra:
    """Block form [[a, b, 0], [0, c, -b^T], [0, 0, -a]] with c antisymmetric."""
    n = 22 - k
    gram = gram or general_gram(k)
    _check_gram_shape(gram, n)
    m = n - 2
    basis, labels = [], []
    A = _unit(n, 0, 0)
    A[n - 1][n - 1] = mpq(-1)
    basis.append(A)
    labels.append("a")
    for j in range(1, m + 1):
        B = _unit(n, 0, j)
        B[j][n - 1] = mpq(-1)
        basis.append(B)
        labels.append(f"b{j}")
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            C = _unit(n, i, j)
            C[j][i] = mpq(-1)
            basis.append(C)
            labels.append(f"c{i}{j}")
    alg = MatrixLieAlgebra(n, basis, labels)
    if not all(in_orthogonal_algebra(b, gram) for b in basis):
        raise ValueError("constructed element violates the orthogonality condition")
    if not alg.closure_certificate():
        raise AssertionError("Lie(G_k) basis is not closed")
    return alg


def lieG_dimension_formula(k: int) -> int:
    return 1 + (20 - k) + (20 - k) * (19 - k) // 2


def nilradical_basis(alg: MatrixLieAlgebra) -> List[Matrix]:
    """The b-block generators of an algebra built by lieG_k."""
    out = [b for b, l in zip(alg.basis, alg.labels) if l.startswith("b")]
    for x in out:
        if not is_zero(matmul(matmul(x, x), x)):
            raise AssertionError("nilradical element is not nilpotent")
    return out


def amsy_k(k: int, gram: Matrix = None) -> MatrixLieAlgebra:
    gram = gram or general_gram(k)
    g = lieG_k(k, gram)
    nil = nilradical_basis(g)
    n = 22 - k
    alg = closure(n, list(g.basis) + [transpose(x) for x in nil],
                  list(g.labels) + [l + "T" for l in g.labels if l.startswith("b")],
                  max_dim=n * (n - 1) // 2)
    if not all(in_orthogonal_algebra(b, gram) for b in alg.basis):
        raise AssertionError("AMSY element violates x^T G + G x = 0")
    if not alg.closure_certificate():
        raise AssertionError("AMSY closure certificate failed")
    return alg


def levi_check(alg: MatrixLieAlgebra) -> bool:
    """The c-block quotient brackets like antisymmetric matrices of size 20-k."""
    n = alg.n
    m = n - 2
    cs = [(b, l) for b, l in zip(alg.basis, alg.labels) if l.startswith("c")]
    for x, _ in cs:
        for y, _ in cs:
            z = bracket(x, y)
            xc = [row[1:m + 1] for row in x[1:m + 1]]
            yc = [row[1:m + 1] for row in y[1:m + 1]]
            zc = bracket(xc, yc)
            if [row[1:m + 1] for row in z[1:m + 1]] != zc:
                return False
            if any(z[0][j] != 0 for j in range(n)) or any(z[i][n - 1] != 0 for i in range(n)):
                return False
    return True


@dataclass
class ClassificationRow:
    k: int
    dim_lie: int
    radical: int
    dim_amsy: int
    amsy_orthogonal: bool
    amsy_closed: bool
    levi: bool

    @property
    def ok(self):
        n = 22 - self.k
        return (self.dim_lie == lieG_dimension_formula(self.k) and self.radical == 21 - self.k
                and self.dim_amsy == n * (n - 1) // 2 and self.amsy_orthogonal
                and self.amsy_closed and self.levi)


def classify(k: int) -> ClassificationRow:
    g = lieG_k(k)
    a = amsy_k(k)
    gram = general_gram(k)
    return ClassificationRow(k, g.dim, radical_dimension(g), a.dim,
                             all(in_orthogonal_algebra(b, gram) for b in a.basis),
                             a.closure_certificate(), levi_check(g))


def sl2_test_algebra() -> MatrixLieAlgebra:
    e = to_q([[0, 1], [0, 0]])
    f = to_q([[0, 0], [1, 0]])
    h = to_q([[1, 0], [0, -1]])
    return MatrixLieAlgebra(2, [e, f, h], ["e", "f", "h"])


# ---------------------------------------------------------------- exterior square

WEDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _perm_sign(p) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def wedge_square(A: Matrix) -> Matrix:
    """Column k holds A e_i ^ A e_j in the basis e12, e13, e14, e23, e24, e34."""
    cols = [[A[r][c] for r in range(4)] for c in range(4)]
    out = [[None] * 6 for _ in range(6)]
    for k, (i, j) in enumerate(WEDGE_PAIRS):
        u, v = cols[i], cols[j]
        for r, (p, q) in enumerate(WEDGE_PAIRS):
            out[r][k] = u[p] * v[q] - u[q] * v[p]
    return out


def wedge_gram() -> Matrix:
    """(u, v) defined by u ^ v = -(u, v) e1 ^ e2 ^ e3 ^ e4."""
    G = zeros(6, 6, mpq(0))
    for a, (i, j) in enumerate(WEDGE_PAIRS):
        for b, (p, q) in enumerate(WEDGE_PAIRS):
            idx = (i, j, p, q)
            if len(set(idx)) == 4:
                G[a][b] = mpq(-_perm_sign(idx))
    return G


# e12, e14, e13 - e24, e32, e43 in wedge coordinates
M_BASIS = (
    (1, 0, 0, 0, 0, 0),
    (0, 0, 1, 0, 0, 0),
    (0, 1, 0, 0, -1, 0),
    (0, 0, 0, -1, 0, 0),
    (0, 0, 0, 0, 0, -1),
)
M_LABELS = ("e12", "e14", "e13-e24", "e32", "e43")
INVARIANT_VECTOR = (0, 1, 0, 0, 1, 0)      # e13 + e24


def m_lattice(directory=None) -> Tuple[Matrix, Matrix]:
    """(basis in wedge coordinates, Gram); the Gram must equal the stored phi."""
    G = wedge_gram()
    V = transpose(to_q(M_BASIS))
    gram = matmul(matmul(transpose(V), G), V)
    phi = load_matrix("phi", directory)
    if gram != phi:
        raise AssertionError("restricted wedge pairing differs from phi")
    return to_q(M_BASIS), gram


def fixes_invariant(A: Matrix) -> bool:
    v = [sum(mpq(W) * x for W, x in zip(row, INVARIANT_VECTOR)) for row in wedge_square(A)]
    return v == [mpq(x) for x in INVARIANT_VECTOR]


def _m_coordinates(w) -> list:
    # inverse of M_BASIS on its span; w[4] must equal -w[1]
    if w[4] + w[1] != 0:
        raise ValueError("vector is not orthogonal to e13 + e24")
    return [w[0], w[2], w[1], -w[3], -w[5]]


def is_symplectic(P: Matrix, J: Matrix) -> bool:
    return matmul(matmul(transpose(P), J), P) == J


def comparison_F(P: Matrix, directory=None, check=True) -> Matrix:
    """Xi * (wedge square restricted to M) * Xi^-1, in the M basis."""
    # symbolic inputs are checked by the caller
    if check and not is_symplectic(to_q(P), load_matrix("psi_abs", directory)):
        raise ValueError("input is not symplectic")
    W = wedge_square(P)
    R = [[None] * 5 for _ in range(5)]
    for j, v in enumerate(M_BASIS):
        w = [sum((W[r][k] * v[k] for k in range(6) if v[k] != 0), 0 * W[r][0]) for r in range(6)]
        c = _m_coordinates(w)
        for i in range(5):
            R[i][j] = c[i]
    xi = [mpq(1), mpq(1), mpq(2), mpq(1), mpq(1)]
    return [[R[i][j] * xi[i] / xi[j] for j in range(5)] for i in range(5)]


def bender_generators(directory=None) -> Tuple[Matrix, Matrix]:
    return load_matrix("bender1", directory), load_matrix("bender2", directory)
