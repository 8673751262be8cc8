"""Period matrices: the tau-map, membership in the period manifold, tangency.

Symbolic matrices have MultiPoly entries in the ring (t1, t2, t3) standing for
tau1, tau2, tau3.  Numeric checks use complex doubles with explicit tolerances.
"""
from __future__ import annotations

import cmath
import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .algebra import MultiPoly, poly_ring
from .lie import comparison_F, load_matrix, psi_matrix, to_q
from .linalg import Matrix, inverse, matmul, transpose
from .tame import data_dir

TAU_RING = poly_ring("t1,t2,t3")
VARIANTS = {"last-row-e1": (1, 0, 0, 0, 0), "last-row-e1e4e5": (1, 0, 0, 1, 1)}


class SiegelPointError(ValueError):
    pass


@dataclass
class SiegelPoint:
    t1: complex
    t2: complex
    t3: complex

    def __post_init__(self):
        if not (self.t1.imag > 0 and self.t1.imag * self.t3.imag > self.t2.imag ** 2):
            raise SiegelPointError("point is outside the Siegel upper half space")

    def as_dict(self):
        return {"t1": self.t1, "t2": self.t2, "t3": self.t3}


@dataclass
class ToleranceProfile:
    eps: float = 1e-9
    positivity_margin: float = 0.0

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("epsilon must be positive")


def _c(x) -> MultiPoly:
    return MultiPoly.const(TAU_RING, mpq(x))


def _v(name) -> MultiPoly:
    return MultiPoly.var(TAU_RING, name)


def t_map_displayed(variant: str = "last-row-e1") -> Matrix:
    """The displayed 5x5 matrix; rows as printed."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    t1, t2, t3 = _v("t1"), _v("t2"), _v("t3")
    return [
        [t2 * t2 - t1 * t3, -t3, t2 * (-2), -t1, _c(1)],
        [t3, _c(0), _c(0), _c(1), _c(0)],
        [t2, _c(0), _c(-1), _c(0), _c(0)],
        [t1, _c(1), _c(0), _c(0), _c(0)],
        [_c(x) for x in VARIANTS[variant]],
    ]


def read_conventions(directory=None) -> Dict[str, str]:
    out = {}
    path = data_dir(directory) / "conventions.txt"
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if "=" in line:
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def t_map(variant: str = None, directory=None) -> Matrix:
    """Period matrix P(tau) under the recorded orientation convention."""
    conv = read_conventions(directory)
    variant = variant or conv["tau_map_variant"]
    T = t_map_displayed(variant)
    return transpose(T) if conv.get("tau_map_orientation") == "transpose" else T


def t_abs_map() -> Matrix:
    t1, t2, t3 = _v("t1"), _v("t2"), _v("t3")
    return [[t1, t2, _c(-1), _c(0)], [t2, t3, _c(0), _c(-1)],
            [_c(1), _c(0), _c(0), _c(0)], [_c(0), _c(1), _c(0), _c(0)]]


def _poly_mat(A) -> Matrix:
    return [[x if isinstance(x, MultiPoly) else _c(x) for x in row] for row in A]


def orthogonality_residual(P: Matrix, Psi: Matrix) -> Matrix:
    """P^T Psi P - Psi, exact."""
    Pp, Q = _poly_mat(P), _poly_mat(Psi)
    R = matmul(matmul(transpose(Pp), Q), Pp)
    return [[_poly_mat([[r]])[0][0] - q for r, q in zip(r1, r2)] for r1, r2 in zip(R, Q)]


def is_zero_poly_matrix(A) -> bool:
    return all((x.is_zero() if isinstance(x, MultiPoly) else x == 0) for row in A for x in row)


@dataclass
class VariantResolution:
    passing: List[str]
    orientation: str
    detail: Dict[str, bool]


def resolve_variant(Psi: Matrix = None) -> VariantResolution:
    """Which displayed variants satisfy the orthogonality identity, in each orientation."""
    Psi = Psi or psi_matrix()
    detail = {}
    for name in VARIANTS:
        T = t_map_displayed(name)
        detail[f"{name}:as-printed"] = is_zero_poly_matrix(orthogonality_residual(T, Psi))
        detail[f"{name}:transpose"] = is_zero_poly_matrix(orthogonality_residual(transpose(T), Psi))
    for orient in ("as-printed", "transpose"):
        passing = [n for n in VARIANTS if detail[f"{n}:{orient}"]]
        if len(passing) == 1:
            return VariantResolution(passing, orient, detail)
    return VariantResolution([], "none", detail)


# ---------------------------------------------------------------- numerics

def evaluate(P: Matrix, tau: SiegelPoint) -> List[List[complex]]:
    vals = tau.as_dict()
    out = []
    for row in P:
        r = []
        for x in row:
            if isinstance(x, MultiPoly):
                acc = 0j
                for e, c in x.terms.items():
                    term = complex(float(c))
                    for name, k in zip(TAU_RING.names, e):
                        if k:
                            term *= vals[name] ** k
                    acc += term
                r.append(acc)
            else:
                r.append(complex(float(x)))
        out.append(r)
    return out


def _cmatmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@dataclass
class MembershipReport:
    orthogonality_residual: float
    positivity: complex
    exact: Optional[bool]
    tol: ToleranceProfile

    @property
    def orthogonal(self) -> bool:
        return self.exact if self.exact is not None else self.orthogonality_residual < self.tol.eps

    @property
    def positive(self) -> bool:
        return (self.positivity.real > self.tol.positivity_margin
                and abs(self.positivity.imag) <= max(self.tol.eps, 1e-12 * abs(self.positivity)))

    @property
    def member(self) -> bool:
        return self.orthogonal and self.positive


def pi_membership(P, Psi: Matrix = None, tol: ToleranceProfile = None,
                  tau: SiegelPoint = None) -> MembershipReport:
    """P^T Psi P = Psi and (P^1)^T Psi conj(P^1) > 0, where P^1 is the first column.

    Symbolic P is checked exactly and, when ``tau`` is given, evaluated for positivity.
    """
    tol = tol or ToleranceProfile()
    Psi = Psi or psi_matrix()
    if len(P) != len(P[0]):
        raise ValueError("period matrix must be square")
    exact = None
    symbolic = any(isinstance(x, MultiPoly) for row in P for x in row)
    if symbolic:
        exact = is_zero_poly_matrix(orthogonality_residual(P, Psi))
        if tau is None:
            return MembershipReport(0.0, complex("nan"), exact, tol)
        N = evaluate(P, tau)
    elif all(isinstance(x, (int, type(mpq(0)))) for row in P for x in row):
        exact = is_zero_poly_matrix([[x for x in row] for row in
                                     _sub(matmul(matmul(transpose(P), Psi), P), Psi)])
        N = [[complex(float(x)) for x in row] for row in P]
    else:
        N = [[complex(x) for x in row] for row in P]
    Q = [[complex(float(x)) for x in row] for row in Psi]
    R = _cmatmul(_cmatmul([list(r) for r in zip(*N)], Q), N)
    resid = max(abs(R[i][j] - Q[i][j]) for i in range(len(Q)) for j in range(len(Q)))
    p1 = [row[0] for row in N]
    pos = sum(p1[i] * Q[i][j] * p1[j].conjugate() for i in range(len(Q)) for j in range(len(Q)))
    return MembershipReport(resid, pos, exact, tol)


def _sub(A, B):
    return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(A, B)]


def sample_siegel(rng: random.Random, bound: float = 10.0) -> SiegelPoint:
    """Random point of the Siegel upper half space with entries of modulus <= bound."""
    while True:
        x = [rng.uniform(-bound / 2, bound / 2) for _ in range(3)]
        y1, y3 = rng.uniform(0.1, bound / 2), rng.uniform(0.1, bound / 2)
        lim = (y1 * y3) ** 0.5
        y2 = rng.uniform(-0.9 * lim, 0.9 * lim)
        try:
            return SiegelPoint(complex(x[0], y1), complex(x[1], y2), complex(x[2], y3))
        except SiegelPointError:
            continue


def tangent_check(P, X, Phi: Matrix = None, tol: ToleranceProfile = None) -> bool:
    """P^T Phi^-1 X + X^T Phi^-1 P == 0 (exact for rational input)."""
    Phi = Phi or load_matrix("phi")
    Pinv = inverse(to_q(Phi))
    exact = all(isinstance(x, (int, type(mpq(0)))) for M in (P, X) for row in M for x in row)
    if exact:
        A = matmul(matmul(transpose(P), Pinv), X)
        return all(A[i][j] + A[j][i] == 0 for i in range(len(A)) for j in range(len(A)))
    tol = tol or ToleranceProfile()
    Q = [[complex(float(x)) for x in row] for row in Pinv]
    Pn = [[complex(x) for x in row] for row in P]
    Xn = [[complex(x) for x in row] for row in X]
    A = _cmatmul(_cmatmul([list(r) for r in zip(*Pn)], Q), Xn)
    return all(abs(A[i][j] + A[j][i]) < tol.eps for i in range(len(A)) for j in range(len(A)))


# ---------------------------------------------------------------- composition

@dataclass
class ComposeReport:
    equal: bool
    left: Optional[Matrix]
    right: Optional[Matrix]
    diagonal_only: bool
    detail: str = ""


def _signed_permutations(n):
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            yield [[mpq(signs[j]) if perm[j] == i else mpq(0) for j in range(n)] for i in range(n)]


def _is_signed_permutation(M) -> bool:
    return (all(x in (0, 1, -1) for row in M for x in row)
            and all(sum(1 for x in row if x != 0) == 1 for row in M)
            and all(sum(1 for x in col if x != 0) == 1 for col in zip(*M)))


def compose_check(directory=None) -> ComposeReport:
    """Find constant signed permutations N1, N2 with P(tau) = N1 F(T_AbS(tau)) N2."""
    P = t_map(directory=directory)
    F = comparison_F(t_abs_map(), directory, check=False)
    pt = {"t1": mpq(3, 7), "t2": mpq(2, 5), "t3": mpq(-5, 3)}
    ev = lambda A: [[x.value_at(pt) if isinstance(x, MultiPoly) else mpq(x) for x in r] for r in A]
    Fi, P0 = inverse(ev(F)), ev(P)
    candidates = []
    for N2 in _signed_permutations(5):
        N1 = matmul(matmul(P0, inverse(N2)), Fi)
        if _is_signed_permutation(N1):
            lhs = matmul(matmul(_poly_mat(N1), F), _poly_mat(N2))
            if is_zero_poly_matrix(_sub(lhs, P)):
                diag = all(N1[i][j] == 0 for i in range(5) for j in range(5) if i != j) and \
                    all(N2[i][j] == 0 for i in range(5) for j in range(5) if i != j)
                candidates.append((diag, N1, N2))
    if not candidates:
        return ComposeReport(False, None, None, False, "no constant signed-permutation normalization")
    candidates.sort(key=lambda c: (not c[0], -sum(1 for row in c[1] for x in row if x > 0)))
    diag, N1, N2 = candidates[0]
    return ComposeReport(True, N1, N2, diag, f"{len(candidates)} normalizations found")


def lie_vector_field(P, g):
    """X = P g, the Pi-side field of a Lie algebra element."""
    return matmul(P, g)
