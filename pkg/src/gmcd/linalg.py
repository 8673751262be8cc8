"""Dense exact linear algebra on lists of lists.

Entries may be any field elements (mpq, RationalFunction) unless a function
says otherwise; ``bareiss_det`` works over an integral domain with exact
division (MultiPoly).
"""
from __future__ import annotations

from typing import Callable, List, Optional, Sequence

from gmpy2 import mpq

from .algebra import MultiPoly, exact_divide

Matrix = List[List[object]]


class SingularMatrixError(ArithmeticError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def zeros(n, m=None, zero=0):
    m = n if m is None else m
    return [[zero] * m for _ in range(n)]


def identity(n, one=1, zero=0):
    out = zeros(n, n, zero)
    for i in range(n):
        out[i][i] = one
    return out


def to_mpq(A) -> Matrix:
    return [[mpq(x) for x in row] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if len(A[0]) != len(B):
        raise ValueError("shape mismatch")
    Bt = transpose(B)
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = None
            for a, b in zip(row, col):
                if a == 0 or b == 0:
                    continue
                acc = a * b if acc is None else acc + a * b
            out_row.append(0 if acc is None else acc)
        out.append(out_row)
    return out


def matvec(A: Matrix, v: Sequence) -> list:
    out = []
    for row in A:
        acc = None
        for a, b in zip(row, v):
            if a == 0 or b == 0:
                continue
            acc = a * b if acc is None else acc + a * b
        out.append(0 if acc is None else acc)
    return out


def matadd(A: Matrix, B: Matrix, scale=1) -> Matrix:
    return [[a + scale * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(A: Matrix, c) -> Matrix:
    return [[c * a for a in row] for row in A]


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero_matrix(A: Matrix) -> bool:
    return all(a == 0 for row in A for a in row)


def _pivot_row(M, col, start):
    for r in range(start, len(M)):
        if M[r][col] != 0:
            return r
    return None


def det(A: Matrix):
    """Determinant over a field by Gaussian elimination."""
    M = [list(r) for r in A]
    n = len(M)
    sign = 1
    result = 1
    for c in range(n):
        p = _pivot_row(M, c, c)
        if p is None:
            return 0 * M[0][0] if n else 1
        if p != c:
            M[c], M[p] = M[p], M[c]
            sign = -sign
        piv = M[c][c]
        result = result * piv
        for r in range(c + 1, n):
            if M[r][c] != 0:
                f = M[r][c] / piv
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return result if sign > 0 else -result


def rref(A: Matrix):
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = _pivot_row(M, c, r)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for k in range(rows):
            if k != r and M[k][c] != 0:
                f = M[k][c]
                M[k] = [x - f * y for x, y in zip(M[k], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Matrix) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def solve(A: Matrix, b: Sequence):
    """Unique solution of A x = b for square nonsingular A."""
    n = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    M, piv = rref(aug)
    if piv[:n] != list(range(n)) or (len(piv) > n):
        raise SingularMatrixError("system is singular")
    return [M[i][n] for i in range(n)]


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    one = A[0][0] ** 0 if n else 1
    zero = one - one
    aug = [list(A[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    M, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in M]


def nullspace(A: Matrix) -> Matrix:
    """Basis of {x : A x = 0} as a list of vectors."""
    if not A:
        return []
    cols = len(A[0])
    M, piv = rref(A)
    free = [c for c in range(cols) if c not in piv]
    one = mpq(1)
    basis = []
    for fc in free:
        v = [0 * one] * cols
        v[fc] = one
        for r, pc in enumerate(piv):
            v[pc] = -M[r][fc]
        basis.append(v)
    return basis


def bareiss_det(A: Sequence[Sequence[MultiPoly]], term_budget: Optional[int] = None,
                divide: Callable = exact_divide):
    """Fraction-free determinant over a polynomial ring.

    Raises ``BudgetExceeded`` when any intermediate entry exceeds
    ``term_budget`` terms.
    """
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    ring = M[0][0].ring
    prev = MultiPoly.const(ring, 1)
    sign = 1
    for k in range(n - 1):
        if M[k][k].is_zero():
            for r in range(k + 1, n):
                if not M[r][k].is_zero():
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return MultiPoly(ring)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q = divide(num, prev)
                if q is None:
                    raise ArithmeticError("Bareiss division was not exact")
                if term_budget is not None and len(q.terms) > term_budget:
                    raise BudgetExceeded(f"entry with {len(q.terms)} terms at step {k}")
                M[i][j] = q
            M[i][k] = MultiPoly(ring)
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d
