"""Small dense linear algebra over Fraction or float entries.

Matrices are tuples of row tuples.  Fraction input gives exact results;
float input uses partial pivoting with a tolerance-scaled zero test.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from . import scalar as sc
from .errors import DimensionMismatch, SingularMatrix

Matrix = tuple  # tuple[tuple[Number, ...], ...]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = tuple(tuple(sc.coerce(x) for x in row) for row in rows)
    if not m or any(len(r) != len(m[0]) for r in m):
        raise DimensionMismatch("ragged or empty matrix")
    sc.backend_of(x for r in m for x in r)
    return m


def shape(A: Matrix) -> tuple[int, int]:
    return len(A), len(A[0])


def backend(A: Matrix) -> sc.Backend:
    return sc.backend_of(x for r in A for x in r)


def identity(k: int, backend: sc.Backend = sc.Backend.EXACT_RATIONAL) -> Matrix:
    one, zero = (1.0, 0.0) if backend is sc.Backend.FLOAT64 else (Fraction(1), Fraction(0))
    return tuple(tuple(one if i == j else zero for j in range(k)) for i in range(k))


def diag(entries: Sequence) -> Matrix:
    entries = [sc.coerce(e) for e in entries]
    zero = 0.0 if isinstance(entries[0], float) else Fraction(0)
    k = len(entries)
    return tuple(tuple(entries[i] if i == j else zero for j in range(k)) for i in range(k))


def to_float(A: Matrix) -> Matrix:
    return tuple(tuple(float(x) for x in r) for r in A)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if len(A[0]) != len(B):
        raise DimensionMismatch(f"cannot multiply {shape(A)} by {shape(B)}")
    cols = tuple(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in A)


def matmul_exact(A: Matrix, B: Matrix) -> Matrix:
    """Product computed with exact rational arithmetic on the (possibly
    float) entries, rounded once at the end when the inputs are float."""
    is_float = any(isinstance(x, float) for r in (*A, *B) for x in r)
    if not is_float:
        return matmul(A, B)
    exact = matmul(tuple(tuple(Fraction(x) for x in r) for r in A),
                   tuple(tuple(Fraction(x) for x in r) for r in B))
    return to_float(exact)


def matvec(A: Matrix, v: Sequence) -> tuple:
    if len(A[0]) != len(v):
        raise DimensionMismatch(f"cannot apply {shape(A)} to a {len(v)}-vector")
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def scale(A: Matrix, s) -> Matrix:
    return tuple(tuple(s * x for x in r) for r in A)


def add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def max_abs(A: Matrix) -> float:
    return max((abs(float(x)) for r in A for x in r), default=0.0)


def equal(A: Matrix, B: Matrix) -> bool:
    """Exact equality for rationals, entrywise relative tolerance for floats."""
    if shape(A) != shape(B):
        return False
    exact = not any(isinstance(x, float) for r in (*A, *B) for x in r)
    if exact:
        return A == B
    tol = sc.get_tolerance()
    s = max(1.0, max_abs(A), max_abs(B))
    return all(abs(float(a) - float(b)) <= tol * s for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def relative_residual(A: Matrix, B: Matrix) -> float:
    s = max(1.0, max_abs(A), max_abs(B))
    return max(abs(float(a) - float(b)) for ra, rb in zip(A, B) for a, b in zip(ra, rb)) / s


def _is_zero(x, zero_tol: float) -> bool:
    if isinstance(x, float):
        return abs(x) <= zero_tol
    return x == 0


def row_reduce(A: Matrix):
    """Reduced row echelon form.  Returns ``(rref_rows, pivot_columns)``."""
    rows = [list(r) for r in A]
    m, k = len(rows), len(rows[0]) if rows else 0
    is_float = any(isinstance(x, float) for r in rows for x in r)
    zero_tol = sc.get_tolerance() * max(1.0, max_abs(A)) if is_float else 0.0
    pivots = []
    r = 0
    for c in range(k):
        if r == m:
            break
        if is_float:
            best = max(range(r, m), key=lambda i: abs(rows[i][c]))
            if _is_zero(rows[best][c], zero_tol):
                continue
        else:
            best = next((i for i in range(r, m) if rows[i][c] != 0), None)
            if best is None:
                continue
        rows[r], rows[best] = rows[best], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(m):
            if i != r and not _is_zero(rows[i][c], 0.0):
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(A: Matrix) -> int:
    return len(row_reduce(A)[1])


def solve(A: Matrix, b: Sequence) -> Optional[tuple]:
    """One solution of ``A x = b`` (free variables set to zero), or None
    when the system is inconsistent."""
    aug = tuple(tuple(row) + (bi,) for row, bi in zip(A, b))
    rows, pivots = row_reduce(aug)
    k = len(A[0])
    if k in pivots:
        return None
    zero = 0.0 if any(isinstance(x, float) for r in aug for x in r) else Fraction(0)
    x = [zero] * k
    for i, c in enumerate(pivots):
        x[c] = rows[i][k]
    return tuple(x)


def inverse(A: Matrix) -> Matrix:
    k = len(A)
    if any(len(r) != k for r in A):
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = tuple(tuple(row) + tuple(identity(k, backend(A))[i]) for i, row in enumerate(A))
    rows, pivots = row_reduce(aug)
    if pivots[:k] != list(range(k)):
        raise SingularMatrix("matrix is singular")
    return tuple(tuple(r[k:]) for r in rows)


def inverse_exact(A: Matrix) -> Matrix:
    """Inverse computed in exact arithmetic on the stored entries; float
    input is rounded once at the end."""
    if not any(isinstance(x, float) for r in A for x in r):
        return inverse(A)
    return to_float(inverse(tuple(tuple(Fraction(x) for x in r) for r in A)))


def det(A: Matrix):
    rows = [list(r) for r in A]
    k = len(rows)
    is_float = any(isinstance(x, float) for r in rows for x in r)
    result = 1.0 if is_float else Fraction(1)
    for c in range(k):
        if is_float:
            best = max(range(c, k), key=lambda i: abs(rows[i][c]))
        else:
            best = next((i for i in range(c, k) if rows[i][c] != 0), None)
            if best is None:
                return Fraction(0)
        if rows[best][c] == 0:
            return 0.0 if is_float else Fraction(0)
        if best != c:
            rows[c], rows[best] = rows[best], rows[c]
            result = -result
        p = rows[c][c]
        result *= p
        for i in range(c + 1, k):
            f = rows[i][c] / p
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return result
