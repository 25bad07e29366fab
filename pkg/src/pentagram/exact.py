"""
Exact rational linear algebra over ``fractions.Fraction``.

Matrices are plain lists of rows (or anything indexable that way, numpy
object arrays included).  Everything here is exact: no tolerance appears
anywhere, so identities checked with these helpers are checked with
equality.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import Degenerate

Matrix = list[list[Fraction]]


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to Fraction.

    Floats are rejected on purpose: a float sneaking into the exact
    pipeline would silently turn equality checks into rounding checks.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(A, B) -> Matrix:
    rows, inner, cols = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(inner)), Fraction(0))
             for j in range(cols)] for i in range(rows)]


def matvec(A, v) -> list[Fraction]:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def columns_to_matrix(cols: Sequence[Sequence]) -> Matrix:
    """Build a matrix whose j-th column is ``cols[j]``."""
    m = len(cols[0])
    return [[cols[j][i] for j in range(len(cols))] for i in range(m)]


def _bareiss_int(M: list[list[int]]) -> int:
    # Fraction-free Gaussian elimination; every division below is exact.
    n = len(M)
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (pivot * rowi[j] - mik * rowk[j]) // prev
        prev = pivot
    return sign * M[n - 1][n - 1]


def det(A) -> Fraction:
    """Exact determinant by Bareiss elimination.

    Each column is first scaled to integers by the lcm of its
    denominators, so the elimination itself runs on Python ints.
    """
    n = len(A)
    if n == 0:
        return Fraction(1)
    cols = [[to_fraction(A[i][j]) for i in range(n)] for j in range(n)]
    scale = 1
    int_cols = []
    for col in cols:
        L = lcm(*(q.denominator for q in col))
        scale *= L
        int_cols.append([q.numerator * (L // q.denominator) for q in col])
    M = [[int_cols[j][i] for j in range(n)] for i in range(n)]
    return Fraction(_bareiss_int(M), scale)


def solve(A, b) -> list[Fraction]:
    """Solve ``A x = b`` exactly; raises Degenerate if A is singular."""
    n = len(A)
    M = [[to_fraction(A[i][j]) for j in range(n)] + [to_fraction(b[i])]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise Degenerate("singular system in exact solve")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def inverse(A) -> Matrix:
    n = len(A)
    cols = [solve(A, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    return columns_to_matrix(cols)


def _int_matmul(A, B) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def _scaled_integer(A) -> tuple[list[list[int]], int]:
    """(B, L) with B = L A an integer matrix, L the lcm of the denominators."""
    rows = [[to_fraction(x) for x in row] for row in A]
    L = lcm(*(q.denominator for row in rows for q in row))
    return [[q.numerator * (L // q.denominator) for q in row] for row in rows], L


def _int_product(mats) -> tuple[list[list[int]], int]:
    total, scale = None, 1
    for M in mats:
        B, L = _scaled_integer(M)
        total = B if total is None else _int_matmul(total, B)
        scale *= L
    # dividing by the common gcd leaves scale = lcm of the reduced denominators
    g = gcd(scale, *(x for row in total for x in row))
    return [[x // g for x in row] for row in total], scale // g


def product(mats) -> Matrix:
    """M_0 M_1 ... M_{m-1}, multiplied as integer matrices and rescaled once."""
    B, L = _int_product(mats)
    return [[Fraction(x, L) for x in row] for row in B]


def _int_charpoly(B: list[list[int]]) -> list[int]:
    # Faddeev-LeVerrier; the divisions by k are exact for integer input.
    n = len(B)
    coeffs = [1]
    Mk = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        # M_k = B M_{k-1} + c_{k-1} I,  c_k = -tr(B M_k) / k
        Mk = _int_matmul(B, Mk)
        for i in range(n):
            Mk[i][i] += c
        tr = sum(sum(B[i][t] * Mk[t][i] for t in range(n)) for i in range(n))
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        c = q
        coeffs.append(c)
    return coeffs


def _rescaled(coeffs: list[int], L: int) -> list[Fraction]:
    # det(x - A) for A = B / L: the x^{n-j} coefficient picks up L^{-j}
    return [Fraction(c, L ** j) for j, c in enumerate(coeffs)]


def charpoly(A) -> list[Fraction]:
    """Coefficients of det(x I - A), highest degree first (leading 1).

    Runs Faddeev-LeVerrier on the integer matrix L A and rescales.
    """
    B, L = _scaled_integer(A)
    return _rescaled(_int_charpoly(B), L)


def charpoly_of_product(mats) -> list[Fraction]:
    """charpoly(M_0 ... M_{m-1}) without normalizing the product to Fractions."""
    B, L = _int_product(mats)
    return _rescaled(_int_charpoly(B), L)


def _integer_rows(A) -> list[list[int]]:
    rows = []
    for row in A:
        row = [to_fraction(x) for x in row]
        L = lcm(*(q.denominator for q in row)) if row else 1
        rows.append([q.numerator * (L // q.denominator) for q in row])
    return rows


def echelon(A) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of A (rows rescaled to integers).

    Returns the reduced integer rows and the pivot columns.  Rows are
    divided by their content after every update to keep entries small.
    """
    M = _integer_rows(A)
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                m = M[i][c]
                new = [p * x - m * y for x, y in zip(M[i], M[r])]
                g = 0
                for x in new:
                    g = gcd(g, x)
                M[i] = [x // g for x in new] if g > 1 else new
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M[:r], pivots


def rank(A) -> int:
    return len(echelon(A)[1])


def nullspace(A) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    cols = len(A[0])
    E, pivots = echelon(A)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for row, pc in zip(E, pivots):
            x[pc] = Fraction(-row[f], row[pc])
        basis.append(x)
    return basis
