"""Exact integer linear algebra: pairings, inertia, Smith normal form.

All matrices are lists of lists of Python ints (arbitrary precision);
rational work uses fractions.Fraction.  No floating point anywhere.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError

Matrix = list  # list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise ValidationError("matrix dimension mismatch in product")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m: Matrix, v) -> list:
    if len(m[0]) != len(v):
        raise ValidationError("matrix/vector dimension mismatch")
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def is_symmetric(g: Matrix) -> bool:
    n = len(g)
    return all(len(row) == n for row in g) and all(
        g[i][j] == g[j][i] for i in range(n) for j in range(i)
    )


def bilinear(g: Matrix, x, y) -> int:
    """x^T g y, exact."""
    n = len(g)
    if len(x) != n or len(y) != n:
        raise ValidationError(
            f"class length does not match form dimension {n}"
        )
    return sum(x[i] * g[i][j] * y[j] for i in range(n) for j in range(n))


def congruent(g: Matrix, u: Matrix) -> Matrix:
    """u^T g u."""
    return mat_mul(transpose(u), mat_mul(g, u))


def signature(g: Matrix) -> tuple[int, int, int]:
    """Inertia (pos, neg, zero) by exact symmetric Gaussian elimination.

    Uses congruence transforms only; a zero pivot with a nonzero row is
    handled by the standard hyperbolic-pair step (add row+column).
    """
    if not is_symmetric(g):
        raise ValidationError("signature requires a symmetric matrix")
    n = len(g)
    m = [[Fraction(x) for x in row] for row in g]
    pos = neg = zero = 0

    def add_rowcol(dst, src, f):
        for j in range(n):
            m[dst][j] += f * m[src][j]
        for i in range(n):
            m[i][dst] += f * m[i][src]

    def swap_rowcol(i, j):
        m[i], m[j] = m[j], m[i]
        for row in m:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                swap_rowcol(k, j)
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    zero += 1
                    continue
                add_rowcol(k, j, Fraction(1))  # now m[k][k] = 2*m[k][j] != 0
        p = m[k][k]
        for i in range(k + 1, n):
            if m[i][k] != 0:
                add_rowcol(i, k, -m[i][k] / p)
        if p > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg, zero


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, S, V) with U*m*V = S in Smith normal form.

    S is diagonal with non-negative entries, each dividing the next;
    U and V are unimodular.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = [row[:] for row in m]
    u = identity(rows)
    v = identity(cols)

    def row_add(i, j, f):  # row_i += f * row_j
        for k in range(cols):
            s[i][k] += f * s[j][k]
        for k in range(rows):
            u[i][k] += f * u[j][k]

    def col_add(i, j, f):  # col_i += f * col_j
        for k in range(rows):
            s[k][i] += f * s[k][j]
        for k in range(cols):
            v[k][i] += f * v[k][j]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for k in range(rows):
            s[k][i], s[k][j] = s[k][j], s[k][i]
        for k in range(cols):
            v[k][i], v[k][j] = v[k][j], v[k][i]

    def row_neg(i):
        s[i] = [-x for x in s[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # locate a minimal-magnitude nonzero pivot in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if s[i][j] != 0 and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            row_swap(t, best[0])
        if best[1] != t:
            col_swap(t, best[1])
        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t] != 0:
                    q = s[i][t] // s[t][t]
                    row_add(i, t, -q)
                    if s[i][t] != 0:  # remainder became new, smaller pivot
                        row_swap(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, cols):
                if s[t][j] != 0:
                    q = s[t][j] // s[t][t]
                    col_add(j, t, -q)
                    if s[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # enforce divisibility of the trailing block by the pivot
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if s[i][j] % s[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if s[t][t] < 0:
            row_neg(t)
        t += 1
    return u, s, v


def invariant_factors(m: Matrix) -> list[int]:
    _, s, _ = smith_normal_form(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i] != 0]


def is_primitive_matrix(m: Matrix) -> tuple[bool, list[int]]:
    """True iff the columns of m span a primitive sublattice.

    Witness: the list of invariant factors.  Raises if m is column
    rank-deficient.
    """
    cols = len(m[0]) if m else 0
    factors = invariant_factors(m)
    if len(factors) < cols:
        raise ValidationError("matrix does not have full column rank")
    return all(f == 1 for f in factors), factors


def det(m: Matrix):
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValidationError("determinant requires a square matrix")
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    for k in range(n):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    d = sign
    for k in range(n):
        d *= a[k][k]
    return int(d) if Fraction(d).denominator == 1 else d


def solve_linear(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Solve a square system exactly; None if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return None
        m[k], m[piv] = m[piv], m[k]
        inv = m[k][k]
        m[k] = [x / inv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [m[i][n] for i in range(n)]
