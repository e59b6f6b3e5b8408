"""Exact dense linear algebra over a field.

Matrices are lists of lists whose entries are Fractions or Scalars (any
type with exact +, -, *, /, truthiness as a zero test, and int/Fraction
coercion).  Plain int entries are promoted to Fraction on input so that
integer division never silently produces floats.  Pivoting picks the
first nonzero entry, which keeps results deterministic.
"""

from __future__ import annotations

from fractions import Fraction


class SingularMatrixError(ArithmeticError):
    pass


def _promote(x):
    return Fraction(x) if isinstance(x, int) else x


def coerce_matrix(rows) -> list[list]:
    return [[_promote(x) for x in row] for row in rows]


def coerce_vector(vec) -> list:
    return [_promote(x) for x in vec]


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(a, v):
    out = []
    for row in a:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v[1:]):
            acc = acc + x * y
        out.append(acc)
    return out


def rref(rows):
    """Reduced row echelon form.

    Returns (matrix, pivot_columns).  The input is not modified.
    """
    m = coerce_matrix(rows)
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def mat_rank(rows) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def mat_kernel(rows):
    """Basis of the right kernel {x : rows @ x = 0}."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def mat_det(rows):
    m = coerce_matrix(rows)
    n = len(m)
    if n == 0:
        return Fraction(1)
    sign = 1
    det = None
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            return m[0][0] - m[0][0]  # zero of the right type
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        pv = m[c][c]
        det = pv if det is None else det * pv
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det if sign > 0 else -det


def mat_solve(a, b):
    """Solve a @ x = b for square invertible a.

    b may be a vector or a matrix of column right-hand sides; the result
    has the same shape.
    """
    vector = b and not isinstance(b[0], list)
    bm = [[x] for x in coerce_vector(b)] if vector else coerce_matrix(b)
    n = len(a)
    aug = [list(coerce_vector(a[i])) + bm[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    sol = [row[n:] for row in red[:n]]
    return [row[0] for row in sol] if vector else sol


def mat_inverse(a):
    n = len(a)
    eye = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
           for i in range(n)]
    return mat_solve(a, eye)


def transpose(rows):
    return [list(col) for col in zip(*rows)] if rows else []
