"""Exact linear algebra over the rationals.

Matrices are lists of rows; entries are ``fractions.Fraction`` (ints are
promoted on the fly).  Ranks are computed by fraction-free (Bareiss)
elimination on denominator-cleared integer matrices, which keeps
intermediate entries as single big integers instead of growing fractions.
Kernel bases and linear solves use plain reduced row echelon form, where
fractions are unavoidable anyway.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def clear_rows(mat):
    """Scale each row by the lcm of its denominators; returns an int matrix.

    Row scaling by nonzero rationals preserves rank and row space.
    """
    out = []
    for row in mat:
        row = [Fraction(x) for x in row]
        m = 1
        for x in row:
            m = _lcm(m, x.denominator)
        out.append([int(x * m) for x in row])
    return out


def rank(mat) -> int:
    """Rank of a rational matrix via fraction-free Bareiss elimination."""
    a = clear_rows(mat)
    if not a or not a[0]:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    col = 0
    while r < nrows and col < ncols:
        piv = None
        for i in range(r, nrows):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        pivval = a[r][col]
        for i in range(r + 1, nrows):
            aic = a[i][col]
            for j in range(col + 1, ncols):
                # Bareiss update: division by the previous pivot is exact.
                a[i][j] = (a[i][j] * pivval - aic * a[r][j]) // prev
            a[i][col] = 0
        prev = pivval
        r += 1
        col += 1
    return r


def rref(mat):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    a = [[Fraction(x) for x in row] for row in mat]
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][col]
        a[r] = [x / pv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return a, pivots


def kernel_basis(mat, ncols: int):
    """Basis of the right kernel {x : mat @ x = 0} as a list of vectors."""
    if ncols == 0:
        return []
    if not mat:
        basis = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    rows, pivots = rref(mat)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for j in free:
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][j]
        basis.append(v)
    return basis


def solve(mat, rhs):
    """One solution of mat @ x = rhs, or None if inconsistent.

    When the system is underdetermined the free variables are set to zero.
    """
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    aug = [list(mat[i]) + [rhs[i]] for i in range(nrows)]
    rows, pivots = rref(aug)
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][ncols]
    return x


def mat_mul(a, b):
    if not a or not b:
        return []
    n, m, p = len(a), len(b), len(b[0])
    out = [[Fraction(0)] * p for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for k in range(m):
            c = ai[k]
            if c == 0:
                continue
            bk = b[k]
            row = out[i]
            for j in range(p):
                if bk[j] != 0:
                    row[j] += c * bk[j]
    return out


def is_zero(mat) -> bool:
    return all(x == 0 for row in mat for x in row)


def homology_dimension(d_out, d_in, dim: int) -> int:
    """dim ker(d_out) - rank(d_in) for maps out of / into a space of dimension dim.

    ``d_out`` rows map the space forward, ``d_in`` maps into it; both are
    matrices with ``dim`` columns resp. rows already arranged, or None for
    the zero map.
    """
    rk_out = rank(d_out) if d_out else 0
    rk_in = rank(d_in) if d_in else 0
    return dim - rk_out - rk_in
