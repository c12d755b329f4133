"""Exact linear algebra over the rationals by fraction-free elimination."""
from fractions import Fraction
from math import lcm


def _integer_rows(rows):
    """Scale each row of rationals to integers (row scaling keeps the solution set)."""
    out = []
    for row in rows:
        den = 1
        for v in row:
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def echelon(rows, ncols, with_sign=False):
    """Bareiss elimination of the first ``ncols`` columns.

    Returns the reduced integer matrix and the list of pivot columns.  Row
    ``i`` of the result has its pivot in ``pivots[i]``; rows past the pivot
    count are zero in the first ``ncols`` columns.
    """
    mat = _integer_rows(rows)
    nrows = len(mat)
    width = len(mat[0]) if mat else 0
    pivots = []
    prev, r, sign = 1, 0, 1
    for col in range(ncols):
        if r == nrows:
            break
        sel = next((i for i in range(r, nrows) if mat[i][col] != 0), None)
        if sel is None:
            continue
        if sel != r:
            mat[r], mat[sel] = mat[sel], mat[r]
            sign = -sign
        piv = mat[r][col]
        for i in range(r + 1, nrows):
            lead = mat[i][col]
            row_i, row_r = mat[i], mat[r]
            for j in range(col, width):
                row_i[j] = (piv * row_i[j] - lead * row_r[j]) // prev
        # entries left of the pivot in eliminated rows are already zero
        pivots.append(col)
        prev = piv
        r += 1
    if with_sign:
        return mat, pivots, sign
    return mat, pivots


def rank(rows):
    if not rows:
        return 0
    return len(echelon(rows, len(rows[0]))[1])


class Unsolvable(Exception):
    pass


class Underdetermined(Exception):
    def __init__(self, rank):
        super().__init__(rank)
        self.rank = rank


def solve(matrix, rhs):
    """Unique exact solution of ``matrix @ v = rhs``.

    Raises Unsolvable when the system is inconsistent and Underdetermined
    when it is consistent but the columns are dependent.
    """
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    mat, pivots = echelon(aug, ncols)
    for i in range(len(pivots), len(mat)):
        if mat[i][ncols] != 0:
            raise Unsolvable()
    if len(pivots) < ncols:
        raise Underdetermined(len(pivots))
    sol = [Fraction(0)] * ncols
    for i in reversed(range(ncols)):
        row = mat[i]
        acc = Fraction(row[ncols])
        for j in range(i + 1, ncols):
            if row[j]:
                acc -= row[j] * sol[j]
        sol[i] = acc / row[i]
    return sol


def determinant(square):
    n = len(square)
    if n == 0:
        return 1
    mat, pivots, sign = echelon([list(r) for r in square], n, with_sign=True)
    if len(pivots) < n:
        return 0
    # Bareiss leaves the determinant in the last pivot
    return sign * mat[n - 1][n - 1]
