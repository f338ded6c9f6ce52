"""Exact dense linear algebra over a FieldSpec.

Matrices here are lists of lists of field scalars.  Sizes stay small (the
graded pieces this package manipulates are low-dimensional), so plain
Gaussian elimination with exact arithmetic is the right tool.
"""


def rref(rows, field):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != field.zero:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != field.zero:
                factor = rows[i][c]
                rows[i] = [field.sub(x, field.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r] + [row for row in rows[r:] if any(x != field.zero for x in row)], pivots


def rank(rows, field):
    _, pivots = rref(rows, field)
    return len(pivots)


def in_row_space(vector, basis_rows, field):
    """Whether `vector` lies in the row space spanned by `basis_rows`."""
    reduced, pivots = rref(basis_rows, field)
    v = list(vector)
    for row, c in zip(reduced, pivots):
        if v[c] != field.zero:
            factor = v[c]
            v = [field.sub(x, field.mul(factor, y)) for x, y in zip(v, row)]
    return all(x == field.zero for x in v)


def nullspace(rows, ncols, field):
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    reduced, pivots = rref(rows, field)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for row, pc in zip(reduced, pivots):
            vec[pc] = field.neg(row[fc])
        basis.append(vec)
    return basis


def solve(rows, rhs, field):
    """One solution of A x = b, or None.  `rhs` is a column (list)."""
    if not rows:
        return [] if all(x == field.zero for x in rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, field)
    for row in reduced:
        if all(x == field.zero for x in row[:ncols]) and row[ncols] != field.zero:
            return None
    x = [field.zero] * ncols
    for row, pc in zip(reduced, pivots):
        if pc < ncols:
            x[pc] = row[ncols]
    return x


def annihilator(rows, ncols, field):
    """Rows spanning {y : y . v = 0 for every row v} (the orthogonal complement
    of the row space under the coordinate pairing)."""
    return nullspace(rows, ncols, field)
