"""Shape-safe matrices of polynomials.

A PolyMatrix always knows its shape, so rank-zero free modules (empty
matrices) work everywhere: maps to and from them are 0xN and Nx0 matrices.
"""


class PolyMatrix:
    __slots__ = ("ring", "nrows", "ncols", "rows", "_key")

    def __init__(self, ring, nrows, ncols, rows):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(tuple(row) for row in rows)
        if len(self.rows) != nrows or any(len(r) != ncols for r in self.rows):
            raise ValueError("matrix shape mismatch")
        self._key = None

    @classmethod
    def from_rows(cls, ring, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def zero(cls, ring, nrows, ncols):
        z = ring.zero()
        return cls(ring, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero(), ring.one()
        return cls(ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, ring, columns, nrows):
        z = ring.zero()
        rows = [[z] * len(columns) for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("column of wrong length")
            for i, p in enumerate(col):
                rows[i][j] = p
        return cls(ring, nrows, len(columns), rows)

    def entry(self, i, j):
        return self.rows[i][j]

    def column(self, j):
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return PolyMatrix(
            self.ring, self.ncols, self.nrows,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def mul(self, other):
        if self.ncols != other.nrows:
            raise ValueError("matrix product shape mismatch")
        z = self.ring.zero()
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = z
                for t in range(self.ncols):
                    a = self.rows[i][t]
                    b = other.rows[t][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return PolyMatrix(self.ring, self.nrows, other.ncols, rows)

    def mul_vec(self, col):
        if len(col) != self.ncols:
            raise ValueError("vector length mismatch")
        z = self.ring.zero()
        out = []
        for i in range(self.nrows):
            acc = z
            for t in range(self.ncols):
                a = self.rows[i][t]
                if a.terms and col[t].terms:
                    acc = acc + a * col[t]
            out.append(acc)
        return tuple(out)

    def add(self, other):
        self._same_shape(other)
        return PolyMatrix(
            self.ring, self.nrows, self.ncols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def sub(self, other):
        self._same_shape(other)
        return PolyMatrix(
            self.ring, self.nrows, self.ncols,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)],
        )

    def neg(self):
        return PolyMatrix(self.ring, self.nrows, self.ncols,
                          [[-a for a in r] for r in self.rows])

    def is_zero(self):
        return all(p.is_zero() for row in self.rows for p in row)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        return PolyMatrix(self.ring, self.nrows, self.ncols + other.ncols,
                          [r1 + r2 for r1, r2 in zip(self.rows, other.rows)])

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("vstack column mismatch")
        return PolyMatrix(self.ring, self.nrows + other.nrows, self.ncols,
                          self.rows + other.rows)

    def block_diag(self, other):
        z = self.ring.zero()
        top = [r + (z,) * other.ncols for r in self.rows]
        bottom = [(z,) * self.ncols + r for r in other.rows]
        return PolyMatrix(self.ring, self.nrows + other.nrows,
                          self.ncols + other.ncols, top + bottom)

    def map(self, fn):
        return PolyMatrix(self.ring, self.nrows, self.ncols,
                          [[fn(p) for p in row] for row in self.rows])

    def drop_columns(self, drop):
        keep = [j for j in range(self.ncols) if j not in drop]
        return PolyMatrix(self.ring, self.nrows, len(keep),
                          [[row[j] for j in keep] for row in self.rows])

    def drop_rows(self, drop):
        keep = [i for i in range(self.nrows) if i not in drop]
        return PolyMatrix(self.ring, len(keep), self.ncols,
                          [self.rows[i] for i in keep])

    def content_key(self):
        if self._key is None:
            self._key = (self.nrows, self.ncols,
                         tuple(p.canonical_key() for row in self.rows for p in row))
        return self._key

    def _same_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("matrix shape mismatch")

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.ring == other.ring
                and self.content_key() == other.content_key())

    def __hash__(self):
        return hash((self.ring, self.content_key()))

    def __str__(self):
        return "[" + "; ".join(", ".join(str(p) for p in row) for row in self.rows) + "]"

    def __repr__(self):
        return "PolyMatrix(%dx%d %s)" % (self.nrows, self.ncols, self)
