"""Graded quotient rings R = S/I and their exact element arithmetic.

The standing assumption is graded-local: I is homogeneous, contained in the
square of the irrelevant ideal (every generator has degree at least two),
and proper.  Under it the degree-zero part of R is the field, projective
graded modules are free, and unit entries of homogeneous matrices are
exactly the nonzero degree-zero entries, which is what makes Nakayama-style
minimalization valid downstream.

Elements are kept in normal form with respect to the fixed reduced Groebner
basis of I.  Rings carry caches (standard monomial bases, submodule bases,
resolution steps); the caches are invisible to callers: every cached value
is a pure function of the inputs.
"""

from .poly import FieldSpec, MonomialOrder, PolyRing
from .matrix import PolyMatrix
from .groebner import buchberger, normal_form, krull_dim, SubmoduleGB


class QuotientRing:
    """R = k[variables]/I with a fixed reduced Groebner basis for I."""

    def __init__(self, polyring, ideal_gb, dim):
        self.poly_ring = polyring
        self.ideal_gb = tuple(ideal_gb)
        self.dim = dim
        self._std_cache = {}
        self._subgb_cache = {}
        self._syzygy_step_cache = {}
        self._module_caches = {}

    @property
    def field(self):
        return self.poly_ring.field

    @property
    def variables(self):
        return self.poly_ring.variables

    @property
    def nvars(self):
        return self.poly_ring.nvars

    def nf(self, p):
        """Normal form of a polynomial modulo I."""
        if not self.ideal_gb:
            return p
        return normal_form(p, self.ideal_gb)

    def nf_vector(self, col):
        return tuple(self.nf(p) for p in col)

    def nf_matrix(self, mat):
        if not self.ideal_gb:
            return mat
        return mat.map(self.nf)

    def zero(self):
        return self.poly_ring.zero()

    def one(self):
        return self.poly_ring.one()

    def parse(self, text):
        return self.nf(self.poly_ring.parse(text))

    def element(self, value):
        if isinstance(value, str):
            return RingElement(self, self.parse(value))
        return RingElement(self, self.nf(self.poly_ring.constant(value)))

    def gens(self):
        return [RingElement(self, self.nf(v)) for v in self.poly_ring.gens()]

    # -- graded pieces ---------------------------------------------------------

    def std_monomials(self, d):
        """Exponent tuples forming a k-basis of the degree-d piece of R."""
        if d < 0:
            return []
        key = d
        if key not in self._std_cache:
            leads = [g.leading_term()[0] for g in self.ideal_gb]
            from .poly import mono_divides
            monos = [
                m for m in self.poly_ring.monomials_of_degree(d)
                if not any(mono_divides(lt, m) for lt in leads)
            ]
            self._std_cache[key] = monos
        return self._std_cache[key]

    def coeff_vector(self, p, d):
        """Coefficients of a normal-form element of degree d over std_monomials(d)."""
        basis = self.std_monomials(d)
        return [p.terms.get(m, self.field.zero) for m in basis]

    def free_piece_basis(self, gen_degrees, d):
        """Basis [(position, monomial)] of the degree-d piece of the free module."""
        out = []
        for i, g in enumerate(gen_degrees):
            for m in self.std_monomials(d - g):
                out.append((i, m))
        return out

    def vector_coeffs(self, col, gen_degrees, d):
        """Coefficient list of a homogeneous normal-form vector over free_piece_basis."""
        out = []
        for i, g in enumerate(gen_degrees):
            out.extend(self.coeff_vector(col[i], d - g))
        return out

    def vector_from_coeffs(self, coeffs, gen_degrees, d):
        polys = []
        at = 0
        for g in gen_degrees:
            basis = self.std_monomials(d - g)
            terms = {}
            for m in basis:
                c = coeffs[at]
                at += 1
                if c != self.field.zero:
                    terms[m] = c
            polys.append(self.poly_ring.poly(terms))
        return tuple(polys)

    # -- submodule machinery -----------------------------------------------------

    def submodule(self, gen_degrees, columns):
        """SubmoduleGB for the span of `columns` in the free module over R."""
        cols = tuple(self.nf_vector(c) for c in columns)
        key = (tuple(gen_degrees), tuple(tuple(p.canonical_key() for p in c) for c in cols))
        cached = self._subgb_cache.get(key)
        if cached is None:
            cached = SubmoduleGB(self.poly_ring, self.ideal_gb, len(gen_degrees), cols)
            self._subgb_cache[key] = cached
        return cached

    def column_degree(self, col, gen_degrees):
        """Common degree of a homogeneous vector; None for the zero vector."""
        deg = None
        for i, p in enumerate(col):
            if p.is_zero():
                continue
            d = p.homogeneous_degree() + gen_degrees[i]
            if deg is None:
                deg = d
            elif deg != d:
                raise ValueError("vector is not homogeneous")
        return deg

    def matrix_column_degrees(self, mat, gen_degrees):
        return tuple(self.column_degree(mat.column(j), gen_degrees) for j in range(mat.ncols))

    def submodule_piece(self, columns, col_degrees, gen_degrees, d):
        """Spanning vectors (coefficient rows) of the degree-d piece of the span."""
        rows = []
        for col, cd in zip(columns, col_degrees):
            if cd is None:
                continue
            for m in self.std_monomials(d - cd):
                shifted = tuple(self.nf(p * self.poly_ring.monomial(m)) for p in col)
                rows.append(self.vector_coeffs(shifted, gen_degrees, d))
        return rows

    def minimal_generator_columns(self, gen_degrees, columns, background=()):
        """A minimal homogeneous subset of `columns` generating their span
        modulo the span of `background`.

        Graded Nakayama: process degrees in increasing order and keep a
        column exactly when it falls outside the span of the background,
        lower-degree candidate products, and already-kept same-degree
        columns, decided by exact linear algebra on the graded pieces.
        """
        from . import linalg
        cols = [self.nf_vector(c) for c in columns]
        bg = [self.nf_vector(c) for c in background]
        bg_pairs = []
        for c in bg:
            d = self.column_degree(c, gen_degrees)
            if d is not None:
                bg_pairs.append((c, d))
        degs = []
        keepable = []
        for c in cols:
            d = self.column_degree(c, gen_degrees)
            if d is not None:
                keepable.append(c)
                degs.append(d)
        if not keepable:
            return []
        by_degree = {}
        for i in sorted(range(len(keepable)), key=lambda i: (degs[i], i)):
            by_degree.setdefault(degs[i], []).append(i)
        kept = []
        for d in sorted(by_degree):
            # the full background plus products of all lower-degree candidates
            # span the part a degree-d candidate must escape
            lower = [(keepable[i], degs[i]) for i in range(len(keepable)) if degs[i] < d]
            span_cols = [c for c, _ in lower] + [c for c, _ in bg_pairs]
            span_degs = [cd for _, cd in lower] + [cd for _, cd in bg_pairs]
            rows = self.submodule_piece(span_cols, span_degs, gen_degrees, d)
            current, _ = linalg.rref(rows, self.field)
            width = len(self.free_piece_basis(gen_degrees, d))
            for i in by_degree[d]:
                vec = self.vector_coeffs(keepable[i], gen_degrees, d)
                if len(vec) != width:
                    raise AssertionError("graded piece bookkeeping error")
                if not current or not linalg.in_row_space(vec, current, self.field):
                    kept.append(keepable[i])
                    current.append(vec)
                    current, _ = linalg.rref(current, self.field)
        return kept

    def content_key(self):
        return (self.poly_ring, tuple(g.canonical_key() for g in self.ideal_gb))

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and self.content_key() == other.content_key()

    def __hash__(self):
        return hash(("QuotientRing", self.content_key()))

    def __repr__(self):
        ideal = ",".join(str(g) for g in self.ideal_gb) or "0"
        return "%s/(%s)" % (self.poly_ring, ideal)


class RingElement:
    """An element of a QuotientRing, held in normal form."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        return self.ring.element(other)

    def __add__(self, other):
        return RingElement(self.ring, self.ring.nf(self.value + self._coerce(other).value))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElement(self.ring, self.ring.nf(self.value - self._coerce(other).value))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return RingElement(self.ring, self.ring.nf(self.value * self._coerce(other).value))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, -self.value)

    def is_zero(self):
        return self.value.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            try:
                other = self._coerce(other)
            except (ValueError, TypeError):
                return NotImplemented
        return self.ring == other.ring and self.value == other.value

    def __hash__(self):
        return hash((self.ring, self.value))

    def __repr__(self):
        return str(self.value)


def make_ring(field, variables, ideal_generators, order=None):
    """Build R = k[variables]/I, validating the graded-local conventions.

    Every ideal generator must be homogeneous of degree >= 2 (so I sits
    inside the square of the irrelevant ideal) and the ideal must be proper.
    """
    if not isinstance(field, FieldSpec):
        field = FieldSpec(field)
    polyring = PolyRing(field, variables, order or MonomialOrder())
    gens = []
    for g in ideal_generators:
        if isinstance(g, str):
            g = polyring.parse(g)
        if g.is_zero():
            continue
        if not g.is_homogeneous():
            raise ValueError("ideal generator %s is not homogeneous" % g)
        if g.homogeneous_degree() < 2:
            raise ValueError(
                "ideal generator %s has degree < 2; the quotient would not be "
                "graded-local with I inside the square of the irrelevant ideal" % g
            )
        gens.append(g)
    gb = buchberger(gens) if gens else []
    if any(not any(e for e in g.leading_term()[0]) for g in gb):
        raise ValueError("unit ideal")
    dim = krull_dim(gb, polyring.nvars)
    return QuotientRing(polyring, gb, dim)
