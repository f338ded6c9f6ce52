"""Finitely presented graded modules and degree-zero homogeneous morphisms.

A module is the cokernel of a homogeneous matrix over R: generators carry
declared degrees, and every relation column is homogeneous against them.
Morphisms are degree-zero only; twists are expressed by shifting generator
degrees.  Every morphism stores a well-definedness witness computed at
construction time, so illegal matrices fail fast.

Hom-space questions (lifting, factoring through projectives, stable
isomorphism) all reduce to exact linear algebra on graded pieces, which is
what makes the stable-category questions decidable here.
"""

import random

from . import linalg
from .matrix import PolyMatrix


class ModuleError(ValueError):
    pass


class PresentedModule:
    __slots__ = ("ring", "gen_degrees", "relations", "rel_degrees", "_key", "provenance")

    def __init__(self, ring, gen_degrees, relations, provenance=None):
        self.ring = ring
        self.gen_degrees = tuple(gen_degrees)
        relations = ring.nf_matrix(relations)
        if relations.nrows != len(self.gen_degrees):
            raise ModuleError("relation matrix has %d rows for %d generators"
                              % (relations.nrows, len(self.gen_degrees)))
        keep = []
        degs = []
        for j in range(relations.ncols):
            col = relations.column(j)
            d = ring.column_degree(col, self.gen_degrees)
            if d is not None:
                keep.append(j)
                degs.append(d)
        if len(keep) != relations.ncols:
            relations = PolyMatrix.from_columns(
                ring.poly_ring, [relations.column(j) for j in keep], relations.nrows)
        self.relations = relations
        self.rel_degrees = tuple(degs)
        self._key = None
        self.provenance = provenance

    @classmethod
    def free(cls, ring, degrees):
        degrees = tuple(degrees)
        return cls(ring, degrees, PolyMatrix.zero(ring.poly_ring, len(degrees), 0))

    @classmethod
    def coker(cls, ring, matrix, gen_degrees=None):
        if gen_degrees is None:
            gen_degrees = (0,) * matrix.nrows
        return cls(ring, gen_degrees, matrix)

    @property
    def ngens(self):
        return len(self.gen_degrees)

    def relation_gb(self):
        return self.ring.submodule(self.gen_degrees, self.relations.columns())

    def contains_zero(self, col):
        """Whether an ambient vector represents zero in the module."""
        return self.relation_gb().contains(col)

    def is_free_presentation(self):
        return self.relations.ncols == 0

    def graded_dim(self, d):
        free = len(self.ring.free_piece_basis(self.gen_degrees, d))
        if free == 0:
            return 0
        rows = self.ring.submodule_piece(
            self.relations.columns(), self.rel_degrees, self.gen_degrees, d)
        return free - linalg.rank(rows, self.ring.field)

    def graded_dims(self, lo, hi):
        return [self.graded_dim(d) for d in range(lo, hi + 1)]

    def content_key(self):
        if self._key is None:
            self._key = (self.ring.content_key(), self.gen_degrees,
                         self.relations.content_key())
        return self._key

    def __eq__(self, other):
        return isinstance(other, PresentedModule) and self.content_key() == other.content_key()

    def __hash__(self):
        return hash(self.content_key())

    def __repr__(self):
        return "PresentedModule(gens=%s, rels=%s)" % (list(self.gen_degrees), self.relations)


class GradedMorphism:
    """A degree-zero homogeneous map between presented modules.

    The constructor checks homogeneity and computes the well-definedness
    witness G with  matrix . (source relations) = (target relations) . G
    over R, failing fast when no such G exists.
    """

    __slots__ = ("source", "target", "matrix", "witness", "_key")

    def __init__(self, source, target, matrix):
        if source.ring != target.ring:
            raise ModuleError("morphism between modules over different rings")
        ring = source.ring
        matrix = ring.nf_matrix(matrix)
        if matrix.nrows != target.ngens or matrix.ncols != source.ngens:
            raise ModuleError("morphism matrix shape %dx%d does not match (%d, %d)"
                              % (matrix.nrows, matrix.ncols, target.ngens, source.ngens))
        for i in range(matrix.nrows):
            for j in range(matrix.ncols):
                p = matrix.entry(i, j)
                if p.is_zero():
                    continue
                if p.homogeneous_degree() != source.gen_degrees[j] - target.gen_degrees[i]:
                    raise ModuleError(
                        "entry (%d,%d)=%s is not homogeneous of degree %d"
                        % (i, j, p, source.gen_degrees[j] - target.gen_degrees[i]))
        self.source = source
        self.target = target
        self.matrix = matrix
        gb = target.relation_gb()
        cols = []
        for t in range(source.relations.ncols):
            image = matrix.mul_vec(source.relations.column(t))
            lift = gb.lift(image)
            if lift is None:
                raise ModuleError("matrix does not define a morphism: relation %d "
                                  "is not sent into the target relations" % t)
            cols.append(lift)
        self.witness = PolyMatrix.from_columns(
            ring.poly_ring, cols, target.relations.ncols)
        self._key = None

    @property
    def ring(self):
        return self.source.ring

    @classmethod
    def identity(cls, module):
        return cls(module, module, PolyMatrix.identity(module.ring.poly_ring, module.ngens))

    @classmethod
    def zero(cls, source, target):
        return cls(source, target,
                   PolyMatrix.zero(source.ring.poly_ring, target.ngens, source.ngens))

    def compose(self, other):
        """self after other."""
        if other.target != self.source:
            raise ModuleError("composition endpoint mismatch")
        return GradedMorphism(other.source, self.target, self.matrix.mul(other.matrix))

    def __matmul__(self, other):
        return self.compose(other)

    def add(self, other):
        self._parallel(other)
        return GradedMorphism(self.source, self.target, self.matrix.add(other.matrix))

    def sub(self, other):
        self._parallel(other)
        return GradedMorphism(self.source, self.target, self.matrix.sub(other.matrix))

    def neg(self):
        return GradedMorphism(self.source, self.target, self.matrix.neg())

    def scale(self, c):
        return GradedMorphism(self.source, self.target, self.matrix.map(lambda p: p.scale(c)))

    def _parallel(self, other):
        if self.source != other.source or self.target != other.target:
            raise ModuleError("morphisms are not parallel")

    def is_zero_map(self):
        gb = self.target.relation_gb()
        return all(gb.contains(self.matrix.column(j)) for j in range(self.matrix.ncols))

    def equals(self, other):
        """Exact equality as module maps (difference lands in target relations)."""
        self._parallel(other)
        return self.sub(other).is_zero_map()

    def apply(self, col):
        return self.ring.nf_vector(self.matrix.mul_vec(col))

    def content_key(self):
        if self._key is None:
            self._key = (self.source.content_key(), self.target.content_key(),
                         self.matrix.content_key())
        return self._key

    def __eq__(self, other):
        return isinstance(other, GradedMorphism) and self.content_key() == other.content_key()

    def __hash__(self):
        return hash(self.content_key())

    def __repr__(self):
        return "GradedMorphism(%s)" % (self.matrix,)


class SubquotientPresentation:
    """Z/B presented inside a free ambient, with generator provenance.

    `cycle_generators` span Z, `boundary_columns` span B inside Z, and
    `module` is the induced presentation of Z/B whose generator t is the
    class of cycle_generators[t].
    """

    __slots__ = ("ring", "ambient_degrees", "cycle_generators", "boundary_columns", "module")

    def __init__(self, ring, ambient_degrees, cycle_generators, boundary_columns, module):
        self.ring = ring
        self.ambient_degrees = tuple(ambient_degrees)
        self.cycle_generators = list(cycle_generators)
        self.boundary_columns = list(boundary_columns)
        self.module = module

    def is_zero(self):
        return is_zero_module(self.module)

    def express(self, col):
        """Class of an ambient cycle vector on the module generators."""
        combined = list(self.cycle_generators) + list(self.boundary_columns)
        gb = self.ring.submodule(self.ambient_degrees, combined)
        lift = gb.lift(col)
        if lift is None:
            raise ModuleError("vector is not in the cycle span")
        return tuple(lift[: len(self.cycle_generators)])


def subquotient(ring, ambient_degrees, cycle_generators, boundary_columns):
    """Build Z/B with minimally chosen cycle generators."""
    boundary_columns = [ring.nf_vector(c) for c in boundary_columns]
    gens = ring.minimal_generator_columns(ambient_degrees, cycle_generators,
                                          background=boundary_columns)
    rel_cols = _relations_modulo(ring, ambient_degrees, gens, boundary_columns)
    gdegs = [ring.column_degree(g, ambient_degrees) for g in gens]
    module = PresentedModule(
        ring, gdegs,
        PolyMatrix.from_columns(ring.poly_ring, rel_cols, len(gens)))
    return SubquotientPresentation(ring, ambient_degrees, gens, boundary_columns, module)


def _relations_modulo(ring, ambient_degrees, gens, background):
    """Minimal generators of {c : gens . c lies in span(background)} over R."""
    if not gens:
        return []
    combined = list(gens) + list(background)
    gb = ring.submodule(ambient_degrees, combined)
    projected = [syz[: len(gens)] for syz in gb.syzygy_columns()]
    gdegs = [ring.column_degree(g, ambient_degrees) for g in gens]
    return ring.minimal_generator_columns(gdegs, projected)


# -- minimalization ------------------------------------------------------------


def minimalize(module):
    """Cancel unit relation entries and minimally regenerate the relations.

    Returns (minimal_module, to_min, from_min) where to_min: M -> M_min and
    from_min: M_min -> M are mutually inverse isomorphisms recorded on
    generators.  When the presentation is already minimal the module itself
    comes back with identity maps, so the operation is idempotent.
    """
    cache = module.ring._module_caches.setdefault("minimalize", {})
    key = module.content_key()
    if key in cache:
        return cache[key]

    ring = module.ring
    field = ring.field
    polyring = ring.poly_ring
    work = [list(row) for row in module.relations.rows]
    gdegs = list(module.gen_degrees)
    survivors = list(range(module.ngens))
    # expressions of original generators in terms of current ones (current x original)
    expr = [[polyring.one() if i == j else polyring.zero()
             for j in range(module.ngens)] for i in range(module.ngens)]
    ncols = module.relations.ncols

    def find_unit():
        for i in range(len(work)):
            for j in range(ncols):
                p = work[i][j]
                if not p.is_zero() and p.homogeneous_degree() == 0:
                    return i, j
        return None

    changed = False
    while True:
        hit = find_unit()
        if hit is None:
            break
        changed = True
        i, j = hit
        inv = field.inv(work[i][j].terms[polyring._zero_expo])
        coeffs = [ring.nf((-inv) * work[r][j]) for r in range(len(work))]
        for jj in range(ncols):
            if jj == j:
                continue
            factor = work[i][jj]
            if factor.is_zero():
                continue
            scaled = ring.nf(inv * factor)
            for r in range(len(work)):
                if r != i:
                    work[r][jj] = ring.nf(work[r][jj] - scaled * work[r][j])
        for r in range(len(work)):
            if r == i:
                continue
            c = coeffs[r]
            if not c.is_zero():
                for o in range(module.ngens):
                    if not expr[i][o].is_zero():
                        expr[r][o] = ring.nf(expr[r][o] + c * expr[i][o])
        del work[i], expr[i], survivors[i], gdegs[i]
        for row in work:
            del row[j]
        ncols -= 1

    cols = PolyMatrix(polyring, len(work), ncols, work).columns() if work else []
    min_cols = ring.minimal_generator_columns(gdegs, cols)
    if not changed and len(min_cols) == ncols:
        result = (module, GradedMorphism.identity(module), GradedMorphism.identity(module))
        cache[key] = result
        return result
    minimal = PresentedModule(
        ring, gdegs, PolyMatrix.from_columns(polyring, min_cols, len(gdegs)))
    to_min = GradedMorphism(module, minimal,
                            PolyMatrix(polyring, len(gdegs), module.ngens, expr))
    z, o = polyring.zero(), polyring.one()
    incl_rows = [[o if survivors[t] == i else z for t in range(len(survivors))]
                 for i in range(module.ngens)]
    from_min = GradedMorphism(minimal, module,
                              PolyMatrix(polyring, module.ngens, len(survivors), incl_rows))
    result = (minimal, to_min, from_min)
    cache[key] = result
    return result


def is_zero_module(module):
    return minimalize(module)[0].ngens == 0


def is_stably_zero(module):
    """Whether the module is graded free (zero in the stable category)."""
    return minimalize(module)[0].relations.ncols == 0


# -- kernels, cokernels, duals ---------------------------------------------------


def kernel(f):
    """(K, inclusion) with K -> source(f) the kernel of f."""
    ring = f.ring
    M, N = f.source, f.target
    combined = [f.matrix.column(j) for j in range(M.ngens)] + N.relations.columns()
    gb = ring.submodule(N.gen_degrees, combined)
    candidates = [syz[: M.ngens] for syz in gb.syzygy_columns()]
    gens = ring.minimal_generator_columns(M.gen_degrees, candidates,
                                          background=M.relations.columns())
    rel_cols = _relations_modulo(ring, M.gen_degrees, gens, M.relations.columns())
    gdegs = [ring.column_degree(g, M.gen_degrees) for g in gens]
    K = PresentedModule(ring, gdegs,
                        PolyMatrix.from_columns(ring.poly_ring, rel_cols, len(gens)))
    incl = GradedMorphism(K, M, PolyMatrix.from_columns(ring.poly_ring, gens, M.ngens))
    return K, incl


def cokernel(f):
    """(C, projection) with C presented on the target generators."""
    ring = f.ring
    N = f.target
    mat = N.relations.hstack(f.matrix)
    C = PresentedModule(ring, N.gen_degrees, mat)
    proj = GradedMorphism(N, C, PolyMatrix.identity(ring.poly_ring, N.ngens))
    return C, proj


def image_columns(f):
    """Generator images of f as ambient vectors in the target free module."""
    return [f.matrix.column(j) for j in range(f.source.ngens)]


def is_injective(f):
    return is_zero_module(kernel(f)[0])


def is_surjective(f):
    return is_zero_module(cokernel(f)[0])


def dual(module):
    """(Hom(M, R), cocycles): generator t is represented by the row vector
    cocycles[t] over the module generators.

    Computed as the kernel of the transposed relation matrix acting on the
    dual free module.
    """
    ring = module.ring
    dual_degs = tuple(-d for d in module.gen_degrees)
    if module.relations.ncols == 0:
        ident = PolyMatrix.identity(ring.poly_ring, module.ngens)
        gens = [ident.column(i) for i in range(module.ngens)]
    else:
        at = module.relations.transpose()
        cols = [at.column(i) for i in range(module.ngens)]
        rel_dual_degs = tuple(-d for d in module.rel_degrees)
        gb = ring.submodule(rel_dual_degs, cols)
        gens = ring.minimal_generator_columns(dual_degs, list(gb.syzygy_columns()))
    rel_cols = _relations_modulo(ring, dual_degs, gens, [])
    gdegs = [ring.column_degree(g, dual_degs) for g in gens]
    D = PresentedModule(ring, gdegs,
                        PolyMatrix.from_columns(ring.poly_ring, rel_cols, len(gens)))
    return D, gens


def dual_morphism(f):
    """Hom(f, R): target(f)* -> source(f)*, transported along the cocycles."""
    ring = f.ring
    DN, cocN = dual(f.target)
    DM, cocM = dual(f.source)
    src_dual_degs = tuple(-d for d in f.source.gen_degrees)
    gb = ring.submodule(src_dual_degs, cocM)
    cols = []
    for z in cocN:
        row = tuple(ring.nf(sum((z[i] * f.matrix.entry(i, j)
                                 for i in range(f.target.ngens)), ring.zero()))
                    for j in range(f.source.ngens))
        lift = gb.lift(row)
        if lift is None:
            raise ModuleError("dual transport failed; engine invariant broken")
        cols.append(lift)
    return GradedMorphism(DN, DM, PolyMatrix.from_columns(ring.poly_ring, cols, DM.ngens))


def biduality_map(module):
    """The canonical map M -> M** sending x to evaluation at x."""
    ring = module.ring
    D, coc = dual(module)
    DD, _coc2 = dual(D)
    dual_degs = tuple(-d for d in D.gen_degrees)
    gb = ring.submodule(dual_degs, _coc2)
    cols = []
    for i in range(module.ngens):
        w = tuple(y[i] for y in coc)
        lift = gb.lift(w)
        if lift is None:
            raise ModuleError("evaluation functional failed to lift; engine invariant broken")
        cols.append(lift)
    return GradedMorphism(module, DD,
                          PolyMatrix.from_columns(ring.poly_ring, cols, DD.ngens))


phi = biduality_map


# -- approximations and sums -----------------------------------------------------


def right_proj_approximation(module):
    """The free cover on the generators (surjective)."""
    F = PresentedModule.free(module.ring, module.gen_degrees)
    return GradedMorphism(F, module, PolyMatrix.identity(module.ring.poly_ring, module.ngens))


def left_proj_approximation(module):
    """M -> R^m assembled from the generator cocycles of M*; its dual is surjective."""
    ring = module.ring
    D, coc = dual(module)
    free_degs = tuple(-d for d in D.gen_degrees)
    F = PresentedModule.free(ring, free_degs)
    if coc:
        mat = PolyMatrix(ring.poly_ring, len(coc), module.ngens, [list(y) for y in coc])
    else:
        mat = PolyMatrix.zero(ring.poly_ring, 0, module.ngens)
    return GradedMorphism(module, F, mat)


def direct_sum(M, N):
    return PresentedModule(M.ring, M.gen_degrees + N.gen_degrees,
                           M.relations.block_diag(N.relations))


def inclusion_first(M, N):
    MN = direct_sum(M, N)
    z = PolyMatrix.zero(M.ring.poly_ring, N.ngens, M.ngens)
    return GradedMorphism(M, MN, PolyMatrix.identity(M.ring.poly_ring, M.ngens).vstack(z))


def inclusion_second(M, N):
    MN = direct_sum(M, N)
    z = PolyMatrix.zero(M.ring.poly_ring, M.ngens, N.ngens)
    return GradedMorphism(N, MN, z.vstack(PolyMatrix.identity(M.ring.poly_ring, N.ngens)))


def projection_first(M, N):
    MN = direct_sum(M, N)
    z = PolyMatrix.zero(M.ring.poly_ring, M.ngens, N.ngens)
    return GradedMorphism(MN, M, PolyMatrix.identity(M.ring.poly_ring, M.ngens).hstack(z))


def projection_second(M, N):
    MN = direct_sum(M, N)
    z = PolyMatrix.zero(M.ring.poly_ring, N.ngens, M.ngens)
    return GradedMorphism(MN, N, z.hstack(PolyMatrix.identity(M.ring.poly_ring, N.ngens)))


def stack_vertical(f, g):
    """(f; g): X -> Y + Z for f: X -> Y and g: X -> Z."""
    if f.source != g.source:
        raise ModuleError("vertical stack needs a common source")
    YZ = direct_sum(f.target, g.target)
    return GradedMorphism(f.source, YZ, f.matrix.vstack(g.matrix))


def stack_horizontal(f, g):
    """(f, g): X + Y -> Z for f: X -> Z and g: Y -> Z."""
    if f.target != g.target:
        raise ModuleError("horizontal stack needs a common target")
    XY = direct_sum(f.source, g.source)
    return GradedMorphism(XY, f.target, f.matrix.hstack(g.matrix))


# -- degreewise linear algebra on hom spaces --------------------------------------


class _Block:
    """Unknown layout for one homogeneous degree-zero matrix block."""

    def __init__(self, ring, tgt_degs, src_degs, offset):
        self.ring = ring
        self.tgt_degs = tuple(tgt_degs)
        self.src_degs = tuple(src_degs)
        self.slots = []
        for i in range(len(self.tgt_degs)):
            for j in range(len(self.src_degs)):
                e = self.src_degs[j] - self.tgt_degs[i]
                for m in ring.std_monomials(e):
                    self.slots.append((i, j, m))
        self.offset = offset

    def size(self):
        return len(self.slots)

    def build(self, values):
        ring = self.ring
        terms = [[dict() for _ in self.src_degs] for _ in self.tgt_degs]
        for (i, j, m), v in zip(self.slots, values):
            if v != ring.field.zero:
                terms[i][j][m] = v
        rows = [[ring.poly_ring.poly(t) for t in row] for row in terms]
        return PolyMatrix(ring.poly_ring, len(self.tgt_degs), len(self.src_degs), rows)


class _HomSystem:
    """Joint exact linear system over several unknown degree-zero blocks.

    A constraint says that a sum of contributions, each of the form
    post . (block . column) with an optional sign plus an optional fixed
    vector, either vanishes in its graded piece or lands in the degree
    piece of a given column span.
    """

    def __init__(self, ring):
        self.ring = ring
        self.blocks = []
        self.nvars = 0
        self.rows = []
        self.rhs = []

    def block(self, tgt_degs, src_degs):
        b = _Block(self.ring, tgt_degs, src_degs, self.nvars)
        self.blocks.append(b)
        self.nvars += b.size()
        return b

    def _part_vectors(self, part, ambient_degs, d):
        """Per-slot coefficient vectors of one (block, column, sign, post) part."""
        ring = self.ring
        block, column, sign, post = part
        width = len(ring.free_piece_basis(ambient_degs, d))
        out = []
        for (i, j, m) in block.slots:
            if j >= len(column) or column[j].is_zero():
                out.append(None)
                continue
            p = ring.nf(ring.poly_ring.monomial(m) * column[j])
            if p.is_zero():
                out.append(None)
                continue
            if post is None:
                ambient = [ring.zero()] * len(ambient_degs)
                ambient[i] = p
            else:
                ambient = [ring.nf(p * post.entry(r, i)) for r in range(post.nrows)]
            vec = ring.vector_coeffs(tuple(ambient), ambient_degs, d)
            if sign < 0:
                vec = [ring.field.neg(x) for x in vec]
            out.append(vec)
        return out, width

    def constrain(self, ambient_degs, d, parts, fixed=None, span=None):
        """Add the constraint  sum(parts) + fixed  == 0  or  in span.

        parts: list of (block, column, sign, post_matrix_or_None);
        fixed: an ambient vector of polynomials or None;
        span: (columns, column_degrees) over the same ambient, or None.
        """
        ring = self.ring
        width = len(ring.free_piece_basis(ambient_degs, d))
        if width == 0:
            return
        fixed_vec = [ring.field.zero] * width
        if fixed is not None:
            fixed_vec = ring.vector_coeffs(ring.nf_vector(fixed), ambient_degs, d)
        part_vecs = [self._part_vectors(p, ambient_degs, d)[0] for p in parts]
        if span is not None:
            span_cols, span_degs = span
            piece = ring.submodule_piece(span_cols, span_degs, ambient_degs, d)
            functionals = linalg.annihilator(piece, width, ring.field)
        else:
            functionals = [[ring.field.one if c == t else ring.field.zero
                            for t in range(width)] for c in range(width)]
        for a in functionals:
            row = [ring.field.zero] * self.nvars
            nonzero = False
            for part, vecs in zip(parts, part_vecs):
                block = part[0]
                for s, vec in enumerate(vecs):
                    if vec is None:
                        continue
                    acc = ring.field.zero
                    for av, xv in zip(a, vec):
                        if av != ring.field.zero and xv != ring.field.zero:
                            acc = ring.field.add(acc, ring.field.mul(av, xv))
                    if acc != ring.field.zero:
                        idx = block.offset + s
                        row[idx] = ring.field.add(row[idx], acc)
                        nonzero = True
            rhs = ring.field.zero
            for av, xv in zip(a, fixed_vec):
                if av != ring.field.zero and xv != ring.field.zero:
                    rhs = ring.field.add(rhs, ring.field.mul(av, xv))
            if nonzero or rhs != ring.field.zero:
                self.rows.append(row)
                self.rhs.append(ring.field.neg(rhs))

    def require_morphism(self, block, source, target):
        """Well-definedness of a block as a morphism source -> target."""
        for t in range(source.relations.ncols):
            self.constrain(
                target.gen_degrees, source.rel_degrees[t],
                [(block, source.relations.column(t), 1, None)],
                span=(target.relations.columns(), target.rel_degrees))

    def require_map_to_free(self, block, source, free_degs):
        """block . (source relations) must vanish identically."""
        for t in range(source.relations.ncols):
            self.constrain(free_degs, source.rel_degrees[t],
                           [(block, source.relations.column(t), 1, None)])

    def solve(self):
        if not self.rows:
            return [self.ring.field.zero] * self.nvars
        return linalg.solve(self.rows, self.rhs, self.ring.field)

    def nullspace(self):
        if not self.rows:
            return [[self.ring.field.one if i == j else self.ring.field.zero
                     for j in range(self.nvars)] for i in range(self.nvars)]
        return linalg.nullspace(self.rows, self.nvars, self.ring.field)

    def is_homogeneous(self):
        return all(x == self.ring.field.zero for x in self.rhs)


def _unit_columns(ring, n):
    ident = PolyMatrix.identity(ring.poly_ring, n)
    return [ident.column(j) for j in range(n)]


def hom_space(M, N, d=0):
    """A k-basis of homogeneous degree-d maps M -> N, as certified morphisms.

    Degree-d maps are encoded as degree-zero morphisms out of M with its
    generator degrees shifted by d.
    """
    ring = M.ring
    shifted = PresentedModule(ring, tuple(g + d for g in M.gen_degrees), M.relations) \
        if d else M
    system = _HomSystem(ring)
    block = system.block(N.gen_degrees, shifted.gen_degrees)
    system.require_morphism(block, shifted, N)
    basis = []
    for vec in system.nullspace():
        mat = block.build(vec[block.offset: block.offset + block.size()])
        basis.append(GradedMorphism(shifted, N, mat))
    return basis


def factors_through_projective(f):
    """(flag, witness): whether f lifts along the free cover of its target.

    A map factors through some projective exactly when it factors through
    the cover R^{gens(target)} -> target; the witness is that lift.
    """
    ring = f.ring
    M, N = f.source, f.target
    system = _HomSystem(ring)
    h = system.block(N.gen_degrees, M.gen_degrees)
    system.require_map_to_free(h, M, N.gen_degrees)
    units = _unit_columns(ring, M.ngens)
    for j in range(M.ngens):
        system.constrain(
            N.gen_degrees, M.gen_degrees[j],
            [(h, units[j], -1, None)],
            fixed=f.matrix.column(j),
            span=(N.relations.columns(), N.rel_degrees))
    sol = system.solve()
    if sol is None:
        return False, None
    mat = h.build(sol[h.offset: h.offset + h.size()])
    F = PresentedModule.free(ring, N.gen_degrees)
    return True, GradedMorphism(M, F, mat)


def stably_equal(f, g):
    """Whether two parallel morphisms agree in the stable category."""
    return factors_through_projective(f.sub(g))[0]


def is_stable_isomorphism(f):
    """Whether f is invertible modulo maps through projectives.

    Exact decision: a two-sided stable inverse g exists iff the joint
    linear system over (g, two projective-factorization witnesses) is
    solvable on the degree-zero graded pieces.
    """
    ring = f.ring
    M, N = f.source, f.target
    system = _HomSystem(ring)
    g = system.block(M.gen_degrees, N.gen_degrees)
    h = system.block(M.gen_degrees, M.gen_degrees)
    h2 = system.block(N.gen_degrees, N.gen_degrees)
    system.require_morphism(g, N, M)
    system.require_map_to_free(h, M, M.gen_degrees)
    system.require_map_to_free(h2, N, N.gen_degrees)
    units_M = _unit_columns(ring, M.ngens)
    units_N = _unit_columns(ring, N.ngens)
    one = ring.one()
    for j in range(M.ngens):
        minus_ident = tuple(-one if t == j else ring.zero() for t in range(M.ngens))
        system.constrain(
            M.gen_degrees, M.gen_degrees[j],
            [(g, f.matrix.column(j), 1, None), (h, units_M[j], -1, None)],
            fixed=minus_ident,
            span=(M.relations.columns(), M.rel_degrees))
    for j in range(N.ngens):
        minus_ident = tuple(-one if t == j else ring.zero() for t in range(N.ngens))
        system.constrain(
            N.gen_degrees, N.gen_degrees[j],
            [(g, units_N[j], 1, f.matrix), (h2, units_N[j], -1, None)],
            fixed=minus_ident,
            span=(N.relations.columns(), N.rel_degrees))
    return system.solve() is not None


def projective_hom_dimension(M, N):
    """k-dimension of the subspace of Hom(M, N) factoring through projectives.

    Solves jointly for a morphism f and a lift h through the free cover of
    N with f == pi . h; the f-block projection of the solution space is
    exactly that subspace.
    """
    ring = M.ring
    system = _HomSystem(ring)
    fblk = system.block(N.gen_degrees, M.gen_degrees)
    hblk = system.block(N.gen_degrees, M.gen_degrees)
    system.require_morphism(fblk, M, N)
    system.require_map_to_free(hblk, M, N.gen_degrees)
    units = _unit_columns(ring, M.ngens)
    for j in range(M.ngens):
        system.constrain(
            N.gen_degrees, M.gen_degrees[j],
            [(fblk, units[j], 1, None), (hblk, units[j], -1, None)],
            span=(N.relations.columns(), N.rel_degrees))
    rows = [vec[fblk.offset: fblk.offset + fblk.size()] for vec in system.nullspace()]
    return linalg.rank(rows, ring.field) if rows else 0


def stable_hom_dimension(M, N):
    """k-dimension of Hom(M, N) modulo maps factoring through projectives."""
    return len(hom_space(M, N, 0)) - projective_hom_dimension(M, N)


def _combine(space, coeffs, field):
    n = len(space[0])
    out = [field.zero] * n
    for c, vec in zip(coeffs, space):
        c = field.coerce(c)
        if c == field.zero:
            continue
        for i in range(n):
            if vec[i] != field.zero:
                out[i] = field.add(out[i], field.mul(c, vec[i]))
    return out


def stably_isomorphic(A, B, rng=None, tries=60):
    """Search for a stable isomorphism A -> B; returns a witness or None.

    A found witness is certified exactly.  The search tries canonical
    candidates first and then seeded random combinations of a hom-space
    basis; over finite fields with small hom spaces it enumerates.  Absence
    of a witness after the budget is reported as None (the caller decides
    how to read that).
    """
    if A == B:
        return GradedMorphism.identity(A)
    za, zb = is_stably_zero(A), is_stably_zero(B)
    if za and zb:
        return GradedMorphism.zero(A, B)
    if za != zb:
        return None
    basis = hom_space(A, B, 0)
    if not basis:
        return None
    field = A.ring.field
    rng = rng or random.Random(0)
    candidates = []
    for f in basis:
        candidates.append(f)
    if field.characteristic and field.characteristic ** len(basis) <= 4096:
        # exhaustive over small finite hom spaces
        coeff_range = list(range(field.characteristic))
        stack = [[]]
        for _ in basis:
            stack = [s + [c] for s in stack for c in coeff_range]
        for coeffs in stack:
            if all(c == 0 for c in coeffs):
                continue
            g = None
            for c, b in zip(coeffs, basis):
                if c:
                    term = b.scale(c)
                    g = term if g is None else g.add(term)
            if g is not None:
                candidates.append(g)
    else:
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                candidates.append(basis[i].add(basis[j]))
                candidates.append(basis[i].sub(basis[j]))
        for _ in range(tries):
            g = None
            for b in basis:
                c = rng.randint(-2, 2)
                if c:
                    term = b.scale(c)
                    g = term if g is None else g.add(term)
            if g is not None:
                candidates.append(g)
    seen = set()
    for g in candidates:
        k = g.content_key()
        if k in seen:
            continue
        seen.add(k)
        if is_stable_isomorphism(g):
            return g
    return None


def morphisms_stably_equivalent(f, g, rng=None, tries=60):
    """Whether f and g agree up to stable isomorphisms of both endpoints.

    Solves the linear space of pairs (s, t) with t.f stably equal to g.s,
    then searches it for a pair of stable isomorphisms.  A found pair is
    certified; None-found after the budget reports False.
    """
    ring = f.ring
    X, Y = f.source, f.target
    X2, Y2 = g.source, g.target
    system = _HomSystem(ring)
    s = system.block(X2.gen_degrees, X.gen_degrees)
    t = system.block(Y2.gen_degrees, Y.gen_degrees)
    h = system.block(Y2.gen_degrees, X.gen_degrees)
    system.require_morphism(s, X, X2)
    system.require_morphism(t, Y, Y2)
    system.require_map_to_free(h, X, Y2.gen_degrees)
    units = _unit_columns(ring, X.ngens)
    for j in range(X.ngens):
        system.constrain(
            Y2.gen_degrees, X.gen_degrees[j],
            [(t, f.matrix.column(j), 1, None),
             (s, units[j], -1, g.matrix),
             (h, units[j], -1, None)],
            span=(Y2.relations.columns(), Y2.rel_degrees))
    space = system.nullspace()
    if not space:
        return False
    field = ring.field
    rng = rng or random.Random(0)
    combos = []
    for vec in space:
        combos.append(vec)
    if field.characteristic and field.characteristic ** len(space) <= 4096:
        coeff_range = list(range(field.characteristic))
        stack = [[]]
        for _ in space:
            stack = [st + [c] for st in stack for c in coeff_range]
        for coeffs in stack:
            if any(coeffs):
                combos.append(_combine(space, coeffs, field))
    else:
        for _ in range(tries):
            coeffs = [rng.randint(-2, 2) for _ in space]
            if any(coeffs):
                combos.append(_combine(space, coeffs, field))
    seen = set()
    for vec in combos:
        key = tuple(vec)
        if key in seen:
            continue
        seen.add(key)
        s_mat = s.build(vec[s.offset: s.offset + s.size()])
        t_mat = t.build(vec[t.offset: t.offset + t.size()])
        try:
            s_mor = GradedMorphism(X, X2, s_mat)
            t_mor = GradedMorphism(Y, Y2, t_mat)
        except ModuleError:
            continue
        if is_stable_isomorphism(s_mor) and is_stable_isomorphism(t_mor):
            return True
    return False
