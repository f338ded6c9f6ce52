"""Minimal free resolutions, syzygies, transpose, Ext, and grade.

Resolutions are built by iterated syzygy extraction: each differential's
columns are a minimal homogeneous generating set of the kernel of the
previous one, so differentials of modules presented minimally have all
entries in the irrelevant ideal and the ranks are the graded Betti numbers.

The extension step is cached by the content of the differential being
extended.  That makes resolution construction deterministic and lets
independently built complexes (for instance the dualized-presentation
resolutions used by the comparison-map machinery) share their tails
whenever they share a differential.
"""

from .matrix import PolyMatrix
from .modules import (PresentedModule, GradedMorphism, minimalize, is_zero_module,
                      subquotient, _relations_modulo, ModuleError)


class HomologyError(RuntimeError):
    pass


def syzygy_step(ring, ambient_degs, cols, col_degs):
    """Minimal generators of the syzygies of `cols` over R.

    Returns (new_cols, new_col_degs): vectors of length len(cols) whose
    position j carries degree col_degs[j].
    """
    key = ("syz", tuple(ambient_degs),
           tuple(tuple(p.canonical_key() for p in c) for c in cols),
           tuple(col_degs))
    cached = ring._syzygy_step_cache.get(key)
    if cached is not None:
        return cached
    sub = ring.submodule(ambient_degs, cols)
    candidates = list(sub.syzygy_columns())
    minimal = ring.minimal_generator_columns(col_degs, candidates)
    new_degs = tuple(ring.column_degree(c, col_degs) for c in minimal)
    result = (minimal, new_degs)
    ring._syzygy_step_cache[key] = result
    return result


class Resolution:
    """A finite initial segment of a free resolution.

    ambients[i] are the generator degrees of position i; diffs[i] is the
    (1-indexed) differential from position i+1 into position i.  When built
    from a minimal presentation all differentials are minimal and the ranks
    are graded Betti numbers.
    """

    __slots__ = ("ring", "ambients", "diffs", "minimal", "module", "to_min", "from_min")

    def __init__(self, ring, ambients, diffs, minimal, module=None,
                 to_min=None, from_min=None):
        self.ring = ring
        self.ambients = [tuple(a) for a in ambients]
        self.diffs = list(diffs)
        self.minimal = minimal
        self.module = module
        self.to_min = to_min
        self.from_min = from_min

    @property
    def length(self):
        return len(self.diffs)

    def rank(self, i):
        return len(self.ambients[i])

    def betti(self):
        return [len(a) for a in self.ambients]

    def differential(self, i):
        """The map from position i to position i-1 (1-indexed)."""
        return self.diffs[i - 1]

    def position_module(self, n):
        """Coker of differential n+1, i.e. the n-th syzygy presented at position n."""
        if n == 0:
            mat = self.diffs[0] if self.diffs else \
                PolyMatrix.zero(self.ring.poly_ring, len(self.ambients[0]), 0)
            return PresentedModule(self.ring, self.ambients[0], mat,
                                   provenance=("syzygy", self, 0))
        if n >= len(self.diffs):
            raise HomologyError("resolution too short for syzygy %d" % n)
        return PresentedModule(self.ring, self.ambients[n], self.diffs[n],
                               provenance=("syzygy", self, n))

    def verify_complex(self):
        """Each composite of consecutive differentials reduces to zero mod I."""
        for i in range(len(self.diffs) - 1):
            comp = self.ring.nf_matrix(self.diffs[i].mul(self.diffs[i + 1]))
            if not comp.is_zero():
                return False
        return True

    def padded(self, stage, degree):
        """Insert a trivial free summand between positions stage and stage-1.

        The result is a non-minimal resolution of the same module (its
        position-0 cover grows by a summand mapping to zero when stage is 1).
        """
        if stage < 1 or stage > len(self.diffs):
            raise ValueError("padding stage out of range")
        ring = self.ring
        S = ring.poly_ring
        ambients = [list(a) for a in self.ambients]
        diffs = list(self.diffs)
        ambients[stage] = ambients[stage] + [degree]
        ambients[stage - 1] = ambients[stage - 1] + [degree]
        ident = PolyMatrix.identity(S, 1)
        diffs[stage - 1] = diffs[stage - 1].block_diag(ident)
        if stage >= 2:
            d_prev = diffs[stage - 2]
            diffs[stage - 2] = d_prev.hstack(PolyMatrix.zero(S, d_prev.nrows, 1))
        if stage < len(diffs):
            d_next = diffs[stage]
            diffs[stage] = d_next.vstack(PolyMatrix.zero(S, 1, d_next.ncols))
        return Resolution(ring, ambients, diffs, minimal=False, module=self.module,
                          to_min=self.to_min, from_min=self.from_min)


def build_resolution(ring, gen_degrees, first_diff, col_degrees, length):
    """Extend coker(first_diff) to a resolution of the requested length.

    The chain is cached and grown in place, keyed by the content of the
    starting differential, so independently requested resolutions that share
    a differential share their tails.
    """
    key = ("chain", tuple(gen_degrees), first_diff.content_key(), tuple(col_degrees))
    cache = ring._module_caches.setdefault("res_chain", {})
    state = cache.get(key)
    if state is None:
        state = {"ambients": [tuple(gen_degrees), tuple(col_degrees)],
                 "diffs": [first_diff]}
        cache[key] = state
    while len(state["diffs"]) < length:
        last = state["diffs"][-1]
        amb = state["ambients"][-2]
        cdegs = state["ambients"][-1]
        new_cols, new_degs = syzygy_step(ring, amb, last.columns(), cdegs)
        mat = PolyMatrix.from_columns(ring.poly_ring, new_cols, last.ncols)
        state["diffs"].append(mat)
        state["ambients"].append(new_degs)
    return Resolution(ring,
                      state["ambients"][: length + 1],
                      state["diffs"][: length],
                      minimal=True)


def resolve(module, length):
    """Minimal graded free resolution of the module to the requested length."""
    if length < 0:
        raise ValueError("resolution length must be nonnegative")
    minimal, to_min, from_min = minimalize(module)
    res = build_resolution(module.ring, minimal.gen_degrees, minimal.relations,
                           minimal.rel_degrees, max(length, 1))
    res = Resolution(module.ring, res.ambients[: length + 1], res.diffs[: length],
                     minimal=True, module=module, to_min=to_min, from_min=from_min)
    return res


def syzygy(module, n):
    """The n-th syzygy presented by the (n+1)-st differential; syzygy(M, 0) is M."""
    if n < 0:
        raise ValueError("syzygy index must be nonnegative")
    if n == 0:
        return module
    res = resolve(module, n + 1)
    return res.position_module(n)


def transpose(module):
    """Tr M: the cokernel of the dualized minimal presentation."""
    res = resolve(module, 1)
    d1 = res.diffs[0]
    gen_degs = tuple(-d for d in res.ambients[1])
    return PresentedModule(module.ring, gen_degs, d1.transpose(),
                           provenance=("transpose", module.content_key()))


def ext_from_resolution(res, i):
    """Ext^i as ker(d_{i+1}^T)/im(d_i^T), presented with cocycle provenance."""
    if i < 0:
        raise ValueError("ext index must be nonnegative")
    if res.length < i + 1:
        raise HomologyError("resolution too short for ext %d" % i)
    ring = res.ring
    ambient = tuple(-d for d in res.ambients[i])
    rank_i = len(ambient)
    d_next_t = res.diffs[i].transpose()
    cycle_cols = [d_next_t.column(t) for t in range(rank_i)]
    next_ambient = tuple(-d for d in res.ambients[i + 1])
    sub = ring.submodule(next_ambient, cycle_cols)
    cycles = list(sub.syzygy_columns())
    if i == 0:
        boundaries = []
    else:
        d_prev_t = res.diffs[i - 1].transpose()
        boundaries = d_prev_t.columns()
    return subquotient(ring, ambient, cycles, boundaries)


def ext(module, i):
    """Ext^i(M, R) with explicit cocycle generators; zero-ness is decidable."""
    cache = module.ring._module_caches.setdefault("ext", {})
    key = (module.content_key(), i)
    if key not in cache:
        res = resolve(module, i + 1)
        cache[key] = ext_from_resolution(res, i)
    return cache[key]


def residue_field_module(ring):
    """The residue field k = R/m presented by the row of variables."""
    if ring.nvars == 0:
        return PresentedModule.free(ring, (0,))
    row = [[ring.poly_ring.var(i) for i in range(ring.nvars)]]
    return PresentedModule(ring, (0,), PolyMatrix(ring.poly_ring, 1, ring.nvars, row))


def depth_ring(ring):
    """depth R = inf{i : Ext^i(k, R) != 0}, scanned up to dim R."""
    k = residue_field_module(ring)
    for i in range(ring.dim + 1):
        if not ext(k, i).is_zero():
            return GradeValue(i, ring.dim)
    raise HomologyError("depth scan exhausted below the ring dimension")


class GradeValue:
    """grade(M): a nonnegative integer, or infinity exactly for M = 0."""

    __slots__ = ("value", "bound_used")

    def __init__(self, value, bound_used):
        self.value = value          # int, or None for infinity
        self.bound_used = bound_used

    @property
    def is_infinite(self):
        return self.value is None

    def ge(self, n):
        return self.value is None or self.value >= n

    def __eq__(self, other):
        if isinstance(other, GradeValue):
            return self.value == other.value
        if other is None:
            return False
        return self.value == other

    def __hash__(self):
        return hash(("GradeValue", self.value))

    def __repr__(self):
        return "infinity" if self.value is None else str(self.value)


def grade(module):
    """Least i with Ext^i(M, R) nonzero; infinity exactly when M = 0.

    The scan stops at dim R: for a nonzero module the grade never exceeds
    the ring dimension, so exhausting the scan indicates an engine bug.
    """
    bound = module.ring.dim
    if is_zero_module(module):
        return GradeValue(None, bound)
    for i in range(bound + 1):
        if not ext(module, i).is_zero():
            return GradeValue(i, bound)
    raise HomologyError(
        "grade scan exhausted: nonzero module with Ext^0..Ext^%d all zero" % bound)


def is_n_torsionfree(module, n):
    """Ext^i(Tr M, R) = 0 for 1 <= i <= n; every module is 0-torsionfree."""
    if n < 0:
        raise ValueError("torsionfree index must be nonnegative")
    if n == 0:
        return True
    tr = transpose(module)
    return all(ext(tr, i).is_zero() for i in range(1, n + 1))


def torsionfree_level(module, n_max):
    """Largest n <= n_max with M n-torsionfree (stepwise Ext vanishing)."""
    tr = transpose(module)
    level = 0
    for i in range(1, n_max + 1):
        if ext(tr, i).is_zero():
            level = i
        else:
            break
    return level


def class_gmn(module, m, n):
    """Ext^i(M,R)=0 for i<=m and Ext^j(Tr M,R)=0 for j<=n."""
    if m < 0 or n < 0:
        raise ValueError("class indices must be nonnegative")
    for i in range(1, m + 1):
        if not ext(module, i).is_zero():
            return False
    return is_n_torsionfree(module, n)


def has_finite_length(module):
    """Dimension-zero support, read off the leading-term data per coordinate."""
    if module.ngens == 0:
        return True
    ring = module.ring
    if ring.nvars == 0:
        return True
    gb = module.relation_gb()
    leads = {}
    for vec in gb.gb:
        pos, expo = max(vec, key=gb.okey)
        if pos < gb.rank:
            leads.setdefault(pos, []).append(expo)
    for i in range(module.ngens):
        monos = leads.get(i, [])
        if any(not any(m) for m in monos):
            continue  # the whole coordinate collapses
        for v in range(ring.nvars):
            if not any(m[v] and all(e == 0 for w, e in enumerate(m) if w != v)
                       for m in monos):
                return False
    return True


def total_dimension(module, cap=None):
    """Total k-dimension of a finite-length module (error past `cap`)."""
    if module.ngens == 0:
        return 0
    lo = min(module.gen_degrees)
    hi = max(module.gen_degrees)
    total = 0
    d = lo
    while True:
        dim = module.graded_dim(d)
        total += dim
        if cap is not None and total > cap:
            raise HomologyError("dimension cap exceeded")
        if d >= hi and dim == 0:
            break
        d += 1
    return total


def module_std_basis(module):
    """Standard-monomial basis [(position, monomial)] of a finite-length module."""
    ring = module.ring
    gb = module.relation_gb()
    from .poly import mono_divides
    leads = []
    for vec in gb.gb:
        pos, expo = max(vec, key=gb.okey)
        if pos < gb.rank:
            leads.append((pos, expo))
    basis = []
    lo = min(module.gen_degrees)
    d = lo
    hi = max(module.gen_degrees)
    while True:
        found = 0
        for i, g in enumerate(module.gen_degrees):
            for m in ring.poly_ring.monomials_of_degree(d - g):
                if any(lp == i and mono_divides(le, m) for lp, le in leads):
                    continue
                # also reduce modulo the ring ideal's leading terms
                if any(mono_divides(ilt.leading_term()[0], m) for ilt in ring.ideal_gb):
                    continue
                basis.append((i, m))
                found += 1
        if d >= hi and found == 0:
            break
        d += 1
    return basis


def sgrade_at_least(module, n, dimension_cap=8, submodule_cap=20000):
    """Brute-force decision of s.grade(M) >= n over a prime field.

    Enumerates every submodule (invariant subspaces under the variable
    action on a standard-monomial basis) and checks grade >= n for each.
    Requires prime characteristic and finite length within the caps.
    """
    ring = module.ring
    p = ring.field.characteristic
    if p == 0:
        raise HomologyError("submodule enumeration needs a prime field")
    if not has_finite_length(module):
        raise HomologyError("submodule enumeration needs a finite-length module")
    if n <= 0:
        return True
    if is_zero_module(module):
        return True
    basis = module_std_basis(module)
    dim = len(basis)
    if dim > dimension_cap:
        raise HomologyError("dimension cap exceeded: %d > %d" % (dim, dimension_cap))
    index = {bm: t for t, bm in enumerate(basis)}
    gb = module.relation_gb()

    def element_vector(coeffs):
        polys = [dict() for _ in range(module.ngens)]
        for t, c in enumerate(coeffs):
            if c:
                i, m = basis[t]
                polys[i][m] = ring.field.coerce(c)
        return tuple(ring.poly_ring.poly(tp) for tp in polys)

    def to_coeffs(col):
        nf = gb.normal_form(col)
        out = [0] * dim
        for i, poly in enumerate(nf):
            for m, c in poly.terms.items():
                t = index.get((i, m))
                if t is None:
                    raise HomologyError("normal form escaped the standard basis")
                out[t] = c
        return out

    actions = []
    for v in range(ring.nvars):
        mat = []
        xv = ring.poly_ring.var(v)
        for t in range(dim):
            i, m = basis[t]
            col = [ring.zero()] * module.ngens
            col[i] = ring.nf(ring.poly_ring.monomial(m) * xv)
            mat.append(to_coeffs(tuple(col)))
        actions.append(mat)

    from . import linalg

    def canon(rows):
        reduced, _ = linalg.rref(rows, ring.field)
        return tuple(tuple(r) for r in reduced)

    def close(rows):
        rows = [list(r) for r in rows]
        changed = True
        while changed:
            changed = False
            reduced, _ = linalg.rref(rows, ring.field)
            rows = [list(r) for r in reduced]
            for r in list(rows):
                for mat in actions:
                    img = [ring.field.zero] * dim
                    for t, c in enumerate(r):
                        if c != ring.field.zero:
                            for s, a in enumerate(mat[t]):
                                if a:
                                    img[s] = ring.field.add(
                                        img[s], ring.field.mul(c, ring.field.coerce(a)))
                    if any(x != ring.field.zero for x in img) and \
                            not linalg.in_row_space(img, rows, ring.field):
                        rows.append(img)
                        changed = True
        return canon(rows)

    all_elements = []
    for code in range(1, p ** dim):
        coeffs = []
        c = code
        for _ in range(dim):
            coeffs.append(c % p)
            c //= p
        all_elements.append(coeffs)

    zero_space = tuple()
    seen = {zero_space}
    queue = [zero_space]
    spaces = [zero_space]
    while queue:
        space = queue.pop()
        rows = [list(r) for r in space]
        for coeffs in all_elements:
            vec = [ring.field.coerce(c) for c in coeffs]
            if rows and linalg.in_row_space(vec, rows, ring.field):
                continue
            bigger = close(rows + [vec])
            if bigger not in seen:
                seen.add(bigger)
                queue.append(bigger)
                spaces.append(bigger)
                if len(seen) > submodule_cap:
                    raise HomologyError("submodule cap exceeded")
    for space in spaces:
        if not space:
            continue
        gens = [element_vector(r) for r in space]
        rel_cols = _relations_modulo(ring, module.gen_degrees, gens,
                                     module.relations.columns())
        gdegs = [ring.column_degree(g, module.gen_degrees) for g in gens]
        sub = PresentedModule(ring, gdegs,
                              PolyMatrix.from_columns(ring.poly_ring, rel_cols, len(gens)))
        if not grade(sub).ge(n):
            return False
    return True
