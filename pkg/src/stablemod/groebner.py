"""Buchberger's algorithm for ideals and submodules of free modules.

Module elements are sparse dicts mapping (position, exponent tuple) to a
field scalar.  The module order is position-over-term: an earlier position
always beats a later one, ties broken by the ring's monomial order.  That
makes appending "tag" coordinates behind the ambient ones an elimination
order, which is how syzygies and lifting coefficients are extracted: tag a
generator set with unit vectors, compute one reduced basis, and read
syzygies off the pure-tag elements and lifts off normal-form tags.

Quotient rings R = S/I are handled by augmenting generator sets with
I times the ambient standard basis vectors; this module itself only ever
computes over S.
"""

import heapq

from .poly import Polynomial, mono_mul, mono_divides, mono_div, mono_lcm, mono_degree

_WORK = 0


def work_counter():
    """Deterministic count of reduction steps performed so far."""
    return _WORK


def _module_key(order):
    ring_key = order.key

    def key(term):
        pos, expo = term
        return (-pos, ring_key(expo))

    return key


def vec_leading(vec, okey):
    return max(vec, key=okey)


def vec_reduce(vec, basis, okey, field):
    """Full normal form of `vec` against a list of monic (lead, dict) pairs."""
    global _WORK
    work = dict(vec)
    out = {}
    while work:
        t = max(work, key=okey)
        pos, expo = t
        hit = None
        for (bpos, bexpo), bvec in basis:
            if bpos == pos and mono_divides(bexpo, expo):
                hit = bvec
                break
        if hit is None:
            out[t] = work.pop(t)
            continue
        _WORK += 1
        c = work[t]
        shift = mono_div(expo, (bexpo))
        for (hp, he), hc in hit.items():
            key = (hp, mono_mul(he, shift))
            nv = field.sub(work.get(key, field.zero), field.mul(c, hc))
            if nv == field.zero:
                work.pop(key, None)
            else:
                work[key] = nv
    return out


def _vec_monic(vec, okey, field):
    lt = max(vec, key=okey)
    inv = field.inv(vec[lt])
    if inv == field.one:
        return vec
    return {t: field.mul(c, inv) for t, c in vec.items()}


def _spair(vec_i, lead_i, vec_j, lead_j, field):
    (pos, ei), (_, ej) = lead_i, lead_j
    l = mono_lcm(ei, ej)
    si = mono_div(l, ei)
    sj = mono_div(l, ej)
    out = {}
    for (p, e), c in vec_i.items():
        out[(p, mono_mul(e, si))] = c
    for (p, e), c in vec_j.items():
        key = (p, mono_mul(e, sj))
        nv = field.sub(out.get(key, field.zero), c)
        if nv == field.zero:
            out.pop(key, None)
        else:
            out[key] = nv
    return out


def module_groebner(vectors, order, field, rank_one=False):
    """Reduced Groebner basis of the submodule generated by `vectors`.

    `vectors` are term dicts; the result is a canonically sorted list of
    monic term dicts.  `rank_one` enables the coprime-leading-term
    criterion, which is only valid for polynomial ideals.
    """
    okey = _module_key(order)
    basis = []          # list of (lead, vec)
    pairs = []          # heap of (lcm degree, i, j)

    def add_pairs(new_index):
        lead_n = basis[new_index][0]
        for i in range(new_index):
            lead_i = basis[i][0]
            if lead_i[0] != lead_n[0]:
                continue
            l = mono_lcm(lead_i[1], lead_n[1])
            if rank_one and l == mono_mul(lead_i[1], lead_n[1]):
                continue
            heapq.heappush(pairs, (mono_degree(l), i, new_index))

    for vec in vectors:
        r = vec_reduce(vec, basis, okey, field)
        if r:
            basis.append((max(r, key=okey), _vec_monic(r, okey, field)))
            add_pairs(len(basis) - 1)

    while pairs:
        _, i, j = heapq.heappop(pairs)
        s = _spair(basis[i][1], basis[i][0], basis[j][1], basis[j][0], field)
        if not s:
            continue
        r = vec_reduce(s, basis, okey, field)
        if r:
            basis.append((max(r, key=okey), _vec_monic(r, okey, field)))
            add_pairs(len(basis) - 1)

    return _interreduce(basis, okey, field)


def _interreduce(basis, okey, field):
    # Discard elements whose lead is divisible by another kept lead, then
    # fully reduce each survivor against the others.
    keep = []
    order_sorted = sorted(range(len(basis)), key=lambda i: okey(basis[i][0]))
    for i in order_sorted:
        (pos, expo), _ = basis[i]
        redundant = False
        for j in keep:
            (p2, e2), _ = basis[j]
            if p2 == pos and mono_divides(e2, expo):
                redundant = True
                break
        if not redundant:
            keep.append(i)
    reduced = []
    for idx, i in enumerate(keep):
        others = [basis[keep[j]] for j in range(len(keep)) if j != idx]
        r = vec_reduce(basis[i][1], others, okey, field)
        if r:
            reduced.append(_vec_monic(r, okey, field))
    reduced.sort(key=lambda v: okey(max(v, key=okey)))
    return reduced


# -- conversions ---------------------------------------------------------------

def vec_from_polys(polys):
    """Term dict from a tuple of Polynomial (one per ambient position)."""
    vec = {}
    for pos, p in enumerate(polys):
        for expo, c in p.terms.items():
            vec[(pos, expo)] = c
    return vec


def polys_from_vec(vec, ring, rank):
    cols = [dict() for _ in range(rank)]
    for (pos, expo), c in vec.items():
        cols[pos][expo] = c
    return tuple(Polynomial(ring, t) for t in cols)


def poly_to_vec(p):
    return {(0, expo): c for expo, c in p.terms.items()}


# -- ideal-level operations ----------------------------------------------------

def buchberger(generators, order=None):
    """Reduced Groebner basis of the ideal generated by homogeneous inputs."""
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return []
    ring = gens[0].ring
    order = order or ring.order
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators from different rings")
        if not g.is_homogeneous():
            raise ValueError("non-homogeneous generator: %s" % g)
    gb = module_groebner([poly_to_vec(g) for g in gens], order, ring.field, rank_one=True)
    return [polys_from_vec(v, ring, 1)[0] for v in gb]


def normal_form(f, gb, order=None):
    """The unique remainder of f modulo a reduced Groebner basis."""
    if not gb:
        return f
    ring = gb[0].ring
    if f.ring != ring:
        raise ValueError("polynomial and basis from different rings")
    order = order or ring.order
    okey = _module_key(order)
    basis = [(max(poly_to_vec(g), key=okey), poly_to_vec(g)) for g in gb]
    r = vec_reduce(poly_to_vec(f), basis, okey, ring.field)
    return polys_from_vec(r, ring, 1)[0]


def krull_dim(ideal_gb, nvars):
    """Krull dimension of S/I from the leading-term ideal of a reduced GB.

    Combinatorial: the dimension is the size of a largest variable subset U
    such that no leading monomial is supported inside U.
    """
    supports = []
    for g in ideal_gb:
        expo, _ = g.leading_term()
        if not any(expo):
            raise ValueError("unit ideal has no Krull dimension")
        supports.append(frozenset(i for i, e in enumerate(expo) if e))
    if not supports:
        return nvars
    best = 0
    for mask in range(1 << nvars):
        subset = frozenset(i for i in range(nvars) if mask >> i & 1)
        if len(subset) <= best:
            continue
        if all(not s <= subset for s in supports):
            best = len(subset)
    return best


class SubmoduleGB:
    """Groebner data for the span of `columns` inside R^p, R = S/I.

    Built once from the tagged generator set; answers membership, lifting
    through the generators, and syzygies between them, all over R.
    """

    __slots__ = ("ring", "ideal_gb", "rank", "ncols", "okey", "gb", "_basis", "_syz")

    def __init__(self, polyring, ideal_gb, rank, columns):
        self.ring = polyring
        self.ideal_gb = ideal_gb
        self.rank = rank
        self.ncols = len(columns)
        self.okey = _module_key(polyring.order)
        field = polyring.field
        augmented = []
        for j, col in enumerate(columns):
            vec = vec_from_polys(col)
            if len(col) != rank:
                raise ValueError("column of wrong ambient rank")
            vec[(rank + j, polyring._zero_expo)] = field.one
            augmented.append(vec)
        for g in ideal_gb:
            for i in range(rank):
                augmented.append({(i, expo): c for expo, c in g.terms.items()})
        self.gb = module_groebner(augmented, polyring.order, field)
        self._basis = [(max(v, key=self.okey), v) for v in self.gb]
        self._syz = None

    def reduce(self, col):
        """Normal form of an ambient vector; returns (top, tags) polynomial tuples."""
        vec = vec_from_polys(col)
        r = vec_reduce(vec, self._basis, self.okey, self.ring.field)
        polys = polys_from_vec(r, self.ring, self.rank + self.ncols)
        return polys[: self.rank], polys[self.rank:]

    def contains(self, col):
        top, _ = self.reduce(col)
        return all(p.is_zero() for p in top)

    def normal_form(self, col):
        top, _ = self.reduce(col)
        return top

    def lift(self, col):
        """Coefficients c with  columns . c == col  modulo I, or None."""
        top, tags = self.reduce(col)
        if any(not p.is_zero() for p in top):
            return None
        return tuple(self._nf_ideal(-t) for t in tags)

    def syzygy_columns(self):
        """Generators of {c : columns . c == 0 over R}, as coefficient tuples."""
        if self._syz is None:
            out = []
            for vec in self.gb:
                if all(pos >= self.rank for pos, _ in vec):
                    polys = polys_from_vec(vec, self.ring, self.rank + self.ncols)
                    out.append(tuple(self._nf_ideal(p) for p in polys[self.rank:]))
            self._syz = out
        return self._syz

    def _nf_ideal(self, p):
        if not self.ideal_gb:
            return p
        return normal_form(p, self.ideal_gb)
