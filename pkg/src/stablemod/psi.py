"""The double transpose-syzygy composites and their natural comparison maps.

J2_n M denotes TrOmega^n TrOmega^n M.  This module constructs, by explicit
chain lifting through dualized resolutions:

  * theta: a map X -> Omega^n Y transported to a map TrOmega^n Tr X -> Y
    (a bijection on stable hom-sets);
  * psi_step = psi^{n,n-1}_M: J2_n M -> J2_{n-1} M;
  * psi_prev = psi^{n-1}_M: J2_{n-1} M -> M and psi_n: J2_n M -> M;
  * gamma_M: Omega^n M -> Omega^n J2_{n-1} M, whose theta-image recovers
    psi_step up to stable equality (the first unit identity).

All constructions work on "presentation-form" resolutions: the resolution
of TrOmega^l M that starts with the dualized differential of the minimal
resolution of M.  Because resolution extension is cached by the content of
the starting differential, independently built complexes agree object-for-
object wherever the diagrams require the same module, so the unit
identities become decidable by exact stable-equality tests.

Lift choices are not unique; passing a seeded rng adds boundary
corrections at every lift, and all stable-class outputs must be unchanged
under re-randomization.
"""

import random

from .matrix import PolyMatrix
from .modules import (PresentedModule, GradedMorphism, minimalize, kernel,
                      is_zero_module, is_stably_zero, stably_isomorphic,
                      stably_equal, morphisms_stably_equivalent,
                      right_proj_approximation, stack_horizontal,
                      inclusion_first, is_surjective, is_stable_isomorphism,
                      ModuleError)
from .homology import (resolve, build_resolution, transpose, syzygy, ext,
                       HomologyError)
from .morphisms import _lift_columns, lift_chain, tr_morphism, omega_morphism


def _identity(ring, n):
    return PolyMatrix.identity(ring.poly_ring, n)


def dual_presentation_resolution(ring, res, level, length):
    """The resolution of TrOmega^level(module of res) in presentation form.

    Position 0 is the dual of res position level+1, position 1 the dual of
    position level, and the first differential is the transposed level+1
    differential; deeper positions extend by minimal syzygies.
    """
    if res.length < level + 1:
        raise HomologyError("resolution too short to dualize at level %d" % level)
    first = res.diffs[level].transpose()
    gen_degs = tuple(-d for d in res.ambients[level + 1])
    col_degs = tuple(-d for d in res.ambients[level])
    return build_resolution(ring, gen_degs, first, col_degs, length)


def tr_omega_square(ring, qres, level):
    """J2_level M = coker of the transposed (level+1)-st differential of qres."""
    if qres.length < level + 1:
        raise HomologyError("resolution too short for the composite at %d" % level)
    gen_degs = tuple(-d for d in qres.ambients[level + 1])
    return PresentedModule(ring, gen_degs, qres.diffs[level].transpose(),
                           provenance=("tr_omega_square", level))


def _counit_chain(ring, pres, qres, level, rng=None):
    """Verticals from the dualized minimal resolution into qres.

    Returns v[0..level+1]: v0 and v1 are identities at the presentation
    positions, v_j (j >= 2) lifts the square against P_{level+1-j}^*.
    """
    v = [_identity(ring, len(qres.ambients[0])),
         _identity(ring, len(qres.ambients[1]))]
    for j in range(2, level + 2):
        top_diff = pres.diffs[level + 1 - j].transpose()
        target = ring.nf_matrix(v[j - 1].mul(top_diff))
        v.append(_lift_columns(ring, qres.ambients[j - 1],
                               qres.diffs[j - 1].columns(), target, rng=rng,
                               through_degs=qres.ambients[j]))
    return v


def _step_chain(ring, qlow, qhigh, n, rng=None):
    """Verticals g_j: qlow position j -> qhigh position j+1 over the splice."""
    g = [_identity(ring, len(qhigh.ambients[1]))]
    for j in range(1, n + 1):
        target = ring.nf_matrix(g[j - 1].mul(qlow.diffs[j - 1]))
        g.append(_lift_columns(ring, qhigh.ambients[j],
                               qhigh.diffs[j].columns(), target, rng=rng,
                               through_degs=qhigh.ambients[j + 1]))
    return g


def _gamma_chain(ring, pres, qlow, sres, n, rng=None):
    """Verticals from the spliced complex (P-resolution continued by the
    dualized qlow resolution) into sres; position n carries gamma_M."""
    v = [_identity(ring, len(sres.ambients[0])),
         _identity(ring, len(sres.ambients[1]))]
    for j in range(2, n + 2):
        if j >= n:
            top_diff = pres.diffs[j - 1]
        else:
            top_diff = qlow.diffs[n - j].transpose()
        target = ring.nf_matrix(v[j - 1].mul(top_diff))
        v.append(_lift_columns(ring, sres.ambients[j - 1],
                               sres.diffs[j - 1].columns(), target, rng=rng,
                               through_degs=sres.ambients[j]))
    return v


def theta(alpha, n, rng=None):
    """Transport alpha: X -> Omega^n Y to a map TrOmega^n Tr X -> Y.

    The target of alpha must be a constructed syzygy module (carrying its
    resolution provenance); the result is independent of lift choices up to
    stable equality, which is what re-randomized lifts exercise.
    """
    prov = alpha.target.provenance
    if not (isinstance(prov, tuple) and len(prov) == 3 and prov[0] == "syzygy"):
        raise ModuleError("theta needs a constructed syzygy module as target")
    _, gres, level = prov
    if level != n:
        raise ModuleError("theta level mismatch: target is a %d-th syzygy, n=%d"
                          % (level, n))
    ring = alpha.ring
    gres = build_resolution(ring, gres.ambients[0], gres.diffs[0],
                            gres.ambients[1], max(n + 1, gres.length))
    x_res = resolve(alpha.source, 1)
    alpha_min = alpha.compose(x_res.from_min)
    alpha0 = alpha_min.matrix
    if n >= 1:
        target = ring.nf_matrix(alpha0.mul(x_res.diffs[0]))
        alpha1 = _lift_columns(ring, gres.ambients[n],
                               gres.diffs[n].columns(), target, rng=rng,
                               through_degs=gres.ambients[n + 1])
    else:
        # Omega^0 Y is coker(gres.diffs[0]); alpha lands in position 0 and
        # alpha1 is the witness on relations
        alpha1 = None
    hres = dual_presentation_resolution(ring, x_res, 0, n + 1)
    if n == 0:
        source = PresentedModule(ring, tuple(-d for d in hres.ambients[1]),
                                 hres.diffs[0].transpose())
        target_mod = PresentedModule(ring, gres.ambients[0], gres.diffs[0])
        return GradedMorphism(source, target_mod, alpha0)
    v = [alpha1.transpose(), alpha0.transpose()]
    for j in range(2, n + 2):
        top_diff = gres.diffs[n + 1 - j].transpose()
        target = ring.nf_matrix(v[j - 1].mul(top_diff))
        v.append(_lift_columns(ring, hres.ambients[j - 1],
                               hres.diffs[j - 1].columns(), target, rng=rng,
                               through_degs=hres.ambients[j]))
    source = tr_omega_square(ring, hres, n)
    target_mod = PresentedModule(ring, gres.ambients[0], gres.diffs[0])
    return GradedMorphism(source, target_mod, v[n + 1].transpose())


class PsiPackage:
    """The comparison data of M at level n.

    Fields: j2n = J2_n M, j2n1 = J2_{n-1} M, psi_step: j2n -> j2n1,
    psi_prev: j2n1 -> minimal(M), psi_n: j2n -> minimal(M), gamma:
    Omega^n M -> Omega^n J2_{n-1} M (theta-ready), plus the chain
    transcripts used to build them.
    """

    __slots__ = ("module", "minimal_module", "n", "j2n", "j2n1",
                 "psi_step", "psi_prev", "psi_n", "gamma", "transcripts")

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])


def build_psi(M, n, rng=None):
    """Construct J2_n M, J2_{n-1} M and the comparison maps by chain lifting.

    Deterministic when rng is None (and cached); a seeded rng re-randomizes
    every lift with boundary corrections.
    """
    if n < 1:
        raise ValueError("comparison maps start at level 1")
    ring = M.ring
    cache = ring._module_caches.setdefault("psi", {})
    key = (M.content_key(), n)
    if rng is None and key in cache:
        return cache[key]
    minimal, _, _ = minimalize(M)
    pres = resolve(M, n + 1)
    q_high = dual_presentation_resolution(ring, pres, n, n + 1)
    q_low = dual_presentation_resolution(ring, pres, n - 1, max(n, 1))
    j2n = tr_omega_square(ring, q_high, n)
    j2n1 = tr_omega_square(ring, q_low, n - 1)

    f_high = _counit_chain(ring, pres, q_high, n, rng=rng)
    f_low = _counit_chain(ring, pres, q_low, n - 1, rng=rng)
    g_chain = _step_chain(ring, q_low, q_high, n, rng=rng)

    psi_n = GradedMorphism(j2n, minimal, f_high[n + 1].transpose())
    psi_prev = GradedMorphism(j2n1, minimal, f_low[n].transpose())
    psi_step = GradedMorphism(j2n, j2n1, g_chain[n].transpose())

    s_res = build_resolution(ring,
                             tuple(-d for d in q_low.ambients[n]),
                             q_low.diffs[n - 1].transpose(),
                             tuple(-d for d in q_low.ambients[n - 1]),
                             n + 1)
    h_chain = _gamma_chain(ring, pres, q_low, s_res, n, rng=rng)
    gamma = GradedMorphism(pres.position_module(n), s_res.position_module(n),
                           h_chain[n])
    pkg = PsiPackage(module=M, minimal_module=minimal, n=n, j2n=j2n, j2n1=j2n1,
                     psi_step=psi_step, psi_prev=psi_prev, psi_n=psi_n,
                     gamma=gamma,
                     transcripts={"f_high": f_high, "f_low": f_low,
                                  "g": g_chain, "h": h_chain})
    if rng is None:
        cache[key] = pkg
    return pkg


def verify_unit(M, n, rng=None, search_rng=None):
    """Check the unit identities of the comparison maps at level n.

    (1) theta applied to gamma_M is stably equal to psi_step;
    (2) psi_n is stably equal to psi_prev after psi_step;
    (3) for n >= 2, psi_step is equivalent (up to stable isomorphisms of
        both ends) to TrOmegaTr of the step map of Omega M one level down.
    """
    pkg = build_psi(M, n, rng=rng)
    th = theta(pkg.gamma, n, rng=rng)
    report = {"n": n}
    if th.source != pkg.j2n or th.target != pkg.j2n1:
        report["unit1"] = False
        report["unit1_reason"] = "theta endpoints differ from the step map"
    else:
        report["unit1"] = stably_equal(th, pkg.psi_step)
    composite = pkg.psi_prev.compose(pkg.psi_step)
    report["unit2"] = stably_equal(pkg.psi_n, composite)
    if n >= 2:
        om = syzygy(M, 1)
        inner = build_psi(om, n - 1, rng=rng)
        t1 = tr_morphism(inner.psi_step)
        o1 = omega_morphism(t1, 1)
        t2 = tr_morphism(o1)
        report["unit3"] = morphisms_stably_equivalent(
            pkg.psi_step, t2, rng=search_rng or random.Random(7))
    return report


def extex_sequence(M, n, search_rng=None):
    """The short exact sequence refining the step map at level n >= 2.

    Requires Ext^{n-1}(Ext^n(M, R), R) = 0.  Returns the kernel E of the
    surjection (psi_step, cover): J2_n M + Q -> J2_{n-1} M together with
    exactness certificates and the stable comparison of E against
    TrOmega^{n-2} Ext^n(M, R).
    """
    if n < 2:
        raise ValueError("the refined sequence needs n >= 2")
    ring = M.ring
    en = ext(M, n)
    hyp = ext(en.module, n - 1)
    if not hyp.is_zero():
        raise HomologyError("hypothesis fails: Ext^{n-1} of the Ext module is nonzero")
    pkg = build_psi(M, n)
    cover = right_proj_approximation(pkg.j2n1)
    widened = stack_horizontal(pkg.psi_step, cover)
    E, incl = kernel(widened)
    surj = is_surjective(widened)
    incl_exact = is_zero_module(kernel(incl)[0])
    # the widened map matches psi_step along the inclusion of the first
    # summand, and that inclusion is a stable isomorphism
    first = inclusion_first(pkg.j2n, cover.source)
    middle_matches = widened.compose(first).equals(pkg.psi_step) and \
        is_stable_isomorphism(first)
    formula = transpose(syzygy(en.module, n - 2)) if not is_zero_module(en.module) \
        else PresentedModule.free(ring, ())
    e_min = minimalize(E)[0]
    f_min = minimalize(formula)[0]
    witness = stably_isomorphic(e_min, f_min, rng=search_rng or random.Random(11))
    return {
        "n": n,
        "kernel": E,
        "middle": widened.source,
        "quotient": pkg.j2n1,
        "inclusion": incl,
        "surjection": widened,
        "exact": surj and incl_exact,
        "middle_matches_step": middle_matches,
        "kernel_formula_module": formula,
        "kernel_matches_formula": witness is not None,
    }
