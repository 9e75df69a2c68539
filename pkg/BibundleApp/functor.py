"""
Internal functors between finite groupoids, restriction along a functor and
its left adjoint (induction), plus the essential-equivalence predicates.
"""
import logging
from collections import Counter
from dataclasses import dataclass

from . import finset
from .action import (
    BiAction, EquivariantMap, FrobeniusWitness, make_action, make_biaction,
    product_action, right_action_on_left_orbits,
)
from .exceptions import ShapeMismatch
from .finset import FinMap
from .groupoid import product_groupoid, trivial_groupoid
from .validation import ReportBuilder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InternalFunctor:
    dom: object
    cod: object
    obj_map: FinMap
    arr_map: FinMap

    def __repr__(self):
        return f'InternalFunctor({self.dom!r} -> {self.cod!r})'

    def on_object(self, x):
        return self.obj_map(x)

    def on_arrow(self, h):
        return self.arr_map(h)


def make_functor(H, G, obj_map, arr_map):
    return InternalFunctor(
        H, G, FinMap(H.objects, G.objects, obj_map), FinMap(H.arrows, G.arrows, arr_map)
    )


def validate_functor(F):
    H, G = F.dom, F.cod
    report = ReportBuilder()
    if (F.obj_map.dom != H.objects or F.obj_map.cod != G.objects
            or F.arr_map.dom != H.arrows or F.arr_map.cod != G.arrows):
        report.add('shape', 'component maps do not run between the right sets')
        return report.build()
    for h in H.arrows:
        g = F.arr_map(h)
        if G.src(g) != F.obj_map(H.src(h)):
            report.add('src-compat', 'source of the image is not the image of the source', h)
        if G.tgt(g) != F.obj_map(H.tgt(h)):
            report.add('tgt-compat', 'target of the image is not the image of the target', h)
    for x in H.objects:
        if F.arr_map(H.unit(x)) != G.unit(F.obj_map(x)):
            report.add('unit', 'identity is not sent to an identity', x)
    if report.has('src-compat') or report.has('tgt-compat'):
        return report.build()
    for h1, h2, h in H.mul_table:
        if G.mul[(F.arr_map(h1), F.arr_map(h2))] != F.arr_map(h):
            report.add('composition', 'image of a composite is not the composite of images', h1, h2)
    return report.build()


def identity_functor(G):
    return InternalFunctor(G, G, finset.identity(G.objects), finset.identity(G.arrows))


def terminal_functor(G):
    """The unique functor G -> trivial(1)."""
    return InternalFunctor(
        G, trivial_groupoid(finset.terminal()),
        finset.unique_map(G.objects), finset.unique_map(G.arrows),
    )


def compose_functors(E, F):
    """E after F."""
    if F.cod != E.dom:
        raise ShapeMismatch(f'cannot compose {E!r} after {F!r}', E, F)
    return InternalFunctor(
        F.dom, E.cod,
        finset.compose(E.obj_map, F.obj_map),
        finset.compose(E.arr_map, F.arr_map),
    )


def projection_functors(H, G):
    """The two projections out of product_groupoid(H, G)."""
    HG = product_groupoid(H, G)
    n0, n1 = G.objects.size, G.arrows.size
    left = InternalFunctor(
        HG, H,
        FinMap(HG.objects, H.objects, tuple(x // n0 for x in HG.objects)),
        FinMap(HG.arrows, H.arrows, tuple(k // n1 for k in HG.arrows)),
    )
    right = InternalFunctor(
        HG, G,
        FinMap(HG.objects, G.objects, tuple(x % n0 for x in HG.objects)),
        FinMap(HG.arrows, G.arrows, tuple(k % n1 for k in HG.arrows)),
    )
    return left, right


def inclusion_functor(G, x):
    """trivial(1) -> G picking out the object x."""
    if x not in G.objects:
        raise ShapeMismatch(f'object {x} is out of range for {G!r}')
    one = trivial_groupoid(finset.terminal())
    return make_functor(one, G, (x,), (G.unit(x),))


def discrete_functor(f):
    """A map of sets f: Y -> X seen as a functor trivial(Y) -> trivial(X)."""
    return InternalFunctor(trivial_groupoid(f.dom), trivial_groupoid(f.cod), f, f)


def _check_over(F, A, side):
    groupoid = F.cod if side == 'cod' else F.dom
    if A.groupoid != groupoid:
        raise ShapeMismatch(f'{A!r} does not live over the {side} of {F!r}', F, A)


def restrict(F, A):
    """
    Pull A back along F: the carrier is {(x, a) | F0 x = anchor a}, anchored at
    x, and h acts by (x, a) |-> (d1 h, F1 h . a).
    """
    _check_over(F, A, 'cod')
    H = F.dom
    carrier = finset.pullback(F.obj_map, A.anchor)
    act = []
    for k, (x, a) in enumerate(carrier.pairs()):
        for h in H.arrows_from[x]:
            act.append((h, k, carrier.index(H.tgt(h), A.act[(F.arr_map(h), a)])))
    return make_action(H, carrier.apex.size, [x for x, a in carrier.pairs()], act)


def half_induce(F, Y):
    """
    The (H x G)-object on {(y, g0) | F0(anchor y) = d1 g0} with
    (h, g) * (y, g0) = (h y, F1 h . g0 . g^-1), anchored at (anchor y, d0 g0).
    """
    _check_over(F, Y, 'dom')
    H, G = F.dom, F.cod
    carrier = finset.pullback(finset.compose(F.obj_map, Y.anchor), G.tgt)
    h_act, g_act = [], []
    for k, (y, g0) in enumerate(carrier.pairs()):
        for h in H.arrows_from[Y.anchor(y)]:
            h_act.append((h, k, carrier.index(Y.act[(h, y)], G.mul[(F.arr_map(h), g0)])))
        for g in G.arrows_from[G.src(g0)]:
            g_act.append((g, k, carrier.index(y, G.mul[(g0, G.inv(g))])))
    return make_biaction(
        H, G, carrier.apex.size,
        p=[Y.anchor(y) for y, g0 in carrier.pairs()],
        q=[G.src(g0) for y, g0 in carrier.pairs()],
        h_act=h_act, g_act=g_act,
    )


@dataclass(frozen=True)
class Induced:
    """An induced action together with the data it was cut out of."""

    action: object
    half: BiAction
    pairs: finset.Pullback
    quotient: finset.Quotient

    def cls(self, y, g0):
        return self.quotient.proj(self.pairs.index(y, g0))


def induced(F, Y):
    half = half_induce(F, Y)
    pairs = finset.pullback(finset.compose(F.obj_map, Y.anchor), F.cod.tgt)
    action, quotient = right_action_on_left_orbits(half)
    logger.debug('induced %d orbits from %d pairs', quotient.classes.size, pairs.apex.size)
    return Induced(action, half, pairs, quotient)


def induce(F, Y):
    """Left adjoint to restrict(F, -): the H-orbits of half_induce(F, Y)."""
    return induced(F, Y).action


def transpose(F, Y, A, Psi):
    """Psi: induce(F, Y) -> A gives y |-> (anchor y, Psi[y, e F0 anchor y]) into restrict(F, A)."""
    ind = induced(F, Y)
    if Psi.dom != ind.action or Psi.cod != A:
        raise ShapeMismatch('map must run from the induced action to A', Psi, A)
    G = F.cod
    R = restrict(F, A)
    target = finset.pullback(F.obj_map, A.anchor)
    table = []
    for y in Y.carrier:
        x = Y.anchor(y)
        a = Psi(ind.cls(y, G.unit(F.obj_map(x))))
        table.append(target.index(x, a))
    return EquivariantMap(Y, R, FinMap(Y.carrier, R.carrier, tuple(table)))


def untranspose(F, Y, A, psi):
    """psi: Y -> restrict(F, A) gives [y, g0] |-> g0^-1 . a where psi(y) = (x, a)."""
    R = restrict(F, A)
    if psi.dom != Y or psi.cod != R:
        raise ShapeMismatch('map must run from Y to the restriction of A', psi, A)
    G = F.cod
    ind = induced(F, Y)
    target = finset.pullback(F.obj_map, A.anchor)
    on_pairs = FinMap(ind.pairs.apex, A.carrier, tuple(
        A.act[(G.inv(g0), target.pairs()[psi(y)][1])] for y, g0 in ind.pairs.pairs()
    ))
    return EquivariantMap(ind.action, A, ind.quotient.factor(on_pairs))


def unit(F, Y):
    """Y -> restrict(F, induce(F, Y))."""
    ind = induced(F, Y)
    return transpose(F, Y, ind.action, EquivariantMap(
        ind.action, ind.action, finset.identity(ind.action.carrier)
    ))


def counit(F, A):
    """induce(F, restrict(F, A)) -> A."""
    R = restrict(F, A)
    return untranspose(F, R, A, EquivariantMap(R, R, finset.identity(R.carrier)))


def induce_frobenius_check(F, Y, A):
    """
    Compare induce(F, Y x restrict(F, A)) with induce(F, Y) x A through
    [(y, (x, a)), g0] |-> ([y, g0], g0^-1 . a).
    """
    G = F.cod
    R = restrict(F, A)
    r_pairs = finset.pullback(F.obj_map, A.anchor)
    joint = product_action(Y, R)
    j_pairs = finset.pullback(Y.anchor, R.anchor)
    left = induced(F, joint)
    right_factor = induced(F, Y)
    right = product_action(right_factor.action, A)
    r_index = finset.pullback(right_factor.action.anchor, A.anchor)
    table = []
    for k, g0 in left.pairs.pairs():
        y, r = j_pairs.pairs()[k]
        a = r_pairs.pairs()[r][1]
        table.append(r_index.index(right_factor.cls(y, g0), A.act[(G.inv(g0), a)]))
    comparison = left.quotient.factor(FinMap(left.pairs.apex, right.carrier, tuple(table)))
    holds = finset.is_bijective(comparison)
    if not holds:
        logger.warning('induction Frobenius comparison is not bijective for %r', F)
    return FrobeniusWitness(holds, comparison)


def is_fully_faithful(F):
    H, G = F.dom, F.cod
    keys = {(H.src(h), H.tgt(h), F.arr_map(h)) for h in H.arrows}
    if len(keys) != H.arrows.size:
        return False
    hom_sizes = Counter(zip(G.src.table, G.tgt.table))
    expected = sum(
        hom_sizes[(F.obj_map(x), F.obj_map(y))] for x in H.objects for y in H.objects
    )
    return expected == H.arrows.size


def is_essentially_surjective(F):
    G = F.cod
    reach = finset.pullback(F.obj_map, G.tgt)
    return finset.is_surjective(finset.compose(G.src, reach.proj2))


def is_essential_equivalence(F):
    return is_fully_faithful(F) and is_essentially_surjective(F)


def failed_predicate(F):
    """Name of the first essential-equivalence predicate F fails, or None."""
    if not is_fully_faithful(F):
        return 'fully-faithful'
    if not is_essentially_surjective(F):
        return 'essentially-surjective'
    return None


def enumerate_functors(H, G, limit=None):
    """Every functor H -> G, ordered by object map then arrow map."""
    results = []
    units = set(H.unit.table)
    order = list(H.unit.table) + [h for h in H.arrows if h not in units]
    touching = {h: [] for h in H.arrows}
    for entry in H.mul_table:
        for h in set(entry):
            touching[h].append(entry)
    for obj_map in finset.all_maps(H.objects, G.objects):

        def candidates(h, obj_map=obj_map):
            if h in units:
                return [G.unit(obj_map(H.src(h)))]
            return G.hom_set(obj_map(H.src(h)), obj_map(H.tgt(h)))

        def accept(mapping, h, g):
            image = list(mapping)
            image[h] = g
            for h1, h2, h12 in touching[h]:
                a, b, c = image[h1], image[h2], image[h12]
                if a >= 0 and b >= 0 and c >= 0 and G.mul[(a, b)] != c:
                    return False
            return True

        for table in finset.search_maps(H.arrows.size, G.arrows.size, accept, candidates,
                                        order=order, limit=limit):
            results.append(InternalFunctor(H, G, obj_map, FinMap(H.arrows, G.arrows, table)))
    return results

