"""
Bibundles (Hilsum-Skandalis maps) between finite groupoids.

A bibundle H -> G is a carrier P with commuting actions of H (anchored by p)
and G (anchored by q) such that the G-action is principal over p and p is
surjective.  Both actions are stored d0-anchored, so the "right" G-action of
the usual presentation appears here as ``g . x`` with g starting at q(x).
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian

from . import finset
from .action import (
    BiAction, EquivariantMap, GAction, action_groupoid, iter_equivariant_maps,
    make_biaction, validate_biaction,
)
from .exceptions import BibundleError, ShapeMismatch
from .finset import FinMap
from .functor import InternalFunctor, make_functor
from .groupoid import make_groupoid, product_groupoid, trivial_groupoid
from .validation import ReportBuilder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bibundle(BiAction):

    @cached_property
    def division(self):
        """(x1, x2) |-> the unique g with g . x2 == x1; raises when the G-action is not principal."""
        found = {}
        for (g, x), y in self.g_act.items():
            if (y, x) in found:
                raise BibundleError(
                    f'arrows {found[(y, x)]} and {g} both carry {x} to {y}'
                )
            found[(y, x)] = g
        return found


def make_bibundle(H, G, n, p, q, h_act, g_act):
    return make_biaction(H, G, n, p, q, h_act, g_act, cls=Bibundle)


@dataclass(frozen=True)
class BibundleMorphism:
    dom: Bibundle
    cod: Bibundle
    map: FinMap

    def __call__(self, x):
        return self.map(x)


def _principality(P, report):
    fibered = finset.pullback(P.p_anchor, P.p_anchor)
    hits = {}
    for (g, x), y in sorted(P.g_act.items()):
        hits.setdefault((y, x), []).append(g)
    for pair in fibered.pairs():
        arrows = hits.get(pair, [])
        if len(arrows) != 1:
            report.add(
                'principality',
                f'{len(arrows)} arrows relate the pair in one p-fiber', *pair,
            )


def validate_bibundle(P):
    """Every violated condition, with the failing pair for principality."""
    report = ReportBuilder()
    base = validate_biaction(P)
    report.extend(base)
    if not base.is_valid:
        return report.build()
    _principality(P, report)
    if not finset.is_surjective(P.p_anchor):
        missing = [u for u in P.left.objects if not P.p_anchor.fiber(u)]
        report.add('descent', 'left anchor is not surjective', *missing)
    return report.build()


def division_map(P):
    """psi: P x_{H0} P -> G1 as a map of finite sets."""
    fibered = finset.pullback(P.p_anchor, P.p_anchor)
    division = P.division
    try:
        table = tuple(division[pair] for pair in fibered.pairs())
    except KeyError as exc:
        raise BibundleError(f'no arrow relates the pair {exc.args[0]}') from None
    return FinMap(fibered.apex, P.right.arrows, table)


def validate_bibundle_morphism(theta):
    P, Q = theta.dom, theta.cod
    report = ReportBuilder()
    if P.left != Q.left or P.right != Q.right:
        report.add('shape', 'bibundles run between different groupoids')
        return report.build()
    if theta.map.dom != P.carrier or theta.map.cod != Q.carrier:
        report.add('shape', 'map does not run between the carriers')
        return report.build()
    for x in P.carrier:
        y = theta(x)
        if Q.p_anchor(y) != P.p_anchor(x) or Q.q_anchor(y) != P.q_anchor(x):
            report.add('anchor', 'map does not preserve both anchors', x)
    if report.has('anchor'):
        return report.build()
    for (h, x), y in P.h_act.items():
        if theta(y) != Q.h_act[(h, theta(x))]:
            report.add('left-equivariance', 'map does not commute with the left action', h, x)
    for (g, x), y in P.g_act.items():
        if theta(y) != Q.g_act[(g, theta(x))]:
            report.add('right-equivariance', 'map does not commute with the right action', g, x)
    return report.build()


def identity_bibundle(G):
    """P = G1 with p = d1, q = d0; h . g = h g and g' . g = g g'^-1."""
    return make_bibundle(
        G, G, G.arrows.size,
        p=G.tgt.table, q=G.src.table,
        h_act=[(g1, g2, g) for g1, g2, g in G.mul_table],
        g_act=[
            (g1, g, G.mul[(g, G.inv(g1))])
            for g in G.arrows for g1 in G.arrows_from[G.src(g)]
        ],
    )


def from_functor(F):
    """
    P = {(x, g) | d1 g = F0 x}, p = pi1, q = d0 g; h acts by (d1 h, F1 h . g)
    and g' by (x, g g'^-1).
    """
    H, G = F.dom, F.cod
    carrier = finset.pullback(F.obj_map, G.tgt)
    pairs = carrier.pairs()
    h_act, g_act = [], []
    for k, (x, g) in enumerate(pairs):
        for h in H.arrows_from[x]:
            h_act.append((h, k, carrier.index(H.tgt(h), G.mul[(F.arr_map(h), g)])))
        for g1 in G.arrows_from[G.src(g)]:
            g_act.append((g1, k, carrier.index(x, G.mul[(g, G.inv(g1))])))
    return make_bibundle(
        H, G, carrier.apex.size,
        p=[x for x, g in pairs], q=[G.src(g) for x, g in pairs],
        h_act=h_act, g_act=g_act,
    )


def _swap(P):
    return Bibundle(P.right, P.left, P.carrier, P.q_anchor, P.p_anchor, P.g_table, P.h_table)


def opposite_bibundle(P):
    """
    Swap the roles of the two groupoids.  Both stored actions are already
    d0-anchored, so no inverse transport is needed.
    """
    validate_bibundle(P).raise_if_invalid()
    return _swap(P)


def _middle_orbits(x_side, y_side):
    """Orbits of a groupoid acting diagonally on X x Y, one factor per side."""
    fibered = finset.pullback(x_side.anchor, y_side.anchor)
    M = x_side.groupoid
    pairs = fibered.pairs()
    links = (
        (fibered.index(x_side.act[(m, a)], y_side.act[(m, b)]), k)
        for k, (a, b) in enumerate(pairs)
        for m in M.arrows_from[x_side.anchor(a)]
    )
    return fibered, finset.quotient_by_pairs(fibered.apex, links)


def compose(P, Q):
    """Q after P for P: H -> G and Q: G -> K, as the G-orbits of P x_{G0} Q."""
    if P.right != Q.left:
        raise ShapeMismatch(f'cannot compose {P!r} with {Q!r}: middle groupoids differ', P, Q)
    H, K = P.left, Q.right
    fibered, quotient = _middle_orbits(P.right_action, Q.left_action)
    pairs = fibered.pairs()
    reps = quotient.representatives()
    h_act, k_act = [], []
    for c, r in enumerate(reps):
        x1, x2 = pairs[r]
        for h in H.arrows_from[P.p_anchor(x1)]:
            h_act.append((h, c, quotient.proj(fibered.index(P.h_act[(h, x1)], x2))))
        for k in K.arrows_from[Q.q_anchor(x2)]:
            k_act.append((k, c, quotient.proj(fibered.index(x1, Q.g_act[(k, x2)]))))
    logger.debug('composite carrier: %d orbits of %d pairs', quotient.classes.size, len(pairs))
    return make_bibundle(
        H, K, quotient.classes.size,
        p=[P.p_anchor(pairs[r][0]) for r in reps],
        q=[Q.q_anchor(pairs[r][1]) for r in reps],
        h_act=h_act, g_act=k_act,
    )


@dataclass(frozen=True)
class Tensor:
    action: GAction
    pairs: finset.Pullback
    quotient: finset.Quotient

    def cls(self, x, y):
        return self.quotient.proj(self.pairs.index(x, y))


def _tensor(P, Y):
    if Y.groupoid != P.left:
        raise ShapeMismatch(f'{Y!r} does not live over the left groupoid of {P!r}', P, Y)
    G = P.right
    fibered, quotient = _middle_orbits(P.left_action, Y)
    pairs = fibered.pairs()
    reps = quotient.representatives()
    act = [
        (g, c, quotient.proj(fibered.index(P.g_act[(g, pairs[r][0])], pairs[r][1])))
        for c, r in enumerate(reps)
        for g in G.arrows_from[P.q_anchor(pairs[r][0])]
    ]
    action = GAction(
        G, quotient.classes,
        FinMap(quotient.classes, G.objects, tuple(P.q_anchor(pairs[r][0]) for r in reps)),
        tuple(act),
    )
    return Tensor(action, fibered, quotient)


def tensor_apply(P, Y):
    """The H-orbits of P x_{H0} Y, acted on by G through P."""
    return _tensor(P, Y).action


def coapply(P, X):
    """Right adjoint of tensor_apply(P, -): the G-orbits of P x_{G0} X as an H-action."""
    return _tensor(_swap(P), X).action


def tensor_transpose(P, Y, X, phi):
    """phi: tensor_apply(P, Y) -> X gives y |-> [x, phi[x, y]] for any x over anchor(y)."""
    left = _tensor(P, Y)
    right = _tensor(_swap(P), X)
    if phi.dom != left.action or phi.cod != X:
        raise ShapeMismatch('map must run from the tensor to X', phi, X)
    table = []
    for y in Y.carrier:
        fiber = P.p_anchor.fiber(Y.anchor(y))
        if not fiber:
            raise BibundleError(f'no element of P lies over the anchor of {y}')
        x = fiber[0]
        table.append(right.cls(x, phi(left.cls(x, y))))
    return EquivariantMap(Y, right.action, FinMap(Y.carrier, right.action.carrier, tuple(table)))


def tensor_untranspose(P, Y, X, psi):
    """psi: Y -> coapply(P, X) gives [x, y] |-> g . xi where psi(y) = [x', xi] and g . x' = x."""
    left = _tensor(P, Y)
    right = _tensor(_swap(P), X)
    if psi.dom != Y or psi.cod != right.action:
        raise ShapeMismatch('map must run from Y to the coapplied action', psi, X)
    reps = right.quotient.representatives()
    division = P.division
    table = []
    for x, y in left.pairs.pairs():
        x_prime, xi = right.pairs.pairs()[reps[psi(y)]]
        table.append(X.act[(division[(x, x_prime)], xi)])
    on_pairs = FinMap(left.pairs.apex, X.carrier, tuple(table))
    return EquivariantMap(left.action, X, left.quotient.factor(on_pairs))


def point_functor(G, x):
    """The functor trivial(I) -> G sending i to x(i)."""
    I = x.dom
    return make_functor(trivial_groupoid(I), G, x.table, tuple(G.unit(x(i)) for i in I))


def point_bundle(G, x):
    """The principal G-bundle {(i, g) | d1 g = x(i)} over I."""
    if x.cod != G.objects:
        raise ShapeMismatch(f'{x!r} does not pick objects of {G!r}', x, G)
    return from_functor(point_functor(G, x))


def point_morphism(G, y, x1, x2):
    """
    An arrow family y: I -> G1 from x2 to x1 (d0 y = x2, d1 y = x1) gives the
    morphism point_bundle(x2) -> point_bundle(x1), (i, g) |-> (i, y(i) g).
    """
    I = y.dom
    for i in I:
        if G.tgt(y(i)) != x1(i) or G.src(y(i)) != x2(i):
            raise ShapeMismatch(f'arrow family has the wrong endpoints at {i}', y, (x1, x2))
    source, target = point_bundle(G, x2), point_bundle(G, x1)
    src_pairs = finset.pullback(x2, G.tgt)
    tgt_pairs = finset.pullback(x1, G.tgt)
    table = tuple(tgt_pairs.index(i, G.mul[(y(i), g)]) for i, g in src_pairs.pairs())
    return BibundleMorphism(source, target, FinMap(source.carrier, target.carrier, table))


def compose_morphisms(theta, eta):
    """theta after eta."""
    if eta.cod != theta.dom:
        raise ShapeMismatch('bibundle morphisms are not composable', theta, eta)
    return BibundleMorphism(eta.dom, theta.cod, finset.compose(theta.map, eta.map))


@dataclass(frozen=True)
class Points:
    """The groupoid C(I, G): object k is ``objects[k]``, arrow k is ``arrows[k]``."""

    groupoid: object
    objects: tuple
    arrows: tuple

    def object_index(self, x):
        return self.objects.index(x)

    def arrow_index(self, y):
        return self.arrows.index(y)


def points_groupoid(G, I):
    objects = tuple(finset.all_maps(I, G.objects))
    arrows = tuple(finset.all_maps(I, G.arrows))
    obj_index = {x.table: k for k, x in enumerate(objects)}
    arr_index = {y.table: k for k, y in enumerate(arrows)}

    def pointwise(fn, y):
        return tuple(fn(y(i)) for i in I)

    mul_table = []
    for a, b in cartesian(arrows, repeat=2):
        if pointwise(G.src, a) == pointwise(G.tgt, b):
            product = tuple(G.mul[(a(i), b(i))] for i in I)
            mul_table.append((arr_index[a.table], arr_index[b.table], arr_index[product]))
    groupoid = make_groupoid(
        len(objects), len(arrows),
        src=[obj_index[pointwise(G.src, y)] for y in arrows],
        tgt=[obj_index[pointwise(G.tgt, y)] for y in arrows],
        unit=[arr_index[pointwise(G.unit, x)] for x in objects],
        inv=[arr_index[pointwise(G.inv, y)] for y in arrows],
        mul_table=mul_table,
    )
    return Points(groupoid, objects, arrows)


def find_morphism(P, Q):
    """A morphism P -> Q, or None; any morphism found is a bijection."""
    if P.left != Q.left or P.right != Q.right:
        raise ShapeMismatch(f'{P!r} and {Q!r} run between different groupoids', P, Q)
    if P.carrier.size != Q.carrier.size:
        return None
    for h in iter_equivariant_maps(P.joint_action(), Q.joint_action()):
        if not finset.is_bijective(h.map):
            logger.error('non-bijective morphism %r between %r and %r', h.map, P, Q)
            raise BibundleError('found a bibundle morphism that is not a bijection')
        return BibundleMorphism(P, Q, h.map)
    return None


def pair(P1, P2):
    """<P1, P2>: K -> H x G on P1 x_{K0} P2, with (h, g) acting factorwise."""
    if P1.left != P2.left:
        raise ShapeMismatch(f'{P1!r} and {P2!r} do not share a left groupoid', P1, P2)
    K, H, G = P1.left, P1.right, P2.right
    HG = product_groupoid(H, G)
    n0, n1 = G.objects.size, G.arrows.size
    fibered = finset.pullback(P1.p_anchor, P2.p_anchor)
    pairs = fibered.pairs()
    k_act, hg_act = [], []
    for idx, (x1, x2) in enumerate(pairs):
        for k in K.arrows_from[P1.p_anchor(x1)]:
            k_act.append((k, idx, fibered.index(P1.h_act[(k, x1)], P2.h_act[(k, x2)])))
        for h in H.arrows_from[P1.q_anchor(x1)]:
            for g in G.arrows_from[P2.q_anchor(x2)]:
                hg_act.append((
                    h * n1 + g, idx,
                    fibered.index(P1.g_act[(h, x1)], P2.g_act[(g, x2)]),
                ))
    return make_bibundle(
        K, HG, len(pairs),
        p=[P1.p_anchor(x1) for x1, x2 in pairs],
        q=[P1.q_anchor(x1) * n0 + P2.q_anchor(x2) for x1, x2 in pairs],
        h_act=k_act, g_act=hg_act,
    )


def bibundle_groupoid(P):
    """The action groupoid of P as an (H x G)-object."""
    return action_groupoid(P.joint_action())


@dataclass(frozen=True)
class Span:
    groupoid: object
    left: InternalFunctor
    right: InternalFunctor


def span(P):
    """The action groupoid of P with its projections to H and G."""
    joint = P.joint_action()
    PG = action_groupoid(joint)
    n1 = P.right.arrows.size
    pairs = joint.legal_pairs.pairs()
    left = InternalFunctor(
        PG, P.left, P.p_anchor,
        FinMap(PG.arrows, P.left.arrows, tuple(hg // n1 for hg, x in pairs)),
    )
    right = InternalFunctor(
        PG, P.right, P.q_anchor,
        FinMap(PG.arrows, P.right.arrows, tuple(hg % n1 for hg, x in pairs)),
    )
    return Span(PG, left, right)


def relabel_bibundle(P, perm):
    """Transport P along a permutation of its carrier."""
    back = finset.inverse(perm)
    return make_bibundle(
        P.left, P.right, P.carrier.size,
        p=[P.p_anchor(back(y)) for y in P.carrier],
        q=[P.q_anchor(back(y)) for y in P.carrier],
        h_act=[(h, perm(x), perm(y)) for h, x, y in P.h_table],
        g_act=[(g, perm(x), perm(y)) for g, x, y in P.g_table],
    )


@dataclass(frozen=True)
class PointsCheck:
    faithful: bool
    full: bool
    pairs_checked: int


def check_points_functor(G, I):
    """
    Compare every hom-set of points_groupoid(G, I) with the morphisms between
    the corresponding point bundles.
    """
    points = points_groupoid(G, I)
    C = points.groupoid
    faithful = full = True
    checked = 0
    for a, b in cartesian(C.objects, repeat=2):
        x2, x1 = points.objects[a], points.objects[b]
        source, target = point_bundle(G, x2), point_bundle(G, x1)
        images = [point_morphism(G, points.arrows[y], x1, x2).map for y in C.hom_set(a, b)]
        if len(set(images)) != len(images):
            faithful = False
        morphisms = {
            h.map for h in iter_equivariant_maps(source.joint_action(), target.joint_action())
        }
        if morphisms != set(images):
            full = False
        checked += 1
    return PointsCheck(faithful, full, checked)
