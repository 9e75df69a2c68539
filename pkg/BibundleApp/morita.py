"""
Morita equivalence of finite groupoids.

The decision compares isotropy groups component by component and then builds
an invertible bibundle independently, so every positive answer carries a
certificate that can be rechecked from scratch.  The second half of the module
goes the other way: a bibundle P: H -> G yields a groupoid internal to
G-actions whose semidirect product recovers the groupoid of P.
"""
import logging
from dataclasses import dataclass, field
from itertools import product as cartesian

from django.conf import settings

from . import finset
from .action import (
    EquivariantMap, GAction, free_action, product_action,
    validate_action, validate_equivariant_map,
)
from .bibundle import (
    Bibundle, BibundleMorphism, _tensor, compose, find_morphism, from_functor,
    identity_bibundle, opposite_bibundle, validate_bibundle,
)
from .exceptions import BibundleError, GroupTooLarge, NotAnEssentialEquivalence
from .finset import FinMap, FinSet
from .functor import (
    InternalFunctor, enumerate_functors, failed_predicate, is_essential_equivalence,
)
from .groupoid import (
    Groupoid, IsotropyClass, MoritaInvariant, disjoint_union_groupoid, group_groupoid,
    isotropy_group, make_groupoid, object_components, spanning_arrows, trivial_groupoid,
    validate_groupoid,
)
from .validation import ReportBuilder

logger = logging.getLogger(__name__)


def morita_invariant(G):
    """One isotropy class per connected component, keyed by its minimal object."""
    cap = getattr(settings, 'BIBUNDLE_MAX_GROUP_ORDER', 64)
    components = object_components(G)
    classes = []
    for rep in components.representatives():
        group = isotropy_group(G, rep)
        if group.order > cap:
            raise GroupTooLarge(
                f'isotropy group at object {rep} has order {group.order}, above the cap of {cap}'
            )
        classes.append(IsotropyClass(group.order, group.order_profile, group, rep))
    classes.sort(key=lambda c: (c.order, c.order_profile, c.representative))
    return MoritaInvariant(tuple(classes))


@dataclass(frozen=True)
class MoritaCertificate:
    """
    Either an invertible bibundle with witnesses that both composites are
    identities, or the two invariants that tell the groupoids apart.
    """

    left: Groupoid
    right: Groupoid
    bibundle: Bibundle = None
    inverse: Bibundle = None
    left_witness: BibundleMorphism = None
    right_witness: BibundleMorphism = None
    refutation: tuple = field(default=None, compare=False)

    @property
    def equivalent(self):
        return self.bibundle is not None


def _certify(P, Q):
    H, G = P.left, P.right
    left = find_morphism(compose(P, Q), identity_bibundle(H))
    right = find_morphism(compose(Q, P), identity_bibundle(G))
    if left is None or right is None:
        raise BibundleError(f'{P!r} is not invertible: a composite is not the identity')
    return MoritaCertificate(H, G, P, Q, left, right)


def invert_essential_equivalence(F):
    failed = failed_predicate(F)
    if failed is not None:
        raise NotAnEssentialEquivalence(failed)
    P = from_functor(F)
    return _certify(P, opposite_bibundle(P))


def skeleton_functor(H, G, matching):
    """
    The essential equivalence H -> G given by a matching of isotropy classes:
    every object goes to the matched representative and h: x -> x' to
    iso(t_x'^-1 h t_x), where t are spanning arrows from the component root.
    """
    inv_h, inv_g = morita_invariant(H), morita_invariant(G)
    obj_map = [0] * H.objects.size
    arr_map = [0] * H.arrows.size
    for i, j, iso in matching:
        source, target = inv_h.classes[i], inv_g.classes[j]
        root, image = source.representative, target.representative
        position = {g: k for k, g in enumerate(source.group.labels)}
        paths = spanning_arrows(H, root)
        for x in paths:
            obj_map[x] = image
        for x, t_x in paths.items():
            for h in H.arrows_from[x]:
                t_y = paths[H.tgt(h)]
                loop = H.mul[(H.inv(t_y), H.mul[(h, t_x)])]
                arr_map[h] = target.group.labels[iso[position[loop]]]
    return InternalFunctor(
        H, G,
        FinMap(H.objects, G.objects, tuple(obj_map)),
        FinMap(H.arrows, G.arrows, tuple(arr_map)),
    )


def morita_equivalent(H, G):
    if H == G:
        P = identity_bibundle(H)
        return _certify(P, opposite_bibundle(P))
    inv_h, inv_g = morita_invariant(H), morita_invariant(G)
    matching = inv_h.matching(inv_g)
    if matching is None:
        logger.info('invariants differ: %s vs %s', inv_h.signature(), inv_g.signature())
        return MoritaCertificate(H, G, refutation=(inv_h, inv_g))
    return invert_essential_equivalence(skeleton_functor(H, G, matching))


def verify_certificate(certificate):
    """Recheck a certificate from its raw data."""
    H, G = certificate.left, certificate.right
    if not certificate.equivalent:
        inv_h, inv_g = morita_invariant(H), morita_invariant(G)
        return inv_h != inv_g
    P, Q = certificate.bibundle, certificate.inverse
    if P.left != H or P.right != G or Q.left != G or Q.right != H:
        return False
    return (
        find_morphism(compose(P, Q), identity_bibundle(H)) is not None
        and find_morphism(compose(Q, P), identity_bibundle(G)) is not None
    )


def morita_oracle(H, G, max_carrier=None):
    """
    Brute force: the first functor H -> G that is an essential equivalence and
    whose bibundle inverts, or None.

    Only bibundles of the form from_functor(F) with carrier at most
    ``max_carrier`` are searched, not arbitrary invertible bibundles.  Over
    finite sets two Morita equivalent groupoids always admit an equivalence
    of categories H -> G, so a None answer is only wrong when every such
    functor has a carrier above the bound.
    """
    if max_carrier is None:
        max_carrier = getattr(settings, 'BIBUNDLE_ORACLE_MAX_CARRIER', 8)
    for F in enumerate_functors(H, G):
        if not is_essential_equivalence(F):
            continue
        P = from_functor(F)
        if P.carrier.size > max_carrier:
            continue
        try:
            return _certify(P, opposite_bibundle(P))
        except BibundleError:
            logger.warning('essential equivalence %r did not invert', F)
    return None


@dataclass(frozen=True)
class InternalGroupoidInActions:
    """A groupoid object K1 => K0 in the category of G-actions."""

    base: Groupoid
    obj_action: GAction
    arr_action: GAction
    src: EquivariantMap
    tgt: EquivariantMap
    unit: EquivariantMap
    inv: EquivariantMap
    mul_table: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, 'mul_table', tuple(sorted(tuple(int(v) for v in t) for t in self.mul_table))
        )

    def underlying(self):
        return make_groupoid(
            self.obj_action.carrier.size, self.arr_action.carrier.size,
            src=self.src.map.table, tgt=self.tgt.map.table,
            unit=self.unit.map.table, inv=self.inv.map.table,
            mul_table=self.mul_table,
        )


def make_internal_groupoid(obj_action, arr_action, src, tgt, unit, inv, mul_table):
    K0, K1 = obj_action, arr_action

    def arrow(dom, cod, table):
        return EquivariantMap(dom, cod, FinMap(dom.carrier, cod.carrier, tuple(table)))

    return InternalGroupoidInActions(
        K0.groupoid, K0, K1,
        arrow(K1, K0, src), arrow(K1, K0, tgt), arrow(K0, K1, unit), arrow(K1, K1, inv),
        tuple(mul_table),
    )


def validate_internal_groupoid(K):
    report = ReportBuilder()
    report.extend(validate_action(K.obj_action), prefix='objects-')
    report.extend(validate_action(K.arr_action), prefix='arrows-')
    if report.build().axioms:
        return report.build()
    for name in ('src', 'tgt', 'unit', 'inv'):
        report.extend(validate_equivariant_map(getattr(K, name)), prefix=f'{name}-')
    if report.build().axioms:
        return report.build()
    report.extend(validate_groupoid(K.underlying()), prefix='groupoid-')
    if report.build().axioms:
        return report.build()
    act = K.arr_action.act
    table = set(K.mul_table)
    for k1, k2, k in K.mul_table:
        for g in K.base.arrows_from[K.arr_action.anchor(k2)]:
            moved = (act[(g, k1)], act[(g, k2)], act[(g, k)])
            if moved not in table:
                report.add('mul-equivariance', 'composition does not commute with the action', g, k1, k2)
    return report.build()


def trivial_internal_groupoid(X):
    """X as the discrete groupoid in G-actions: one identity arrow per element."""
    ids = tuple(X.carrier)
    return make_internal_groupoid(X, X, ids, ids, ids, ids, [(x, x, x) for x in ids])


def semidirect_product(K):
    """
    Arrows (g, k) with d0 g = anchor k, from d0 k to d1(g . k);
    (g, k)(g', k') = (g g', (g'^-1 . k) k').
    """
    report = validate_internal_groupoid(K)
    report.raise_if_invalid()
    G, K1 = K.base, K.arr_action
    d0, d1 = K.src.map, K.tgt.map
    inner = {(k1, k2): k for k1, k2, k in K.mul_table}
    arrows = finset.pullback(G.src, K1.anchor)
    pairs = arrows.pairs()
    mul_table = []
    for (g, k), (g2, k2) in cartesian(pairs, repeat=2):
        if d0(k) != d1(K1.act[(g2, k2)]):
            continue
        twisted = K1.act[(G.inv(g2), k)]
        mul_table.append((
            arrows.index(g, k), arrows.index(g2, k2),
            arrows.index(G.mul[(g, g2)], inner[(twisted, k2)]),
        ))
    K0 = K.obj_action
    return make_groupoid(
        K0.carrier.size, arrows.apex.size,
        src=[d0(k) for g, k in pairs],
        tgt=[d1(K1.act[(g, k)]) for g, k in pairs],
        unit=[arrows.index(G.unit(K0.anchor(u)), K.unit.map(u)) for u in K0.carrier],
        inv=[arrows.index(G.inv(g), K1.act[(g, K.inv.map(k))]) for g, k in pairs],
        mul_table=mul_table,
    )


def reconstruct_internal_groupoid(P):
    """
    Push the pair groupoid on the free H-action T_H1 through P: objects are
    tensor_apply(P, T), arrows tensor_apply(P, T x T).
    """
    validate_bibundle(P).raise_if_invalid()
    H = P.left
    T = free_action(H, finset.identity(H.objects))
    TT = product_action(T, T)
    t_pairs = finset.pullback(T.anchor, T.anchor)
    objects = _tensor(P, T)
    arrows = _tensor(P, TT)
    reps = arrows.quotient.representatives()
    src, tgt, inv = [], [], []
    for r in reps:
        x, t = arrows.pairs.pairs()[r]
        a, b = t_pairs.pairs()[t]
        src.append(objects.cls(x, b))
        tgt.append(objects.cls(x, a))
        inv.append(arrows.cls(x, t_pairs.index(b, a)))
    unit = []
    for r in objects.quotient.representatives():
        x, a = objects.pairs.pairs()[r]
        unit.append(arrows.cls(x, t_pairs.index(a, a)))
    mul_table = set()
    for x in P.carrier:
        over = T.anchor.fiber(P.p_anchor(x))
        for a, b, c in cartesian(over, repeat=3):
            mul_table.add((
                arrows.cls(x, t_pairs.index(a, b)),
                arrows.cls(x, t_pairs.index(b, c)),
                arrows.cls(x, t_pairs.index(a, c)),
            ))
    logger.debug('reconstructed %d objects and %d arrows', len(unit), len(src))
    return make_internal_groupoid(
        objects.action, arrows.action, src, tgt, unit, inv, sorted(mul_table)
    )


def tensor_unit_map(P):
    """P -> tensor_apply(P, T_H1), x |-> [x, e(p x)]; a G-equivariant bijection."""
    H = P.left
    objects = _tensor(P, free_action(H, finset.identity(H.objects)))
    return EquivariantMap(
        P.right_action, objects.action,
        FinMap(P.carrier, objects.action.carrier, tuple(
            objects.cls(x, H.unit(P.p_anchor(x))) for x in P.carrier
        )),
    )


def arrow_legs_map(P):
    """
    H1 x_{H0} P -> K1, (h, x) |-> [h x, (e, h)]; under it the source and target
    of K1 become the projection and the H-action on P.
    """
    H = P.left
    T = free_action(H, finset.identity(H.objects))
    t_pairs = finset.pullback(T.anchor, T.anchor)
    arrows = _tensor(P, product_action(T, T))
    legal = P.left_action.legal_pairs
    return FinMap(legal.apex, arrows.action.carrier, tuple(
        arrows.cls(P.h_act[(h, x)], t_pairs.index(H.unit(H.tgt(h)), h))
        for h, x in legal.pairs()
    ))


def skeleton_groupoid(G):
    """One isotropy group per component, in invariant order."""
    result = trivial_groupoid(FinSet(0))
    for c in morita_invariant(G).classes:
        result = disjoint_union_groupoid(result, group_groupoid(c.group))
    return result


def skeleton_projection(G):
    """The essential equivalence G -> skeleton_groupoid(G)."""
    S = skeleton_groupoid(G)
    return skeleton_functor(G, S, morita_invariant(G).matching(morita_invariant(S)))
