"""
G-objects over a finite groupoid.

An action is anchored at d0 and lands over d1: ``act(g, x)`` is defined when
``src(g) == anchor(x)`` and then ``anchor(act(g, x)) == tgt(g)``.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian

from . import finset
from .exceptions import ShapeMismatch
from .finset import FinMap, FinSet
from .groupoid import make_groupoid, product_groupoid
from .validation import ReportBuilder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GAction:
    groupoid: object
    carrier: FinSet
    anchor: FinMap
    act_table: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, 'act_table', tuple(sorted(tuple(int(v) for v in t) for t in self.act_table))
        )

    def __repr__(self):
        return f'GAction(carrier={self.carrier.size}, over {self.groupoid!r})'

    @cached_property
    def act(self):
        return {(g, x): y for g, x, y in self.act_table}

    @cached_property
    def legal_pairs(self):
        return finset.pullback(self.groupoid.src, self.anchor)

    def apply(self, g, x):
        try:
            return self.act[(g, x)]
        except KeyError:
            raise ShapeMismatch(
                f'arrow {g} cannot act on {x}: src {self.groupoid.src(g)} '
                f'is not anchor {self.anchor(x)}'
            ) from None

    __call__ = apply


def make_action(G, n, anchor, act):
    X = FinSet(n)
    return GAction(G, X, FinMap(X, G.objects, anchor), tuple(act))


@dataclass(frozen=True)
class EquivariantMap:
    dom: GAction
    cod: GAction
    map: FinMap

    def __call__(self, x):
        return self.map(x)


def validate_action(A):
    G = A.groupoid
    report = ReportBuilder()
    if A.anchor.dom != A.carrier or A.anchor.cod != G.objects:
        report.add('shape', 'anchor must map the carrier to the objects')
        return report.build()
    legal = set(A.legal_pairs.pairs())
    seen = set()
    for g, x, y in A.act_table:
        if g not in G.arrows or x not in A.carrier or y not in A.carrier:
            report.add('action-range', 'entry out of range', g, x, y)
            continue
        if (g, x) not in legal:
            report.add('action-domain', 'action defined on an illegal pair', g, x)
        seen.add((g, x))
    for pair in sorted(legal - seen):
        report.add('action-domain', 'legal pair has no action value', *pair)
    if report.has('action-range') or report.has('action-domain'):
        return report.build()

    act = A.act
    for (g, x), y in act.items():
        if A.anchor(y) != G.tgt(g):
            report.add('anchor', 'action does not land over the target', g, x)
    for x in A.carrier:
        if act[(G.unit(A.anchor(x)), x)] != x:
            report.add('unit', 'identity arrow moves the element', x)
    if report.has('anchor'):
        return report.build()
    for g1, g2, g12 in G.mul_table:
        for x in A.carrier:
            if A.anchor(x) != G.src(g2):
                continue
            if act[(g1, act[(g2, x)])] != act[(g12, x)]:
                report.add('associativity', 'acting in stages disagrees with the product', g1, g2, x)
    return report.build()


def validate_equivariant_map(h):
    report = ReportBuilder()
    A, B, f = h.dom, h.cod, h.map
    if f.dom != A.carrier or f.cod != B.carrier:
        report.add('shape', 'map does not run between the carriers')
        return report.build()
    for x in A.carrier:
        if B.anchor(f(x)) != A.anchor(x):
            report.add('anchor', 'map does not preserve the anchor', x)
    if report.has('anchor'):
        return report.build()
    for (g, x), y in A.act.items():
        if f(y) != B.act[(g, f(x))]:
            report.add('equivariance', 'map does not commute with the action', g, x)
    return report.build()


def _same_groupoid(A, B):
    if A.groupoid != B.groupoid:
        raise ShapeMismatch(f'{A!r} and {B!r} live over different groupoids', A, B)


def trivial_action(G, X):
    n0 = G.objects.size
    return make_action(
        G, X.size * n0,
        anchor=[u for x in X for u in G.objects],
        act=[
            (g, x * n0 + G.src(g), x * n0 + G.tgt(g))
            for x in X for g in G.arrows
        ],
    )


def terminal_action(G):
    return trivial_action(G, finset.terminal())


def trivial_map(G, f):
    """G*(f): trivial_action(G, Y) -> trivial_action(G, X) for f: Y -> X."""
    n0 = G.objects.size
    return EquivariantMap(
        trivial_action(G, f.dom),
        trivial_action(G, f.cod),
        FinMap(
            FinSet(f.dom.size * n0), FinSet(f.cod.size * n0),
            tuple(f(y) * n0 + u for y in f.dom for u in G.objects),
        ),
    )


def free_action(G, f):
    if f.cod != G.objects:
        raise ShapeMismatch(f'anchor {f!r} does not land in the objects of {G!r}', f)
    carrier = finset.pullback(G.src, f)
    return make_action(
        G, carrier.apex.size,
        anchor=[G.tgt(g) for g, x in carrier.pairs()],
        act=[
            (g1, k, carrier.index(G.mul[(g1, g2)], x))
            for k, (g2, x) in enumerate(carrier.pairs())
            for g1 in G.arrows_from[G.tgt(g2)]
        ],
    )


def free_unit(G, f):
    """X -> U T X_f, x |-> (e(f x), x)."""
    carrier = finset.pullback(G.src, f)
    return FinMap(f.dom, carrier.apex, tuple(carrier.index(G.unit(f(x)), x) for x in f.dom))


def free_multiplication(G, f):
    """T T X_f -> T X_f, (g1, (g2, x)) |-> (m(g1, g2), x)."""
    inner = free_action(G, f)
    outer = free_action(G, inner.anchor)
    inner_pairs = finset.pullback(G.src, f)
    outer_pairs = finset.pullback(G.src, inner.anchor)
    table = []
    for g1, k in outer_pairs.pairs():
        g2, x = inner_pairs.pairs()[k]
        table.append(inner_pairs.index(G.mul[(g1, g2)], x))
    return EquivariantMap(outer, inner, FinMap(outer.carrier, inner.carrier, tuple(table)))


def free_map(G, h, f, f2):
    """T(h): T X_f -> T X'_f2 for a map h: X -> X' over the objects."""
    source = finset.pullback(G.src, f)
    target = finset.pullback(G.src, f2)
    return EquivariantMap(
        free_action(G, f), free_action(G, f2),
        FinMap(source.apex, target.apex, tuple(
            target.index(g, h(x)) for g, x in source.pairs()
        )),
    )


def transpose_free(G, f, A, phi):
    """Equivariant phi: T X_f -> A gives psi: X -> U A over the objects, psi(x) = phi(e f x, x)."""
    return finset.compose(phi.map, free_unit(G, f))


def untranspose_free(G, f, A, psi):
    """A map psi: X -> U A over the objects extends to T X_f -> A by (g, x) |-> g . psi(x)."""
    carrier = finset.pullback(G.src, f)
    free = free_action(G, f)
    return EquivariantMap(free, A, FinMap(free.carrier, A.carrier, tuple(
        A.act[(g, psi(x))] for g, x in carrier.pairs()
    )))


def maps_over(f, A):
    """Every map X -> carrier(A) commuting with the anchors, lexicographic."""
    fibers = [A.anchor.fiber(f(x)) for x in f.dom]
    for choice in cartesian(*fibers):
        yield FinMap(f.dom, A.carrier, choice)


def orbits(A):
    pairs = A.legal_pairs.pairs()
    return finset.quotient_by_pairs(A.carrier, ((A.act[(g, x)], x) for g, x in pairs))


def action_groupoid(A):
    G = A.groupoid
    legal = A.legal_pairs
    pairs = legal.pairs()
    act = A.act
    mul_table = []
    for k2, (g2, x2) in enumerate(pairs):
        x1 = act[(g2, x2)]
        for g1 in G.arrows_from[A.anchor(x1)]:
            mul_table.append((legal.index(g1, x1), k2, legal.index(G.mul[(g1, g2)], x2)))
    return make_groupoid(
        A.carrier.size, legal.apex.size,
        src=[x for g, x in pairs],
        tgt=[act[(g, x)] for g, x in pairs],
        unit=[legal.index(G.unit(A.anchor(x)), x) for x in A.carrier],
        inv=[legal.index(G.inv(g), act[(g, x)]) for g, x in pairs],
        mul_table=mul_table,
    )


def product_action(A, B):
    _same_groupoid(A, B)
    carrier = finset.pullback(A.anchor, B.anchor)
    G = A.groupoid
    return make_action(
        G, carrier.apex.size,
        anchor=[A.anchor(a) for a, b in carrier.pairs()],
        act=[
            (g, k, carrier.index(A.act[(g, a)], B.act[(g, b)]))
            for k, (a, b) in enumerate(carrier.pairs())
            for g in G.arrows_from[A.anchor(a)]
        ],
    )


def pullback_action(h, k):
    _same_groupoid(h.dom, k.dom)
    if h.cod != k.cod:
        raise ShapeMismatch('equivariant maps must share a codomain', h, k)
    A, B = h.dom, k.dom
    carrier = finset.pullback(h.map, k.map)
    G = A.groupoid
    return make_action(
        G, carrier.apex.size,
        anchor=[A.anchor(a) for a, b in carrier.pairs()],
        act=[
            (g, idx, carrier.index(A.act[(g, a)], B.act[(g, b)]))
            for idx, (a, b) in enumerate(carrier.pairs())
            for g in G.arrows_from[A.anchor(a)]
        ],
    )


def relabel_action(A, perm):
    """Transport A along a permutation of its carrier."""
    back = finset.inverse(perm)
    return make_action(
        A.groupoid, A.carrier.size,
        anchor=[A.anchor(back(y)) for y in A.carrier],
        act=[(g, perm(x), perm(y)) for g, x, y in A.act_table],
    )


@dataclass(frozen=True)
class _OrbitData:
    representative: int
    paths: dict
    stabilizer: tuple


def _orbit_data(A):
    """Per orbit: a representative, an arrow reaching each member, and the stabilizer."""
    G = A.groupoid
    quotient = orbits(A)
    data = []
    for r in quotient.representatives():
        base = A.anchor(r)
        paths = {r: G.unit(base)}
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for g in G.arrows_from[A.anchor(x)]:
                y = A.act[(g, x)]
                if y not in paths:
                    paths[y] = G.mul[(g, paths[x])]
                    queue.append(y)
        stabilizer = tuple(
            g for g in G.arrows_from[base] if G.tgt(g) == base and A.act[(g, r)] == r
        )
        data.append(_OrbitData(r, paths, stabilizer))
    return data


def iter_equivariant_maps(A, B):
    """
    Equivariant maps A -> B, one choice of image per orbit representative.

    A representative r may go to any b over the same object that is fixed by
    the stabilizer of r; the rest of the orbit follows by transport.
    """
    _same_groupoid(A, B)
    data = _orbit_data(A)
    choices = []
    for orbit in data:
        base = A.anchor(orbit.representative)
        choices.append([
            b for b in B.anchor.fiber(base)
            if all(B.act[(g, b)] == b for g in orbit.stabilizer)
        ])
    for picks in cartesian(*choices):
        table = [0] * A.carrier.size
        for orbit, b in zip(data, picks):
            for x, g in orbit.paths.items():
                table[x] = B.act[(g, b)]
        yield EquivariantMap(A, B, FinMap(A.carrier, B.carrier, tuple(table)))


def enumerate_equivariant_maps(A, B):
    return list(iter_equivariant_maps(A, B))


def find_equivariant_isomorphism(A, B):
    if A.carrier.size != B.carrier.size:
        return None
    if sorted(orbits(A).class_sizes()) != sorted(orbits(B).class_sizes()):
        return None
    for h in iter_equivariant_maps(A, B):
        if finset.is_bijective(h.map):
            return h
    return None


@dataclass(frozen=True)
class FrobeniusWitness:
    holds: bool
    comparison: FinMap


def frobenius_check(W, X):
    """Compare orbits(W x G*X) with orbits(W) x X through the canonical map."""
    G = W.groupoid
    trivial = trivial_action(G, X)
    joint = product_action(W, trivial)
    pairs = finset.pullback(W.anchor, trivial.anchor)
    left = orbits(joint)
    right_orbits = orbits(W)
    n0 = G.objects.size
    target = FinSet(right_orbits.classes.size * X.size)
    on_carrier = FinMap(joint.carrier, target, tuple(
        right_orbits.proj(w) * X.size + t // n0 for w, t in pairs.pairs()
    ))
    comparison = left.factor(on_carrier)
    holds = finset.is_bijective(comparison)
    if not holds:
        logger.warning('Frobenius comparison is not bijective for %r', W)
    return FrobeniusWitness(holds, comparison)


def stable_frobenius_check(W, g, f):
    """
    For g: W -> G*X equivariant and f: Y -> X, compare orbits(W x_{G*X} G*Y)
    with orbits(W) x_X Y.
    """
    G = W.groupoid
    if g.dom != W:
        raise ShapeMismatch('equivariant map must start at W', g, W)
    expected = trivial_action(G, f.cod)
    if g.cod != expected:
        raise ShapeMismatch('equivariant map must land in the trivial action on the base of f', g, f)
    n0 = G.objects.size
    lifted = trivial_map(G, f)
    joint = pullback_action(g, lifted)
    pairs = finset.pullback(g.map, lifted.map)
    left = orbits(joint)
    w_orbits = orbits(W)
    # g followed by the counit, constant on orbits
    to_base = w_orbits.factor(FinMap(W.carrier, f.cod, tuple(g(w) // n0 for w in W.carrier)))
    right = finset.pullback(to_base, f)
    on_carrier = FinMap(joint.carrier, right.apex, tuple(
        right.index(w_orbits.proj(w), t // n0) for w, t in pairs.pairs()
    ))
    comparison = left.factor(on_carrier)
    holds = finset.is_bijective(comparison)
    if not holds:
        logger.warning('stable Frobenius comparison is not bijective for %r', W)
    return FrobeniusWitness(holds, comparison)


def enumerate_actions(G, max_carrier):
    """Every G-action on carriers of size 0..max_carrier, in canonical order."""
    results = []
    for n in range(max_carrier + 1):
        X = FinSet(n)
        for anchor in finset.all_maps(X, G.objects):
            results.extend(_actions_with_anchor(G, anchor))
    return results


def _actions_with_anchor(G, anchor):
    pairs = finset.pullback(G.src, anchor).pairs()
    fixed = {(G.unit(anchor(x)), x): x for x in anchor.dom}
    open_pairs = [p for p in pairs if p not in fixed]
    act = dict(fixed)
    found = []

    def consistent(g, x, y):
        for (g2, x2), z in act.items():
            if g2 == g and z == y and x2 != x:
                return False
        back = act.get((G.inv(g), y))
        if back is not None and back != x:
            return False
        for (g2, x2), z in list(act.items()):
            if z == x:
                w = act.get((G.mul[(g, g2)], x2))
                if w is not None and w != y:
                    return False
        for g1 in G.arrows_from[G.tgt(g)]:
            w = act.get((g1, y))
            if w is None:
                continue
            v = act.get((G.mul[(g1, g)], x))
            if v is not None and v != w:
                return False
        for g1, g2, g12 in G.mul_table:
            if g12 != g:
                continue
            z = act.get((g2, x))
            if z is None:
                continue
            w = act.get((g1, z))
            if w is not None and w != y:
                return False
        return True

    def extend(i):
        if i == len(open_pairs):
            action = make_action(G, anchor.dom.size, anchor.table,
                                 [(g, x, y) for (g, x), y in act.items()])
            if validate_action(action).is_valid:
                found.append(action)
            return
        g, x = open_pairs[i]
        for y in anchor.fiber(G.tgt(g)):
            if consistent(g, x, y):
                act[(g, x)] = y
                extend(i + 1)
                del act[(g, x)]

    extend(0)
    return found


@dataclass(frozen=True)
class BiAction:
    """
    An (H x G)-object: one carrier with commuting actions of ``left`` (H) and
    ``right`` (G), anchored by ``p`` and ``q`` respectively.
    """

    left: object
    right: object
    carrier: FinSet
    p_anchor: FinMap
    q_anchor: FinMap
    h_table: tuple = ()
    g_table: tuple = ()

    def __post_init__(self):
        for name in ('h_table', 'g_table'):
            object.__setattr__(
                self, name, tuple(sorted(tuple(int(v) for v in t) for t in getattr(self, name)))
            )

    def __repr__(self):
        return f'{type(self).__name__}(carrier={self.carrier.size}, {self.left!r} -> {self.right!r})'

    @cached_property
    def left_action(self):
        return GAction(self.left, self.carrier, self.p_anchor, self.h_table)

    @cached_property
    def right_action(self):
        return GAction(self.right, self.carrier, self.q_anchor, self.g_table)

    @property
    def h_act(self):
        return self.left_action.act

    @property
    def g_act(self):
        return self.right_action.act

    def joint_action(self):
        """The same data as a single action of product_groupoid(left, right)."""
        H, G = self.left, self.right
        HG = product_groupoid(H, G)
        n0, n1 = G.objects.size, G.arrows.size
        anchor = [self.p_anchor(x) * n0 + self.q_anchor(x) for x in self.carrier]
        act = []
        for x in self.carrier:
            for h in H.arrows_from[self.p_anchor(x)]:
                for g in G.arrows_from[self.q_anchor(x)]:
                    act.append((h * n1 + g, x, self.h_act[(h, self.g_act[(g, x)])]))
        return make_action(HG, self.carrier.size, anchor, act)


def make_biaction(H, G, n, p, q, h_act, g_act, cls=None):
    cls = cls or BiAction
    X = FinSet(n)
    return cls(H, G, X, FinMap(X, H.objects, p), FinMap(X, G.objects, q),
               tuple(h_act), tuple(g_act))


def validate_biaction(B):
    """Both actions, anchor invariance of each under the other, and commutation."""
    report = ReportBuilder()
    report.extend(validate_action(B.left_action), prefix='left-')
    report.extend(validate_action(B.right_action), prefix='right-')
    if not report.build().is_valid:
        return report.build()
    for (g, x), y in B.g_act.items():
        if B.p_anchor(y) != B.p_anchor(x):
            report.add('left-anchor-invariance', 'right action moves the left anchor', g, x)
    for (h, x), y in B.h_act.items():
        if B.q_anchor(y) != B.q_anchor(x):
            report.add('right-anchor-invariance', 'left action moves the right anchor', h, x)
    if report.has('left-anchor-invariance') or report.has('right-anchor-invariance'):
        return report.build()
    for (h, x), hx in B.h_act.items():
        for g in B.right.arrows_from[B.q_anchor(x)]:
            if B.g_act[(g, hx)] != B.h_act[(h, B.g_act[(g, x)])]:
                report.add('commutation', 'the two actions do not commute', h, g, x)
    return report.build()


def right_action_on_left_orbits(B):
    """
    The quotient of B by its left action, with the right action and anchor it
    inherits; returns the action together with the quotient map.
    """
    quotient = orbits(B.left_action)
    reps = quotient.representatives()
    G = B.right
    anchor = [B.q_anchor(r) for r in reps]
    act = [
        (g, c, quotient.proj(B.g_act[(g, r)]))
        for c, r in enumerate(reps)
        for g in G.arrows_from[B.q_anchor(r)]
    ]
    return make_action(G, quotient.classes.size, anchor, act), quotient
