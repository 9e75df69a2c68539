"""
Internal groupoids in finite sets.

Conventions: ``src`` is d0 (the domain), ``tgt`` is d1 (the codomain), a pair
(g1, g2) is composable when src(g1) == tgt(g2), and ``mul(g1, g2)`` is
"g1 after g2".
"""
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product as cartesian

import networkx as nx
from django.conf import settings

from . import finset
from .exceptions import GroupoidLawError, SearchExhausted, ShapeMismatch
from .finset import FinMap, FinSet
from .validation import ReportBuilder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Groupoid:
    objects: FinSet
    arrows: FinSet
    src: FinMap
    tgt: FinMap
    unit: FinMap
    inv: FinMap
    mul_table: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(
            self, 'mul_table', tuple(sorted(tuple(int(v) for v in t) for t in self.mul_table))
        )

    def __repr__(self):
        return f'Groupoid(objects={self.objects.size}, arrows={self.arrows.size})'

    @cached_property
    def mul(self):
        return {(g1, g2): g for g1, g2, g in self.mul_table}

    @cached_property
    def composable_pairs(self):
        return finset.pullback(self.src, self.tgt)

    def composable(self, g1, g2):
        return self.src(g1) == self.tgt(g2)

    def compose(self, g1, g2):
        try:
            return self.mul[(g1, g2)]
        except KeyError:
            raise ShapeMismatch(f'arrows {g1} and {g2} are not composable') from None

    def e(self, x):
        return self.unit(x)

    def i(self, g):
        return self.inv(g)

    def hom_set(self, x, y):
        return tuple(g for g in self.arrows if self.src(g) == x and self.tgt(g) == y)

    @cached_property
    def arrows_from(self):
        out = {x: [] for x in self.objects}
        for g in self.arrows:
            out[self.src(g)].append(g)
        return {x: tuple(gs) for x, gs in out.items()}

    @cached_property
    def arrows_into(self):
        into = {x: [] for x in self.objects}
        for g in self.arrows:
            into[self.tgt(g)].append(g)
        return {x: tuple(gs) for x, gs in into.items()}

    def is_unit(self, g):
        return self.unit(self.src(g)) == g


def make_groupoid(n_objects, n_arrows, src, tgt, unit, inv, mul_table):
    G0, G1 = FinSet(n_objects), FinSet(n_arrows)
    return Groupoid(
        objects=G0,
        arrows=G1,
        src=FinMap(G1, G0, src),
        tgt=FinMap(G1, G0, tgt),
        unit=FinMap(G0, G1, unit),
        inv=FinMap(G1, G1, inv),
        mul_table=tuple(mul_table),
    )


def validate_groupoid(G):
    report = ReportBuilder()
    shapes = (
        ('src', G.src, G.arrows, G.objects),
        ('tgt', G.tgt, G.arrows, G.objects),
        ('unit', G.unit, G.objects, G.arrows),
        ('inv', G.inv, G.arrows, G.arrows),
    )
    for name, f, dom, cod in shapes:
        if f.dom != dom or f.cod != cod:
            report.add('shape', f'{name} has the wrong domain or codomain')
    if report.has('shape'):
        return report.build()

    for x in G.objects:
        u = G.unit(x)
        if G.src(u) != x or G.tgt(u) != x:
            report.add('unit-endpoints', f'unit of object {x} is not an endo-arrow of {x}', x)

    seen = set()
    for g1, g2, g in G.mul_table:
        if not (g1 in G.arrows and g2 in G.arrows and g in G.arrows):
            report.add('composition-range', 'multiplication entry out of range', g1, g2, g)
            continue
        if (g1, g2) in seen:
            report.add('composition-domain', 'duplicate multiplication entry', g1, g2)
        seen.add((g1, g2))
        if not G.composable(g1, g2):
            report.add('composition-domain', 'product defined on a non-composable pair', g1, g2)
            continue
        if G.src(g) != G.src(g2) or G.tgt(g) != G.tgt(g1):
            report.add('composition-endpoints', 'product has the wrong endpoints', g1, g2, g)
    for pair in G.composable_pairs.pairs():
        if pair not in seen:
            report.add('composition-domain', 'composable pair has no product', *pair)
    if any(report.has(a) for a in ('composition-range', 'composition-domain',
                                      'composition-endpoints')):
        return report.build()

    mul = G.mul
    for g in G.arrows:
        if mul.get((g, G.unit(G.src(g)))) != g or mul.get((G.unit(G.tgt(g)), g)) != g:
            report.add('unit-law', 'identity does not act trivially', g)

    for g1, g2, g12 in G.mul_table:
        for g3 in G.arrows_into[G.src(g2)]:
            if mul[(g12, g3)] != mul[(g1, mul[(g2, g3)])]:
                report.add('associativity', 'products disagree', g1, g2, g3)

    for g in G.arrows:
        h = G.inv(g)
        if G.src(h) != G.tgt(g) or G.tgt(h) != G.src(g):
            report.add('inverse-law', 'inverse has the wrong endpoints', g)
            continue
        if mul[(g, h)] != G.unit(G.tgt(g)) or mul[(h, g)] != G.unit(G.src(g)):
            report.add('inverse-law', 'inverse does not cancel', g)
    return report.build()


def trivial_groupoid(X):
    n = X.size
    ids = tuple(range(n))
    return make_groupoid(n, n, ids, ids, ids, ids, [(x, x, x) for x in ids])


def pair_groupoid(X):
    n = X.size
    arrows = [(a, b) for a in range(n) for b in range(n)]
    index = {pair: k for k, pair in enumerate(arrows)}
    return make_groupoid(
        n, n * n,
        src=[b for a, b in arrows],
        tgt=[a for a, b in arrows],
        unit=[index[(x, x)] for x in range(n)],
        inv=[index[(b, a)] for a, b in arrows],
        mul_table=[
            (index[(a, b)], index[(b, c)], index[(a, c)])
            for a, b, c in cartesian(range(n), repeat=3)
        ],
    )


@dataclass(frozen=True)
class GroupTable:
    """A finite group as an explicit multiplication table ``table[a][b] = a*b``."""

    table: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'table', tuple(tuple(int(v) for v in row) for row in self.table))

    @property
    def order(self):
        return len(self.table)

    def mul(self, a, b):
        return self.table[a][b]

    @cached_property
    def identity(self):
        for e in range(self.order):
            if all(self.table[e][a] == a == self.table[a][e] for a in range(self.order)):
                return e
        return None

    def inverse(self, a):
        return self.table[a].index(self.identity)

    def element_order(self, a):
        k, power = 1, a
        while power != self.identity:
            power = self.table[power][a]
            k += 1
        return k

    @cached_property
    def order_profile(self):
        return tuple(sorted(Counter(self.element_order(a) for a in range(self.order)).items()))


def check_group_table(table):
    """Name of the first group axiom the table violates, or None."""
    n = len(table)
    if n == 0:
        return 'nonempty'
    if any(len(row) != n or any(not 0 <= v < n for v in row) for row in table):
        return 'closure'
    identities = [
        e for e in range(n) if all(table[e][a] == a == table[a][e] for a in range(n))
    ]
    if not identities:
        return 'identity'
    e = identities[0]
    for a in range(n):
        if not any(table[a][b] == e == table[b][a] for b in range(n)):
            return 'inverse'
    for a, b, c in cartesian(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            return 'associativity'
    return None


def group_groupoid(table):
    rows = table.table if isinstance(table, GroupTable) else table
    failed = check_group_table(rows)
    if failed is not None:
        raise GroupoidLawError(failed, 'table is not a group')
    group = table if isinstance(table, GroupTable) else GroupTable(rows)
    n = group.order
    return make_groupoid(
        1, n,
        src=[0] * n,
        tgt=[0] * n,
        unit=[group.identity],
        inv=[group.inverse(a) for a in range(n)],
        mul_table=[(a, b, group.mul(a, b)) for a in range(n) for b in range(n)],
    )


def cyclic_group_table(n):
    return GroupTable(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def klein_group_table():
    return GroupTable(tuple(tuple(a ^ b for b in range(4)) for a in range(4)))


def direct_product_table(A, B):
    """A x B with (a, b) at index a * |B| + b."""
    m = B.order
    pairs = [(a, b) for a in range(A.order) for b in range(m)]
    return GroupTable(tuple(
        tuple(A.mul(a1, a2) * m + B.mul(b1, b2) for a2, b2 in pairs) for a1, b1 in pairs
    ))


def dihedral_group_table(n):
    """Symmetries of an n-gon: r^k s^e at index k + n * e."""
    elements = [(k, e) for e in range(2) for k in range(n)]

    def mul(x, y):
        (k1, e1), (k2, e2) = x, y
        return ((k1 + (-k2 if e1 else k2)) % n) + n * (e1 ^ e2)

    return GroupTable(tuple(tuple(mul(x, y) for y in elements) for x in elements))


def quaternion_group_table():
    """Q8 with +1, +i, +j, +k at 0..3 and their negatives at 4..7."""

    def units(a, b):
        if a == 0 or b == 0:
            return 0, a + b
        if a == b:
            return 1, 0
        return (0 if (a, b) in ((1, 2), (2, 3), (3, 1)) else 1), 6 - a - b

    def mul(x, y):
        sign, c = units(x % 4, y % 4)
        return c + 4 * (x // 4 ^ y // 4 ^ sign)

    return GroupTable(tuple(tuple(mul(x, y) for y in range(8)) for x in range(8)))


def symmetric_group_table(n):
    perms = sorted(permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    return GroupTable(tuple(
        tuple(index[tuple(p[q[i]] for i in range(n))] for q in perms) for p in perms
    ))


def product_groupoid(H, G):
    n0, n1 = G.objects.size, G.arrows.size

    def obj(h, g):
        return h * n0 + g

    def arr(h, g):
        return h * n1 + g

    arrows = [(h, g) for h in H.arrows for g in G.arrows]
    return make_groupoid(
        H.objects.size * n0, len(arrows),
        src=[obj(H.src(h), G.src(g)) for h, g in arrows],
        tgt=[obj(H.tgt(h), G.tgt(g)) for h, g in arrows],
        unit=[arr(H.unit(x), G.unit(y)) for x in H.objects for y in G.objects],
        inv=[arr(H.inv(h), G.inv(g)) for h, g in arrows],
        mul_table=[
            (arr(h1, g1), arr(h2, g2), arr(hh, gg))
            for h1, h2, hh in H.mul_table
            for g1, g2, gg in G.mul_table
        ],
    )


def product_object_index(G, h, g):
    """Index of the object (h, g) of ``product_groupoid(H, G)``."""
    return h * G.objects.size + g


def product_arrow_index(G, h, g):
    return h * G.arrows.size + g


def opposite_groupoid(G):
    return Groupoid(
        objects=G.objects,
        arrows=G.arrows,
        src=G.tgt,
        tgt=G.src,
        unit=G.unit,
        inv=G.inv,
        mul_table=tuple((g2, g1, g) for g1, g2, g in G.mul_table),
    )


def disjoint_union_groupoid(G, H):
    shift0, shift1 = G.objects.size, G.arrows.size
    return make_groupoid(
        G.objects.size + H.objects.size,
        G.arrows.size + H.arrows.size,
        src=G.src.table + tuple(shift0 + x for x in H.src.table),
        tgt=G.tgt.table + tuple(shift0 + x for x in H.tgt.table),
        unit=G.unit.table + tuple(shift1 + g for g in H.unit.table),
        inv=G.inv.table + tuple(shift1 + g for g in H.inv.table),
        mul_table=G.mul_table + tuple(
            (shift1 + a, shift1 + b, shift1 + c) for a, b, c in H.mul_table
        ),
    )


def relabel_groupoid(G, objects, arrows):
    """Transport G along bijections ``objects``: G0 -> G0 and ``arrows``: G1 -> G1."""
    if not (finset.is_bijective(objects) and finset.is_bijective(arrows)):
        raise ShapeMismatch('relabelings must be bijections', objects, arrows)
    back_obj = finset.inverse(objects)
    back_arr = finset.inverse(arrows)
    return make_groupoid(
        G.objects.size, G.arrows.size,
        src=[objects(G.src(back_arr(g))) for g in G.arrows],
        tgt=[objects(G.tgt(back_arr(g))) for g in G.arrows],
        unit=[arrows(G.unit(back_obj(x))) for x in G.objects],
        inv=[arrows(G.inv(back_arr(g))) for g in G.arrows],
        mul_table=[(arrows(a), arrows(b), arrows(c)) for a, b, c in G.mul_table],
    )


def object_components(G):
    return finset.quotient_by_pairs(G.objects, zip(G.src.table, G.tgt.table))


def isotropy_group(G, x):
    if x not in G.objects:
        raise ShapeMismatch(f'object {x} is out of range for {G!r}')
    loops = tuple(g for g in G.arrows_from[x] if G.tgt(g) == x)
    position = {g: k for k, g in enumerate(loops)}
    return GroupTable(
        tuple(tuple(position[G.mul[(a, b)]] for b in loops) for a in loops),
        labels=loops,
    )


def _closure(A, gens):
    seen = {A.identity}
    frontier = [A.identity]
    while frontier:
        u = frontier.pop()
        for g in gens:
            v = A.mul(u, g)
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return seen


def group_generators(A):
    """A generating sequence of A, picked greedily among elements of largest order."""
    gens, span = [], {A.identity}
    for a in sorted(range(A.order), key=lambda a: (-A.element_order(a), a)):
        if a not in span:
            gens.append(a)
            span = _closure(A, gens)
    return tuple(gens)


def _extend_on_generators(A, B, gens, images):
    """
    The injective homomorphism on the subgroup generated by ``gens`` sending
    gens[k] to images[k] (unreached entries are -1), or None if there is none.
    """
    table = [-1] * A.order
    table[A.identity] = B.identity
    used = {B.identity}
    frontier = [A.identity]
    while frontier:
        u = frontier.pop()
        for g, b in zip(gens, images):
            v, w = A.mul(u, g), B.mul(table[u], b)
            if table[v] >= 0:
                if table[v] != w:
                    return None
                continue
            if w in used:
                return None
            table[v] = w
            used.add(w)
            frontier.append(v)
    return table


def find_group_isomorphism(A, B, limit=None):
    """Bijection of element indices preserving multiplication, or None."""
    if A.order != B.order or A.order_profile != B.order_profile:
        return None
    if limit is None:
        limit = getattr(settings, 'BIBUNDLE_SEARCH_LIMIT', 200000)
    gens = group_generators(A)
    options = [
        [b for b in range(B.order) if B.element_order(b) == A.element_order(g)] for g in gens
    ]
    nodes = 0

    def extend(images):
        nonlocal nodes
        k = len(images)
        for b in options[k]:
            nodes += 1
            if nodes > limit:
                raise SearchExhausted(f'search exceeded {limit} nodes')
            trial = images + (b,)
            table = _extend_on_generators(A, B, gens[:k + 1], trial)
            if table is None:
                continue
            if k + 1 == len(gens):
                return tuple(table)
            found = extend(trial)
            if found is not None:
                return found
        return None

    if not gens:
        return (B.identity,)
    return extend(())


@dataclass(frozen=True)
class GroupoidIsomorphism:
    objects: FinMap
    arrows: FinMap


def _object_signatures(G):
    components = object_components(G)
    sizes = components.class_sizes()
    sigs = []
    for x in G.objects:
        loops = sum(1 for g in G.arrows_from[x] if G.tgt(g) == x)
        sigs.append((
            sizes[components.proj(x)],
            loops,
            len(G.arrows_from[x]),
            len(G.arrows_into[x]),
        ))
    return sigs


def arrow_graph_hash(G):
    """Weisfeiler-Lehman hash of the arrow graph, labelled by isotropy order."""
    graph = nx.DiGraph()
    for x in G.objects:
        loops = sum(1 for g in G.arrows_from[x] if G.tgt(g) == x)
        graph.add_node(x, iso=str(loops))
    counts = Counter(zip(G.src.table, G.tgt.table))
    for (a, b), k in counts.items():
        if a != b:
            graph.add_edge(a, b, count=str(k))
    return nx.weisfeiler_lehman_graph_hash(graph, node_attr='iso', edge_attr='count')


def spanning_arrows(G, root):
    """For each object of the component of root, an arrow root -> x."""
    paths = {root: G.unit(root)}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for g in G.arrows_from[x]:
            y = G.tgt(g)
            if y not in paths:
                paths[y] = G.mul[(g, paths[x])]
                queue.append(y)
    return paths


@dataclass(frozen=True, eq=False)
class _Component:
    root: int
    members: tuple
    paths: dict
    group: GroupTable


def _components(G):
    found = []
    for root in object_components(G).representatives():
        paths = spanning_arrows(G, root)
        found.append(_Component(root, tuple(sorted(paths)), paths, isotropy_group(G, root)))
    return found


def find_groupoid_isomorphism(G, H, limit=None):
    """
    An isomorphism of groupoids G -> H, or None when there is none.

    Components are matched by size and isotropy group; inside a matched pair
    the roots correspond, the spanning arrows t_x of G go to the spanning
    arrows s_y of H, and h: x -> x' goes to s_y' . iso(t_x'^-1 h t_x) . s_y^-1.
    """
    if G.objects.size != H.objects.size or G.arrows.size != H.arrows.size:
        return None
    if sorted(_object_signatures(G)) != sorted(_object_signatures(H)):
        return None
    if arrow_graph_hash(G) != arrow_graph_hash(H):
        return None

    free = _components(H)
    matched = []
    for source in _components(G):
        for target in free:
            if len(target.members) != len(source.members):
                continue
            iso = find_group_isomorphism(source.group, target.group, limit)
            if iso is not None:
                matched.append((source, target, iso))
                free.remove(target)
                break
        else:
            return None

    obj_map = [0] * G.objects.size
    arr_map = [0] * G.arrows.size
    for source, target, iso in matched:
        for x, y in zip(source.members, target.members):
            obj_map[x] = y
        position = {g: k for k, g in enumerate(source.group.labels)}
        for x in source.members:
            t_x, s_y = source.paths[x], target.paths[obj_map[x]]
            for g in G.arrows_from[x]:
                x2 = G.tgt(g)
                loop = G.mul[(G.inv(source.paths[x2]), G.mul[(g, t_x)])]
                image = target.group.labels[iso[position[loop]]]
                s_y2 = target.paths[obj_map[x2]]
                arr_map[g] = H.mul[(s_y2, H.mul[(image, H.inv(s_y))])]
    logger.debug('groupoid isomorphism found for %r', G)
    return GroupoidIsomorphism(
        FinMap(G.objects, H.objects, tuple(obj_map)),
        FinMap(G.arrows, H.arrows, tuple(arr_map)),
    )


def isomorphic_groupoids(G, H):
    return find_groupoid_isomorphism(G, H) is not None


@dataclass(frozen=True)
class IsotropyClass:
    order: int
    order_profile: tuple
    group: GroupTable = field(compare=False)
    representative: int = field(default=0, compare=False)


@dataclass(frozen=True, eq=False)
class MoritaInvariant:
    """One isotropy class per connected component, sorted by (order, profile)."""

    classes: tuple

    def signature(self):
        return tuple((c.order, c.order_profile) for c in self.classes)

    def __hash__(self):
        return hash(self.signature())

    def __eq__(self, other):
        if not isinstance(other, MoritaInvariant):
            return NotImplemented
        return self.matching(other) is not None

    def matching(self, other):
        """Pairs (i, j, iso) matching classes of self with classes of other, or None."""
        if self.signature() != other.signature():
            return None
        free = list(range(len(other.classes)))
        pairs = []
        for i, c in enumerate(self.classes):
            for j in free:
                d = other.classes[j]
                if (c.order, c.order_profile) != (d.order, d.order_profile):
                    continue
                iso = find_group_isomorphism(c.group, d.group)
                if iso is not None:
                    pairs.append((i, j, iso))
                    free.remove(j)
                    break
            else:
                return None
        return tuple(pairs)

    def describe(self):
        return [
            {'order': c.order, 'element_orders': [list(p) for p in c.order_profile],
             'table': [list(row) for row in c.group.table]}
            for c in self.classes
        ]
