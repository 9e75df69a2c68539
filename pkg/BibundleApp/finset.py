"""
The ambient category: finite sets as integer ranges and the maps between them.

Every construction numbers its output canonically (pullback apexes
lexicographically, quotient classes by minimal representative) so that two
runs over the same input agree bit-for-bit.
"""
import logging
from dataclasses import dataclass, field
from itertools import product as cartesian

from django.conf import settings

from .exceptions import SearchExhausted, ShapeMismatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FinSet:
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f'FinSet size must be non-negative, got {self.size}')

    def __iter__(self):
        return iter(range(self.size))

    def __len__(self):
        return self.size

    def __contains__(self, x):
        return isinstance(x, int) and 0 <= x < self.size

    def __repr__(self):
        return f'FinSet({self.size})'


@dataclass(frozen=True)
class FinMap:
    dom: FinSet
    cod: FinSet
    table: tuple

    def __post_init__(self):
        table = tuple(int(y) for y in self.table)
        object.__setattr__(self, 'table', table)
        if len(table) != self.dom.size:
            raise ShapeMismatch(
                f'table has {len(table)} entries for a domain of size {self.dom.size}'
            )
        for x, y in enumerate(table):
            if not 0 <= y < self.cod.size:
                raise ShapeMismatch(
                    f'entry {x} -> {y} is outside the codomain {self.cod!r}'
                )

    def __call__(self, x):
        return self.table[x]

    def __repr__(self):
        return f'FinMap({self.dom.size}->{self.cod.size}, {list(self.table)})'

    @classmethod
    def from_function(cls, dom, cod, fn):
        return cls(dom, cod, tuple(fn(x) for x in dom))

    def image(self):
        return sorted(set(self.table))

    def fiber(self, y):
        return tuple(x for x, fx in enumerate(self.table) if fx == y)


def terminal():
    return FinSet(1)


def identity(X):
    return FinMap(X, X, tuple(range(X.size)))


def unique_map(X):
    """The unique map X -> 1."""
    return FinMap(X, terminal(), (0,) * X.size)


def constant(X, Y, y):
    return FinMap(X, Y, (y,) * X.size)


def compose(f, g):
    """f after g."""
    if g.cod != f.dom:
        raise ShapeMismatch(
            f'cannot compose {f!r} after {g!r}: codomain {g.cod!r} is not domain {f.dom!r}',
            f, g,
        )
    return FinMap(g.dom, f.cod, tuple(f.table[y] for y in g.table))


def is_surjective(f):
    # Effective descent morphisms of finite sets are exactly the surjections.
    return len(set(f.table)) == f.cod.size


def is_injective(f):
    return len(set(f.table)) == f.dom.size


def is_bijective(f):
    return f.dom.size == f.cod.size and is_injective(f)


def inverse(f):
    if not is_bijective(f):
        raise ShapeMismatch(f'{f!r} is not a bijection', f)
    table = [0] * f.cod.size
    for x, y in enumerate(f.table):
        table[y] = x
    return FinMap(f.cod, f.dom, tuple(table))


def surjective_product(f, g):
    """f x g is surjective whenever both factors are (products of descent maps descend)."""
    return is_surjective(f) and is_surjective(g)


@dataclass(frozen=True)
class Pullback:
    apex: FinSet
    proj1: FinMap
    proj2: FinMap
    pair_index: dict = field(compare=False, repr=False)

    def pairs(self):
        return tuple(zip(self.proj1.table, self.proj2.table))

    def index(self, a, b):
        return self.pair_index[(a, b)]

    def get(self, a, b):
        return self.pair_index.get((a, b))

    def pair_map(self, h, k):
        """The induced map W -> apex of two maps h: W -> A, k: W -> B over the base."""
        if h.dom != k.dom:
            raise ShapeMismatch('pairing maps must share a domain', h, k)
        table = []
        for w in h.dom:
            try:
                table.append(self.pair_index[(h(w), k(w))])
            except KeyError:
                raise ShapeMismatch(
                    f'element {w} does not land in the pullback', h, k
                ) from None
        return FinMap(h.dom, self.apex, tuple(table))


def pullback(f, g):
    """All pairs (a, b) with f(a) == g(b), in lexicographic order."""
    if f.cod != g.cod:
        raise ShapeMismatch(
            f'cannot pull back {f!r} against {g!r}: codomains differ', f, g
        )
    by_value = {}
    for b, gb in enumerate(g.table):
        by_value.setdefault(gb, []).append(b)
    pairs = []
    for a, fa in enumerate(f.table):
        for b in by_value.get(fa, ()):
            pairs.append((a, b))
    apex = FinSet(len(pairs))
    return Pullback(
        apex=apex,
        proj1=FinMap(apex, f.dom, tuple(a for a, _ in pairs)),
        proj2=FinMap(apex, g.dom, tuple(b for _, b in pairs)),
        pair_index={pair: i for i, pair in enumerate(pairs)},
    )


def product(X, Y):
    return pullback(unique_map(X), unique_map(Y))


@dataclass(frozen=True)
class Coproduct:
    total: FinSet
    inl: FinMap
    inr: FinMap

    def case(self, z):
        """('left', x) or ('right', y) for an element of the disjoint union."""
        if z < self.inl.dom.size:
            return 'left', z
        return 'right', z - self.inl.dom.size


def coproduct(X, Y):
    total = FinSet(X.size + Y.size)
    return Coproduct(
        total=total,
        inl=FinMap(X, total, tuple(range(X.size))),
        inr=FinMap(Y, total, tuple(X.size + y for y in Y)),
    )


def equalizer(f, g):
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch('equalizer needs a parallel pair', f, g)
    kept = tuple(x for x in f.dom if f(x) == g(x))
    return FinMap(FinSet(len(kept)), f.dom, kept)


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x


@dataclass(frozen=True)
class Quotient:
    source: FinSet
    classes: FinSet
    proj: FinMap

    def members(self, c):
        return self.proj.fiber(c)

    def representative(self, c):
        # classes are numbered by minimal member, so the first hit is the minimum
        return self.proj.table.index(c)

    def representatives(self):
        first = {}
        for x, c in enumerate(self.proj.table):
            first.setdefault(c, x)
        return tuple(first[c] for c in self.classes)

    def class_sizes(self):
        sizes = [0] * self.classes.size
        for c in self.proj.table:
            sizes[c] += 1
        return tuple(sizes)

    def factor(self, h):
        """The unique map u with u . proj == h; h must be constant on classes."""
        if h.dom != self.source:
            raise ShapeMismatch('map to factor must start at the quotient source', h, self.proj)
        table = [None] * self.classes.size
        for x, c in enumerate(self.proj.table):
            if table[c] is None:
                table[c] = h(x)
            elif table[c] != h(x):
                raise ShapeMismatch(
                    f'map is not constant on class {c}: {table[c]} vs {h(x)} at {x}', h, self.proj
                )
        return FinMap(self.classes, h.cod, tuple(table))


def quotient_by_pairs(source, pairs):
    """Finest partition of ``source`` identifying each given pair."""
    uf = UnionFind(source.size)
    for x, y in pairs:
        uf.union(x, y)
    labels = {}
    table = []
    for x in source:
        root = uf.find(x)
        if root not in labels:
            labels[root] = len(labels)
        table.append(labels[root])
    classes = FinSet(len(labels))
    return Quotient(source, classes, FinMap(source, classes, tuple(table)))


def coequalizer(f, g):
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeMismatch(
            f'coequalizer needs a parallel pair, got {f!r} and {g!r}', f, g
        )
    return quotient_by_pairs(f.cod, zip(f.table, g.table))


def search_maps(dom_size, cod_size, accept=None, candidates=None, injective=False,
                order=None, limit=None):
    """
    Backtracking enumeration of maps {0..dom_size-1} -> {0..cod_size-1}.

    ``candidates(x)`` restricts the possible images of x; ``accept(mapping, x, y)``
    is called with the partial mapping (unassigned entries are -1) before x is
    sent to y and must only inspect assigned entries.  Elements are assigned in
    ``order`` (default ascending) and candidates are tried in ascending order,
    so the solutions come out in lexicographic order of that assignment.
    Yields complete tables as tuples.
    """
    if limit is None:
        limit = getattr(settings, 'BIBUNDLE_SEARCH_LIMIT', 200000)
    order = list(range(dom_size)) if order is None else list(order)
    options = [
        sorted(candidates(x)) if candidates is not None else list(range(cod_size))
        for x in range(dom_size)
    ]
    mapping = [-1] * dom_size
    used = [False] * cod_size
    nodes = 0

    def extend(depth):
        nonlocal nodes
        if depth == len(order):
            yield tuple(mapping)
            return
        x = order[depth]
        for y in options[x]:
            if injective and used[y]:
                continue
            nodes += 1
            if nodes > limit:
                raise SearchExhausted(f'search exceeded {limit} nodes')
            if accept is not None and not accept(mapping, x, y):
                continue
            mapping[x] = y
            used[y] = True
            yield from extend(depth + 1)
            mapping[x] = -1
            used[y] = False

    yield from extend(0)


def find_bijection_search(dom, cod, accept=None, candidates=None, order=None, limit=None):
    """First structure-preserving bijection dom -> cod, or None."""
    if dom.size != cod.size:
        return None
    for table in search_maps(dom.size, cod.size, accept, candidates, injective=True,
                             order=order, limit=limit):
        logger.debug('bijection found between sets of size %d', dom.size)
        return FinMap(dom, cod, table)
    return None


def all_maps(dom, cod):
    """Every map dom -> cod, lexicographic; only sensible for tiny sets."""
    for table in cartesian(range(cod.size), repeat=dom.size):
        yield FinMap(dom, cod, table)
