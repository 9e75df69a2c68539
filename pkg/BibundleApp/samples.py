"""
Named and randomly generated structures for the law-checking suites.

Every finite groupoid is a disjoint union of connected pieces
pair(n) x Gamma, so random groupoids are built that way and then relabelled
by random permutations of objects and arrows.  All randomness flows through a
caller-supplied ``random.Random``.
"""
from functools import lru_cache
from itertools import combinations_with_replacement

from .action import enumerate_actions, free_action, terminal_action
from .finset import FinMap, FinSet
from .functor import enumerate_functors
from .groupoid import (
    cyclic_group_table, dihedral_group_table, direct_product_table, disjoint_union_groupoid,
    group_groupoid, klein_group_table, pair_groupoid, product_groupoid, quaternion_group_table,
    relabel_groupoid, symmetric_group_table, trivial_groupoid,
)

GROUP_TABLES = (
    ('Z1', cyclic_group_table(1)),
    ('Z2', cyclic_group_table(2)),
    ('Z3', cyclic_group_table(3)),
    ('Z4', cyclic_group_table(4)),
    ('V4', klein_group_table()),
    ('Z5', cyclic_group_table(5)),
    ('Z6', cyclic_group_table(6)),
    ('S3', symmetric_group_table(3)),
    ('Z7', cyclic_group_table(7)),
    ('Z8', cyclic_group_table(8)),
    ('Z2xZ4', direct_product_table(cyclic_group_table(2), cyclic_group_table(4))),
    ('Z2xZ2xZ2', direct_product_table(klein_group_table(), cyclic_group_table(2))),
    ('D4', dihedral_group_table(4)),
    ('Q8', quaternion_group_table()),
)


def connected_groupoid(n, table):
    """pair(n) x Gamma: n objects, isotropy Gamma everywhere."""
    return product_groupoid(pair_groupoid(FinSet(n)), group_groupoid(table))


def groupoid_from_components(components):
    result = trivial_groupoid(FinSet(0))
    for n, table in components:
        result = disjoint_union_groupoid(result, connected_groupoid(n, table))
    return result


def random_permutation(rng, n):
    table = list(range(n))
    rng.shuffle(table)
    return FinMap(FinSet(n), FinSet(n), tuple(table))


def random_map(rng, X, Y):
    return FinMap(X, Y, tuple(rng.randrange(Y.size) for _ in X))


def random_components(rng, max_objects, max_arrows):
    components = []
    objects = arrows = 0
    while objects < max_objects:
        options = [
            (n, table)
            for n in range(1, max_objects - objects + 1)
            for _, table in GROUP_TABLES
            if arrows + n * n * table.order <= max_arrows
        ]
        if not options or (components and rng.random() < 0.4):
            break
        n, table = rng.choice(options)
        components.append((n, table))
        objects += n
        arrows += n * n * table.order
    return components


def random_groupoid(rng, max_objects=3, max_arrows=8):
    return relabelled(rng, groupoid_from_components(random_components(rng, max_objects, max_arrows)))


@lru_cache(maxsize=128)
def small_actions(G, max_carrier):
    return tuple(enumerate_actions(G, max_carrier))


def random_action(rng, G, max_carrier=3):
    return rng.choice(small_actions(G, max_carrier))


def action_family(G, max_carrier=2):
    """The free action at each object, the terminal action, then every small action."""
    family = [free_action(G, FinMap(FinSet(1), G.objects, (x,))) for x in G.objects]
    family.append(terminal_action(G))
    family.extend(small_actions(G, max_carrier))
    return family


@lru_cache(maxsize=128)
def _functors(H, G):
    return tuple(enumerate_functors(H, G))


def random_functor(rng, H, G):
    functors = _functors(H, G)
    return rng.choice(functors) if functors else None


def small_groupoids(max_objects=2, max_arrows=6):
    """
    One representative of every groupoid within the bounds, up to isomorphism,
    as long as every group of order at most max_arrows is in GROUP_TABLES
    (true up to order 8).
    """
    pieces = [
        (n, table)
        for n in range(1, max_objects + 1)
        for _, table in GROUP_TABLES
        if n * n * table.order <= max_arrows
    ]
    shapes = [
        shape
        for k in range(1, max_objects + 1)
        for shape in combinations_with_replacement(pieces, k)
        if sum(n for n, _ in shape) <= max_objects
        and sum(n * n * table.order for n, table in shape) <= max_arrows
    ]
    return [groupoid_from_components(shape) for shape in shapes]


def relabelled(rng, G):
    return relabel_groupoid(
        G, random_permutation(rng, G.objects.size), random_permutation(rng, G.arrows.size)
    )
