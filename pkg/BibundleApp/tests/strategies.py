from hypothesis import strategies as st

from BibundleApp.bibundle import from_functor, relabel_bibundle
from BibundleApp.finset import FinMap, FinSet
from BibundleApp.functor import enumerate_functors
from BibundleApp.groupoid import relabel_groupoid
from BibundleApp.samples import GROUP_TABLES, groupoid_from_components, small_actions


def permutation_maps(size):
    X = FinSet(size)
    return st.permutations(range(size)).map(lambda table: FinMap(X, X, tuple(table)))


@st.composite
def groupoids(draw, max_objects=3, max_arrows=8):
    """Disjoint unions of pair(n) x Gamma pieces under random relabelling."""
    components = []
    objects = arrows = 0
    while objects < max_objects:
        options = [
            (n, table)
            for n in range(1, max_objects - objects + 1)
            for _, table in GROUP_TABLES
            if arrows + n * n * table.order <= max_arrows
        ]
        if not options or (components and draw(st.booleans())):
            break
        n, table = draw(st.sampled_from(options))
        components.append((n, table))
        objects += n
        arrows += n * n * table.order
    G = groupoid_from_components(components)
    return relabel_groupoid(
        G, draw(permutation_maps(G.objects.size)), draw(permutation_maps(G.arrows.size))
    )


def actions(G, max_carrier=2):
    return st.sampled_from(small_actions(G, max_carrier))


@st.composite
def groupoids_with_action(draw, max_objects=3, max_arrows=8, max_carrier=2):
    G = draw(groupoids(max_objects, max_arrows))
    return G, draw(actions(G, max_carrier))


@st.composite
def functors(draw, max_objects=2, max_arrows=6):
    H = draw(groupoids(max_objects, max_arrows))
    G = draw(groupoids(max_objects, max_arrows))
    # constant functors at a unit always exist, so the list is never empty
    return draw(st.sampled_from(enumerate_functors(H, G)))


@st.composite
def bibundles(draw, max_objects=2, max_arrows=6):
    P = from_functor(draw(functors(max_objects, max_arrows)))
    return relabel_bibundle(P, draw(permutation_maps(P.carrier.size)))
