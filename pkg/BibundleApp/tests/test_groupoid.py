from itertools import combinations

from django.test import SimpleTestCase
from hypothesis import given, settings

from BibundleApp.exceptions import GroupoidLawError, ShapeMismatch
from BibundleApp.finset import FinMap, FinSet
from BibundleApp.groupoid import (
    check_group_table, cyclic_group_table, dihedral_group_table, direct_product_table,
    disjoint_union_groupoid, find_group_isomorphism, find_groupoid_isomorphism, group_generators,
    group_groupoid, isomorphic_groupoids, isotropy_group,
    klein_group_table, make_groupoid, object_components, opposite_groupoid, pair_groupoid,
    product_arrow_index, product_groupoid, product_object_index, relabel_groupoid,
    quaternion_group_table, symmetric_group_table, trivial_groupoid, validate_groupoid,
)
from BibundleApp.samples import connected_groupoid

from .strategies import groupoids, permutation_maps

# a loop of order 5: identity 0, every element self-inverse, not associative
NON_ASSOCIATIVE = (
    (0, 1, 2, 3, 4),
    (1, 0, 3, 4, 2),
    (2, 4, 0, 1, 3),
    (3, 2, 4, 0, 1),
    (4, 3, 1, 2, 0),
)


def rebuild(G, **changes):
    fields = dict(
        src=G.src.table, tgt=G.tgt.table, unit=G.unit.table, inv=G.inv.table,
        mul_table=G.mul_table,
    )
    fields.update(changes)
    return make_groupoid(G.objects.size, G.arrows.size, **fields)


class ConstructorTests(SimpleTestCase):
    def test_trivial_groupoids_are_valid(self):
        for n in (0, 1, 3):
            G = trivial_groupoid(FinSet(n))
            self.assertTrue(validate_groupoid(G).is_valid)
            self.assertEqual(G.arrows.size, n)

    def test_pair_groupoid(self):
        G = pair_groupoid(FinSet(3))
        self.assertTrue(validate_groupoid(G).is_valid)
        self.assertEqual(G.arrows.size, 9)
        two = pair_groupoid(FinSet(2))
        for x in two.objects:
            for y in two.objects:
                self.assertEqual(len(two.hom_set(x, y)), 1)

    def test_pair_groupoid_of_one_is_trivial(self):
        self.assertEqual(pair_groupoid(FinSet(1)), trivial_groupoid(FinSet(1)))

    def test_identity_inverse_is_flagged(self):
        G = pair_groupoid(FinSet(3))
        broken = rebuild(G, inv=tuple(range(G.arrows.size)))
        self.assertIn('inverse-law', validate_groupoid(broken).axioms)

    def test_missing_product_is_flagged(self):
        G = group_groupoid(cyclic_group_table(3))
        broken = rebuild(G, mul_table=G.mul_table[1:])
        report = validate_groupoid(broken)
        self.assertEqual(report.axioms, ('composition-domain',))
        self.assertEqual(report.first('composition-domain').witness, G.mul_table[0][:2])

    def test_bad_unit_is_flagged(self):
        G = pair_groupoid(FinSet(2))
        broken = rebuild(G, unit=(1, 3))
        self.assertIn('unit-endpoints', validate_groupoid(broken).axioms)

    def test_group_groupoid(self):
        G = group_groupoid(cyclic_group_table(2))
        self.assertEqual((G.objects.size, G.arrows.size), (1, 2))
        self.assertTrue(validate_groupoid(G).is_valid)
        self.assertEqual(group_groupoid(cyclic_group_table(1)), trivial_groupoid(FinSet(1)))

    def test_non_group_tables_are_rejected(self):
        self.assertEqual(check_group_table(NON_ASSOCIATIVE), 'associativity')
        with self.assertRaises(GroupoidLawError) as ctx:
            group_groupoid(NON_ASSOCIATIVE)
        self.assertEqual(ctx.exception.axiom, 'associativity')
        self.assertEqual(check_group_table(((0, 0), (0, 0))), 'identity')

    def test_symmetric_group(self):
        table = symmetric_group_table(3)
        self.assertEqual(table.order, 6)
        self.assertIsNone(check_group_table(table.table))
        self.assertNotEqual(table.mul(1, 2), table.mul(2, 1))

    def test_product_indexing(self):
        H, G = pair_groupoid(FinSet(2)), group_groupoid(cyclic_group_table(2))
        HG = product_groupoid(H, G)
        self.assertTrue(validate_groupoid(HG).is_valid)
        self.assertEqual((HG.objects.size, HG.arrows.size), (2, 8))
        for h in H.arrows:
            for g in G.arrows:
                k = product_arrow_index(G, h, g)
                self.assertEqual(HG.src(k), product_object_index(G, H.src(h), G.src(g)))
                self.assertEqual(HG.tgt(k), product_object_index(G, H.tgt(h), G.tgt(g)))

    def test_opposite_and_union(self):
        G = connected_groupoid(2, cyclic_group_table(3))
        self.assertTrue(validate_groupoid(opposite_groupoid(G)).is_valid)
        U = disjoint_union_groupoid(G, trivial_groupoid(FinSet(2)))
        self.assertTrue(validate_groupoid(U).is_valid)
        self.assertEqual(object_components(U).classes.size, 3)

    def test_isotropy(self):
        G = connected_groupoid(2, cyclic_group_table(3))
        for x in G.objects:
            self.assertEqual(isotropy_group(G, x).order, 3)


class IsomorphismTests(SimpleTestCase):
    def test_group_isomorphism(self):
        Z4, V4 = cyclic_group_table(4), klein_group_table()
        self.assertIsNone(find_group_isomorphism(Z4, V4))
        iso = find_group_isomorphism(Z4, Z4)
        self.assertEqual(sorted(iso), [0, 1, 2, 3])

    def test_groupoid_isomorphism_distinguishes(self):
        Z4 = group_groupoid(cyclic_group_table(4))
        V4 = group_groupoid(klein_group_table())
        self.assertFalse(isomorphic_groupoids(Z4, V4))
        self.assertFalse(isomorphic_groupoids(
            trivial_groupoid(FinSet(2)), pair_groupoid(FinSet(2))
        ))

    @given(groupoids())
    @settings(max_examples=25, deadline=None)
    def test_random_groupoids_are_valid(self, G):
        self.assertTrue(validate_groupoid(G).is_valid)

    @given(groupoids().flatmap(
        lambda G: permutation_maps(G.objects.size).flatmap(
            lambda p: permutation_maps(G.arrows.size).map(lambda q: (G, p, q))
        )
    ))
    @settings(max_examples=25, deadline=None)
    def test_relabelling_gives_an_isomorphic_groupoid(self, case):
        G, objects, arrows = case
        relabelled = relabel_groupoid(G, objects, arrows)
        self.assertTrue(validate_groupoid(relabelled).is_valid)
        iso = find_groupoid_isomorphism(G, relabelled)
        self.assertIsNotNone(iso)
        for g in G.arrows:
            self.assertEqual(relabelled.src(iso.arrows(g)), iso.objects(G.src(g)))

    def test_relabelling_needs_bijections(self):
        G = trivial_groupoid(FinSet(2))
        bad = FinMap(FinSet(2), FinSet(2), (0, 0))
        with self.assertRaises(ShapeMismatch):
            relabel_groupoid(G, bad, bad)


def assert_is_isomorphism(test, G, H, iso):
    test.assertIsNotNone(iso)
    test.assertEqual(sorted(iso.objects.table), list(H.objects))
    test.assertEqual(sorted(iso.arrows.table), list(H.arrows))
    for g in G.arrows:
        test.assertEqual(H.src(iso.arrows(g)), iso.objects(G.src(g)))
        test.assertEqual(H.tgt(iso.arrows(g)), iso.objects(G.tgt(g)))
    for g1, g2, g in G.mul_table:
        test.assertEqual(H.mul[(iso.arrows(g1), iso.arrows(g2))], iso.arrows(g))


def reversed_map(n):
    return FinMap(FinSet(n), FinSet(n), tuple(reversed(range(n))))


ORDER_EIGHT = (
    cyclic_group_table(8),
    direct_product_table(cyclic_group_table(2), cyclic_group_table(4)),
    direct_product_table(klein_group_table(), cyclic_group_table(2)),
    dihedral_group_table(4),
    quaternion_group_table(),
)


class GroupTableTests(SimpleTestCase):
    def test_order_eight_tables_are_groups(self):
        for table in ORDER_EIGHT:
            self.assertEqual(table.order, 8)
            self.assertIsNone(check_group_table(table.table))

    def test_order_eight_tables_are_pairwise_distinct(self):
        for A, B in combinations(ORDER_EIGHT, 2):
            self.assertIsNone(find_group_isomorphism(A, B))
        for A in ORDER_EIGHT:
            self.assertEqual(sorted(find_group_isomorphism(A, A)), list(range(8)))

    def test_dihedral_and_quaternion_are_not_abelian(self):
        for table in (dihedral_group_table(4), quaternion_group_table()):
            self.assertTrue(any(
                table.mul(a, b) != table.mul(b, a) for a, b in combinations(range(8), 2)
            ))

    def test_generators_span_the_group(self):
        for table in ORDER_EIGHT + (symmetric_group_table(3), klein_group_table()):
            gens = group_generators(table)
            seen, frontier = {table.identity}, [table.identity]
            while frontier:
                u = frontier.pop()
                for g in gens:
                    if table.mul(u, g) not in seen:
                        seen.add(table.mul(u, g))
                        frontier.append(table.mul(u, g))
            self.assertEqual(len(seen), table.order)
        self.assertEqual(group_generators(cyclic_group_table(1)), ())

    def test_isomorphism_of_nonabelian_groups_is_multiplicative(self):
        A = symmetric_group_table(3)
        B = isotropy_group(
            relabel_groupoid(group_groupoid(A), reversed_map(1), reversed_map(6)), 0
        )
        iso = find_group_isomorphism(A, B)
        for a, b in combinations(range(6), 2):
            self.assertEqual(iso[A.mul(a, b)], B.mul(iso[a], iso[b]))


class StructuralIsomorphismTests(SimpleTestCase):
    def test_large_connected_groupoid(self):
        G = connected_groupoid(3, quaternion_group_table())
        H = relabel_groupoid(G, reversed_map(3), reversed_map(G.arrows.size))
        assert_is_isomorphism(self, G, H, find_groupoid_isomorphism(G, H))

    def test_components_are_matched_by_isotropy(self):
        Z4 = group_groupoid(cyclic_group_table(4))
        V4 = group_groupoid(klein_group_table())
        G = disjoint_union_groupoid(Z4, V4)
        H = disjoint_union_groupoid(V4, Z4)
        iso = find_groupoid_isomorphism(G, H)
        assert_is_isomorphism(self, G, H, iso)
        self.assertEqual(iso.objects.table, (1, 0))

    def test_same_counts_different_groups(self):
        D4 = connected_groupoid(2, dihedral_group_table(4))
        Q8 = connected_groupoid(2, quaternion_group_table())
        self.assertFalse(isomorphic_groupoids(D4, Q8))

    @given(groupoids().flatmap(
        lambda G: permutation_maps(G.objects.size).flatmap(
            lambda p: permutation_maps(G.arrows.size).map(lambda q: (G, relabel_groupoid(G, p, q)))
        )
    ))
    @settings(max_examples=25, deadline=None)
    def test_found_maps_are_isomorphisms(self, case):
        G, H = case
        assert_is_isomorphism(self, G, H, find_groupoid_isomorphism(G, H))


class StructureLawTests(SimpleTestCase):
    @given(groupoids())
    @settings(max_examples=30, deadline=None)
    def test_opposite_twice_is_the_original(self, G):
        twice = opposite_groupoid(opposite_groupoid(G))
        self.assertEqual(twice, G)
        self.assertEqual(twice.src.table, G.src.table)
        self.assertEqual(twice.tgt.table, G.tgt.table)
        self.assertEqual(twice.mul_table, G.mul_table)

    @given(groupoids())
    @settings(max_examples=30, deadline=None)
    def test_isotropy_groups_agree_within_a_component(self, G):
        components = object_components(G)
        for x, y in combinations(G.objects, 2):
            if components.proj(x) == components.proj(y):
                self.assertIsNotNone(
                    find_group_isomorphism(isotropy_group(G, x), isotropy_group(G, y))
                )
