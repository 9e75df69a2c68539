from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from BibundleApp import finset
from BibundleApp.exceptions import SearchExhausted, ShapeMismatch
from BibundleApp.finset import FinMap, FinSet

from .strategies import permutation_maps


def fmap(dom, cod, table):
    return FinMap(FinSet(dom), FinSet(cod), tuple(table))


class FinMapTests(SimpleTestCase):
    def test_rejects_values_outside_codomain(self):
        with self.assertRaises(ShapeMismatch):
            fmap(2, 2, (0, 2))

    def test_rejects_wrong_length(self):
        with self.assertRaises(ShapeMismatch):
            fmap(3, 2, (0, 1))

    def test_compose_is_f_after_g(self):
        f = fmap(3, 2, (1, 0, 1))
        g = fmap(2, 3, (2, 1))
        self.assertEqual(finset.compose(f, g).table, (1, 0))

    def test_compose_checks_shapes(self):
        with self.assertRaises(ShapeMismatch):
            finset.compose(fmap(2, 2, (0, 1)), fmap(2, 3, (0, 1)))

    def test_fiber_and_image(self):
        f = fmap(4, 3, (2, 0, 2, 0))
        self.assertEqual(f.fiber(2), (0, 2))
        self.assertEqual(f.fiber(1), ())
        self.assertEqual(f.image(), [0, 2])

    def test_injective_surjective(self):
        self.assertTrue(finset.is_surjective(fmap(3, 2, (1, 0, 1))))
        self.assertFalse(finset.is_injective(fmap(3, 2, (1, 0, 1))))
        self.assertTrue(finset.surjective_product(fmap(2, 1, (0, 0)), fmap(2, 2, (1, 0))))
        self.assertFalse(finset.surjective_product(fmap(2, 2, (0, 0)), fmap(2, 2, (1, 0))))

    @given(st.integers(0, 6).flatmap(permutation_maps))
    @settings(max_examples=30, deadline=None)
    def test_inverse_of_permutation(self, perm):
        back = finset.inverse(perm)
        self.assertEqual(finset.compose(back, perm), finset.identity(perm.dom))
        self.assertEqual(finset.compose(perm, back), finset.identity(perm.dom))

    def test_inverse_rejects_non_bijection(self):
        with self.assertRaises(ShapeMismatch):
            finset.inverse(fmap(2, 2, (0, 0)))


class LimitTests(SimpleTestCase):
    def test_pullback_is_lexicographic(self):
        f = fmap(3, 2, (0, 1, 0))
        g = fmap(2, 2, (1, 0))
        pb = finset.pullback(f, g)
        self.assertEqual(pb.pairs(), ((0, 1), (1, 0), (2, 1)))
        self.assertEqual(pb.index(2, 1), 2)
        self.assertIsNone(pb.get(0, 0))

    def test_pullback_needs_common_codomain(self):
        with self.assertRaises(ShapeMismatch):
            finset.pullback(fmap(1, 2, (0,)), fmap(1, 3, (0,)))

    def test_pair_map(self):
        f = fmap(2, 2, (0, 1))
        g = fmap(2, 2, (1, 0))
        pb = finset.pullback(f, g)
        h = fmap(2, 2, (1, 0))
        k = fmap(2, 2, (0, 1))
        self.assertEqual(pb.pair_map(h, k).table, (1, 0))
        with self.assertRaises(ShapeMismatch):
            pb.pair_map(h, h)

    def test_product_and_terminal(self):
        pb = finset.product(FinSet(2), FinSet(3))
        self.assertEqual(pb.apex.size, 6)
        self.assertEqual(pb.pairs()[4], (1, 1))
        self.assertEqual(finset.unique_map(FinSet(3)).cod, finset.terminal())

    def test_coproduct_cases(self):
        co = finset.coproduct(FinSet(2), FinSet(3))
        self.assertEqual(co.total.size, 5)
        self.assertEqual(co.case(1), ('left', 1))
        self.assertEqual(co.case(2), ('right', 0))
        self.assertEqual(co.inr.table, (2, 3, 4))

    def test_equalizer(self):
        f = fmap(3, 2, (0, 1, 1))
        g = fmap(3, 2, (0, 0, 1))
        self.assertEqual(finset.equalizer(f, g).table, (0, 2))

    def test_constant(self):
        self.assertEqual(finset.constant(FinSet(3), FinSet(4), 2).table, (2, 2, 2))


class QuotientTests(SimpleTestCase):
    def test_classes_numbered_by_minimal_member(self):
        q = finset.quotient_by_pairs(FinSet(5), [(3, 1), (4, 0)])
        self.assertEqual(q.proj.table, (0, 1, 2, 1, 0))
        self.assertEqual(q.classes.size, 3)
        self.assertEqual(q.representatives(), (0, 1, 2))
        self.assertEqual(q.members(1), (1, 3))
        self.assertEqual(q.class_sizes(), (2, 2, 1))

    def test_coequalizer(self):
        q = finset.coequalizer(fmap(2, 3, (0, 1)), fmap(2, 3, (1, 2)))
        self.assertEqual(q.classes.size, 1)

    def test_factor_through_quotient(self):
        q = finset.quotient_by_pairs(FinSet(4), [(0, 2)])
        u = q.factor(fmap(4, 2, (1, 0, 1, 0)))
        self.assertEqual(u.table, (1, 0, 0))

    def test_factor_requires_constant_on_classes(self):
        q = finset.quotient_by_pairs(FinSet(3), [(0, 1)])
        with self.assertRaises(ShapeMismatch):
            q.factor(fmap(3, 2, (0, 1, 0)))

    @given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), max_size=8))
    @settings(max_examples=40, deadline=None)
    def test_quotient_identifies_exactly_the_pairs(self, pairs):
        q = finset.quotient_by_pairs(FinSet(7), pairs)
        for x, y in pairs:
            self.assertEqual(q.proj(x), q.proj(y))
        reps = q.representatives()
        self.assertEqual(list(reps), sorted(reps))


class SearchTests(SimpleTestCase):
    def test_all_maps_count(self):
        self.assertEqual(len(list(finset.all_maps(FinSet(2), FinSet(3)))), 9)
        self.assertEqual(len(list(finset.all_maps(FinSet(0), FinSet(0)))), 1)

    def test_search_maps_lexicographic(self):
        tables = list(finset.search_maps(2, 2))
        self.assertEqual(tables, [(0, 0), (0, 1), (1, 0), (1, 1)])

    def test_injective_search(self):
        self.assertEqual(len(list(finset.search_maps(3, 3, injective=True))), 6)

    def test_search_budget(self):
        with self.assertRaises(SearchExhausted):
            list(finset.search_maps(3, 3, limit=2))

    def test_find_bijection_with_candidates(self):
        found = finset.find_bijection_search(
            FinSet(3), FinSet(3), candidates=lambda x: [2 - x]
        )
        self.assertEqual(found.table, (2, 1, 0))
        self.assertIsNone(finset.find_bijection_search(FinSet(2), FinSet(3)))


def maps(dom, cod):
    if not cod:
        return st.just(fmap(dom, cod, ()))
    return st.lists(st.integers(0, cod - 1), min_size=dom, max_size=dom).map(
        lambda table: fmap(dom, cod, table)
    )


sizes = st.integers(1, 4)


class UniversalPropertyTests(SimpleTestCase):
    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_pullback_is_symmetric_over_the_legs(self, data):
        a, b, c = data.draw(sizes), data.draw(sizes), data.draw(sizes)
        f, g = data.draw(maps(a, c)), data.draw(maps(b, c))
        P, Q = finset.pullback(f, g), finset.pullback(g, f)
        swap = Q.pair_map(P.proj2, P.proj1)
        self.assertTrue(finset.is_bijective(swap))
        self.assertEqual(finset.compose(Q.proj1, swap), P.proj2)
        self.assertEqual(finset.compose(Q.proj2, swap), P.proj1)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_factor_is_the_unique_map_through_the_coequalizer(self, data):
        n, m, k = data.draw(sizes), data.draw(sizes), data.draw(sizes)
        f, g = data.draw(maps(n, m)), data.draw(maps(n, m))
        q = finset.coequalizer(f, g)
        u = data.draw(maps(q.classes.size, k))
        h = finset.compose(u, q.proj)
        self.assertEqual(finset.compose(h, f), finset.compose(h, g))
        self.assertEqual(q.factor(h), u)

    @given(st.data())
    @settings(max_examples=40, deadline=None)
    def test_compose_is_associative(self, data):
        a, b, c, d = (data.draw(st.integers(0, 4)) for _ in range(4))
        # maps into an empty set only exist from an empty set
        b, c, d = max(b, a and 1), max(c, b and 1), max(d, c and 1)
        f, g, h = data.draw(maps(a, b)), data.draw(maps(b, c)), data.draw(maps(c, d))
        self.assertEqual(
            finset.compose(finset.compose(h, g), f),
            finset.compose(h, finset.compose(g, f)),
        )
