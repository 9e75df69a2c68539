from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from BibundleApp import finset
from BibundleApp.action import (
    GAction, action_groupoid, enumerate_actions, enumerate_equivariant_maps,
    find_equivariant_isomorphism, free_action, free_map, free_multiplication, free_unit,
    frobenius_check, iter_equivariant_maps, make_action, maps_over, orbits,
    pullback_action, relabel_action, stable_frobenius_check, terminal_action,
    transpose_free, trivial_action, trivial_map, untranspose_free, validate_action,
    validate_equivariant_map,
)
from BibundleApp.exceptions import ShapeMismatch
from BibundleApp.finset import FinMap, FinSet
from BibundleApp.groupoid import (
    cyclic_group_table, group_groupoid, pair_groupoid, trivial_groupoid, validate_groupoid,
)
from BibundleApp.samples import small_actions

from .strategies import groupoids, groupoids_with_action, permutation_maps


def swap_action():
    """Z/2 acting on {0, 1} by exchanging the two points."""
    Z2 = group_groupoid(cyclic_group_table(2))
    return make_action(Z2, 2, [0, 0], [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)])


class ValidationTests(SimpleTestCase):
    def test_trivial_actions(self):
        G = pair_groupoid(FinSet(2))
        for n in (0, 1, 3):
            self.assertTrue(validate_action(trivial_action(G, FinSet(n))).is_valid)
        A = trivial_action(trivial_groupoid(FinSet(2)), FinSet(3))
        self.assertEqual(A.carrier.size, 6)
        self.assertEqual(orbits(A).classes.size, 6)

    def test_terminal_action(self):
        G = pair_groupoid(FinSet(2))
        T = terminal_action(G)
        self.assertEqual(T.carrier.size, 2)
        self.assertTrue(validate_action(T).is_valid)

    def test_corrupted_entry_breaks_associativity(self):
        A = swap_action()
        table = [t for t in A.act_table if t != (1, 0, 1)] + [(1, 0, 0)]
        broken = GAction(A.groupoid, A.carrier, A.anchor, tuple(table))
        self.assertIn('associativity', validate_action(broken).axioms)

    def test_missing_entry_is_flagged(self):
        A = swap_action()
        broken = GAction(A.groupoid, A.carrier, A.anchor, A.act_table[1:])
        report = validate_action(broken)
        self.assertEqual(report.axioms, ('action-domain',))

    def test_apply_rejects_illegal_pairs(self):
        A = free_action(pair_groupoid(FinSet(2)), FinMap(FinSet(1), FinSet(2), (0,)))
        self.assertEqual(A.carrier.size, 2)
        with self.assertRaises(ShapeMismatch):
            A.apply(1, 0)


class FreeActionTests(SimpleTestCase):
    @given(groupoids())
    @settings(max_examples=20, deadline=None)
    def test_free_action_on_objects(self, G):
        A = free_action(G, finset.identity(G.objects))
        self.assertTrue(validate_action(A).is_valid)
        self.assertEqual(A.carrier.size, G.arrows.size)
        self.assertEqual(orbits(A).classes.size, G.objects.size)

    def test_free_action_over_trivial_groupoid(self):
        f = FinMap(FinSet(3), FinSet(2), (1, 0, 1))
        A = free_action(trivial_groupoid(FinSet(2)), f)
        self.assertEqual(A.anchor.table, (0, 1, 1))

    def test_free_anchor_must_land_in_objects(self):
        with self.assertRaises(ShapeMismatch):
            free_action(pair_groupoid(FinSet(2)), FinMap(FinSet(1), FinSet(3), (2,)))

    @given(groupoids_with_action(max_carrier=2))
    @settings(max_examples=20, deadline=None)
    def test_free_transposes_are_inverse(self, case):
        G, A = case
        f = A.anchor
        for psi in maps_over(f, A):
            extended = untranspose_free(G, f, A, psi)
            self.assertTrue(validate_equivariant_map(extended).is_valid)
            self.assertEqual(transpose_free(G, f, A, extended), psi)
        free = free_action(G, f)
        for phi in iter_equivariant_maps(free, A):
            self.assertEqual(untranspose_free(G, f, A, transpose_free(G, f, A, phi)), phi)

    @given(groupoids(max_objects=2, max_arrows=6))
    @settings(max_examples=15, deadline=None)
    def test_monad_structure_maps(self, G):
        f = finset.identity(G.objects)
        mu = free_multiplication(G, f)
        self.assertTrue(validate_equivariant_map(mu).is_valid)
        eta = free_unit(G, f)
        # mu after T(eta) is the identity on T X
        T_eta = free_map(G, eta, f, free_action(G, f).anchor)
        self.assertEqual(finset.compose(mu.map, T_eta.map), finset.identity(mu.cod.carrier))


class OrbitTests(SimpleTestCase):
    def test_swap_has_one_orbit(self):
        self.assertEqual(orbits(swap_action()).classes.size, 1)

    def test_trivial_action_orbits_count_components(self):
        G = pair_groupoid(FinSet(3))
        A = trivial_action(G, FinSet(2))
        self.assertEqual(orbits(A).classes.size, 2)

    def test_action_groupoid_of_set(self):
        X = trivial_action(trivial_groupoid(FinSet(1)), FinSet(3))
        self.assertEqual(action_groupoid(X), trivial_groupoid(FinSet(3)))

    @given(groupoids_with_action())
    @settings(max_examples=20, deadline=None)
    def test_action_groupoid_is_valid(self, case):
        G, A = case
        AG = action_groupoid(A)
        self.assertEqual(AG.objects, A.carrier)
        self.assertTrue(validate_groupoid(AG).is_valid)


class EquivariantMapTests(SimpleTestCase):
    def test_enumerate_actions_of_the_point(self):
        actions = enumerate_actions(trivial_groupoid(FinSet(1)), 2)
        self.assertEqual([A.carrier.size for A in actions], [0, 1, 2])

    def test_enumerate_actions_of_z2(self):
        actions = enumerate_actions(group_groupoid(cyclic_group_table(2)), 2)
        # empty, one point, two fixed points, the swap
        self.assertEqual(len(actions), 4)
        self.assertIn(swap_action(), actions)

    @given(groupoids_with_action(), st.data())
    @settings(max_examples=20, deadline=None)
    def test_relabelled_actions_are_isomorphic(self, case, data):
        G, A = case
        perm = data.draw(permutation_maps(A.carrier.size))
        B = relabel_action(A, perm)
        self.assertTrue(validate_action(B).is_valid)
        h = find_equivariant_isomorphism(A, B)
        self.assertIsNotNone(h)
        self.assertTrue(validate_equivariant_map(h).is_valid)

    @given(groupoids(max_objects=2, max_arrows=6), st.data())
    @settings(max_examples=20, deadline=None)
    def test_enumerated_maps_are_equivariant(self, G, data):
        A = data.draw(st.sampled_from(small_actions(G, 2)))
        B = data.draw(st.sampled_from(small_actions(G, 2)))
        maps = enumerate_equivariant_maps(A, B)
        self.assertEqual(len({h.map for h in maps}), len(maps))
        for h in maps:
            self.assertTrue(validate_equivariant_map(h).is_valid)

    def test_maps_need_a_common_groupoid(self):
        A = terminal_action(pair_groupoid(FinSet(2)))
        B = terminal_action(trivial_groupoid(FinSet(2)))
        with self.assertRaises(ShapeMismatch):
            list(iter_equivariant_maps(A, B))


class FrobeniusTests(SimpleTestCase):
    @given(groupoids_with_action(), st.integers(0, 3))
    @settings(max_examples=20, deadline=None)
    def test_frobenius_comparison_is_bijective(self, case, n):
        G, W = case
        self.assertTrue(frobenius_check(W, FinSet(n)).holds)

    @given(groupoids_with_action(), st.integers(1, 3), st.data())
    @settings(max_examples=20, deadline=None)
    def test_stable_frobenius(self, case, n, data):
        G, W = case
        X = FinSet(n)
        maps = enumerate_equivariant_maps(W, trivial_action(G, X))
        g = data.draw(st.sampled_from(maps))
        Y = FinSet(data.draw(st.integers(0, 3)))
        f = FinMap(Y, X, tuple(data.draw(st.integers(0, n - 1)) for _ in Y))
        self.assertTrue(stable_frobenius_check(W, g, f).holds)

    def test_trivial_map_and_pullback(self):
        G = pair_groupoid(FinSet(2))
        f = FinMap(FinSet(2), FinSet(1), (0, 0))
        h = trivial_map(G, f)
        self.assertTrue(validate_equivariant_map(h).is_valid)
        P = pullback_action(h, h)
        self.assertEqual(P.carrier.size, 8)
        self.assertTrue(validate_action(P).is_valid)
