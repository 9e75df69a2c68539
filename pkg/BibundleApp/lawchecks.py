"""
Randomized and exhaustive law-checking suites behind ``manage.py check_laws``.

Each suite draws its instances from its own ``random.Random`` seeded from the
run seed and the suite name, so suites can be rerun in isolation and the
report is identical across runs. ``LawBounds.cases`` is a base count that
every suite scales by its own weight.
"""
import logging
import random
import zlib
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product as cartesian

from . import finset
from .action import (
    GAction, enumerate_equivariant_maps, frobenius_check, free_action, orbits,
    stable_frobenius_check, trivial_action, validate_action,
)
from .bibundle import (
    bibundle_groupoid, check_points_functor, coapply, compose, find_morphism, from_functor,
    pair, relabel_bibundle, tensor_apply, tensor_transpose, tensor_untranspose,
    validate_bibundle_morphism,
)
from .exceptions import SearchExhausted
from .finset import FinMap, FinSet
from .functor import (
    counit, enumerate_functors, induce, induce_frobenius_check, is_essential_equivalence,
    projection_functors, restrict, transpose, unit, untranspose,
)
from .groupoid import isomorphic_groupoids, make_groupoid, validate_groupoid
from .morita import (
    arrow_legs_map, invert_essential_equivalence, morita_equivalent, morita_oracle,
    reconstruct_internal_groupoid, semidirect_product, skeleton_projection,
    tensor_unit_map, verify_certificate,
)
from .samples import (
    action_family, random_action, random_functor, random_groupoid, random_map,
    random_permutation, relabelled, small_groupoids,
)

logger = logging.getLogger(__name__)

# Functors tried per pair of catalogue groupoids; the rest are counted as skipped.
FUNCTORS_PER_PAIR = 10


@dataclass(frozen=True)
class LawBounds:
    seed: int = 7
    max_objects: int = 3
    max_arrows: int = 8
    cases: int = 100
    max_carrier: int = 3


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, case, ok, detail=''):
        self.cases += 1
        if not ok:
            self.failures.append({'case': case, 'detail': detail})

    def as_dict(self):
        return {
            'name': self.name,
            'cases': self.cases,
            'skipped': self.skipped,
            'failures': list(self.failures),
        }


def _rng(bounds, name):
    return random.Random(bounds.seed * 1000003 + zlib.crc32(name.encode()))


def _scaled(bounds, percent):
    if not bounds.cases:
        return 0
    return max(1, bounds.cases * percent // 100)


def _groupoid(rng, bounds):
    return random_groupoid(rng, bounds.max_objects, bounds.max_arrows)


def _drop_one(rng, table):
    table = list(table)
    del table[rng.randrange(len(table))]
    return table


def _replaced(table, k, entry):
    table = list(table)
    table[k] = entry
    return table


def corrupted_groupoids(rng, G):
    """
    Broken copies of G as (label, groupoid, axiom it must violate). A
    corruption is left out when G is too small to carry it.
    """
    def rebuild(**changes):
        parts = dict(
            src=G.src.table, tgt=G.tgt.table, unit=G.unit.table, inv=G.inv.table,
            mul_table=G.mul_table,
        )
        parts.update(changes)
        return make_groupoid(G.objects.size, G.arrows.size, **parts)

    found = [('dropped product', rebuild(mul_table=_drop_one(rng, G.mul_table)), 'composition-domain')]
    if G.arrows.size > 1:
        g = rng.randrange(G.arrows.size)
        h = rng.choice([a for a in G.arrows if a != G.inv(g)])
        found.append(('swapped inverse', rebuild(inv=_replaced(G.inv.table, g, h)), 'inverse-law'))
        x = rng.randrange(G.objects.size)
        h = rng.choice([a for a in G.arrows if a != G.unit(x)])
        expected = 'unit-law' if G.src(h) == x == G.tgt(h) else 'unit-endpoints'
        found.append(('redirected unit', rebuild(unit=_replaced(G.unit.table, x, h)), expected))
    # a different product with the same endpoints breaks cancellation
    swaps = [
        (k, g)
        for k, (g1, g2, g12) in enumerate(G.mul_table)
        if not G.is_unit(g1) and not G.is_unit(g2) and g2 != G.inv(g1)
        for g in G.hom_set(G.src(g2), G.tgt(g1))
        if g != g12
    ]
    if swaps:
        k, g = rng.choice(swaps)
        g1, g2, _ = G.mul_table[k]
        table = _replaced(G.mul_table, k, (g1, g2, g))
        found.append(('permuted product', rebuild(mul_table=table), 'associativity'))
    return found


def corrupted_actions(rng, A):
    """Broken copies of the action A as (label, action, axiom it must violate)."""
    G = A.groupoid

    def rebuild(anchor=None, act=None):
        anchor = A.anchor if anchor is None else FinMap(A.carrier, G.objects, tuple(anchor))
        return GAction(G, A.carrier, anchor, tuple(A.act_table if act is None else act))

    found = []
    if A.act_table:
        found.append(('dropped value', rebuild(act=_drop_one(rng, A.act_table)), 'action-domain'))
    if A.carrier.size and G.objects.size > 1:
        x = rng.randrange(A.carrier.size)
        y = rng.choice([o for o in G.objects if o != A.anchor(x)])
        anchor = _replaced(A.anchor.table, x, y)
        found.append(('moved anchor', rebuild(anchor=anchor), 'action-domain'))
    misplaced = [
        (k, z)
        for k, (g, x, y) in enumerate(A.act_table)
        for z in A.carrier
        if A.anchor(z) != G.tgt(g)
    ]
    if misplaced:
        k, z = rng.choice(misplaced)
        g, x, _ = A.act_table[k]
        found.append(('misplaced value', rebuild(act=_replaced(A.act_table, k, (g, x, z))), 'anchor'))
    moving = [
        (k, z)
        for k, (g, x, y) in enumerate(A.act_table)
        if g == G.unit(A.anchor(x))
        for z in A.anchor.fiber(A.anchor(x))
        if z != x
    ]
    if moving:
        k, z = rng.choice(moving)
        g, x, _ = A.act_table[k]
        found.append(('moving identity', rebuild(act=_replaced(A.act_table, k, (g, x, z))), 'unit'))
    return found


def check_axioms(bounds):
    result = SuiteResult('axioms')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 500)):
        G = _groupoid(rng, bounds)
        A = random_action(rng, G, bounds.max_carrier)
        result.record(case, validate_groupoid(G).is_valid, 'random groupoid rejected')
        result.record(case, validate_action(A).is_valid, 'random action rejected')
        for label, broken, expected in corrupted_groupoids(rng, G):
            axioms = validate_groupoid(broken).axioms
            result.record(case, expected in axioms, f'{label} gave {axioms}, expected {expected}')
        for label, broken, expected in corrupted_actions(rng, A):
            axioms = validate_action(broken).axioms
            result.record(case, expected in axioms, f'{label} gave {axioms}, expected {expected}')
    return result


def check_components(bounds):
    """orbits(T_G X_f) has exactly |X| classes."""
    result = SuiteResult('components')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 200)):
        G = _groupoid(rng, bounds)
        X = FinSet(rng.randrange(bounds.max_carrier + 2))
        free = free_action(G, random_map(rng, X, G.objects))
        result.record(case, orbits(free).classes.size == X.size)
    return result


def check_frobenius(bounds):
    result = SuiteResult('frobenius')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 300)):
        G = _groupoid(rng, bounds)
        W = random_action(rng, G, bounds.max_carrier)
        X = FinSet(1 + rng.randrange(3))
        result.record(case, frobenius_check(W, X).holds, 'Frobenius comparison')
        g = rng.choice(enumerate_equivariant_maps(W, trivial_action(G, X)))
        Y = FinSet(rng.randrange(4))
        f = random_map(rng, Y, X)
        result.record(case, stable_frobenius_check(W, g, f).holds, 'stable Frobenius comparison')
    return result


def _random_functor_instance(rng, bounds):
    for _ in range(20):
        H, G = _groupoid(rng, bounds), _groupoid(rng, bounds)
        F = random_functor(rng, H, G)
        if F is not None:
            return F
    return None


def check_restriction_adjunction(bounds):
    """induce(F, -) is left adjoint to restrict(F, -) through explicit transposes."""
    result = SuiteResult('restriction-adjunction')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 100)):
        F = _random_functor_instance(rng, bounds)
        if F is None:
            result.skipped += 1
            continue
        Y = random_action(rng, F.dom, bounds.max_carrier)
        A = random_action(rng, F.cod, bounds.max_carrier)
        left = enumerate_equivariant_maps(induce(F, Y), A)
        right = enumerate_equivariant_maps(Y, restrict(F, A))
        result.record(case, len(left) == len(right), f'{len(left)} vs {len(right)} maps')
        result.record(case, all(untranspose(F, Y, A, transpose(F, Y, A, m)) == m for m in left),
                      'transpose then untranspose is not the identity')
        result.record(case, all(transpose(F, Y, A, untranspose(F, Y, A, m)) == m for m in right),
                      'untranspose then transpose is not the identity')
        result.record(case, induce_frobenius_check(F, Y, A).holds, 'induction Frobenius comparison')
    return result


def _is_iso(h):
    return finset.is_bijective(h.map)


def check_essential_equivalences(bounds):
    """
    F is an essential equivalence iff every unit and counit over a family of
    actions (the free action at each object, the terminal one, then every
    action with carrier up to ``max_carrier``) is an isomorphism.

    Functors run between every groupoid of the catalogue within the bounds.
    When there are more ordered pairs than the scaled case count, that many
    pairs are drawn instead.
    """
    result = SuiteResult('essential-equivalence')
    rng = _rng(bounds, result.name)
    catalogue = small_groupoids(bounds.max_objects, bounds.max_arrows)
    pairs = list(cartesian(catalogue, repeat=2))
    budget = _scaled(bounds, 100)
    if len(pairs) > budget:
        pairs = [pairs[k] for k in sorted(rng.sample(range(len(pairs)), budget))]
    case = 0
    for H, G in pairs:
        functors = enumerate_functors(H, G)
        if len(functors) > FUNCTORS_PER_PAIR:
            result.skipped += len(functors) - FUNCTORS_PER_PAIR
            functors = rng.sample(functors, FUNCTORS_PER_PAIR)
        for F in functors:
            units = all(_is_iso(unit(F, Y)) for Y in action_family(H, bounds.max_carrier))
            counits = all(_is_iso(counit(F, A)) for A in action_family(G, bounds.max_carrier))
            result.record(case, is_essential_equivalence(F) == (units and counits),
                          f'predicate disagrees with unit/counit on {F!r}')
            case += 1
    return result


def _random_bibundle(rng, bounds):
    F = _random_functor_instance(rng, bounds)
    return None if F is None else from_functor(F)


def check_bibundle_morphisms(bounds):
    """Every morphism of bibundles found is a bijection."""
    result = SuiteResult('morphisms-bijective')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 200)):
        P = _random_bibundle(rng, bounds)
        if P is None:
            result.skipped += 1
            continue
        Q = relabel_bibundle(P, random_permutation(rng, P.carrier.size))
        theta = find_morphism(P, Q)
        result.record(case, theta is not None and finset.is_bijective(theta.map),
                      'relabelled copy not recovered')
        if theta is not None:
            result.record(case, validate_bibundle_morphism(theta).is_valid,
                          'recovered map is not a morphism')
    return result


def check_localization(bounds):
    result = SuiteResult('localization')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 50)):
        G = _groupoid(rng, bounds)
        certificate = invert_essential_equivalence(skeleton_projection(G))
        result.record(case, verify_certificate(certificate), 'certificate did not verify')
    return result


def check_tensor_adjunction(bounds):
    result = SuiteResult('tensor-adjunction')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 100)):
        P = _random_bibundle(rng, bounds)
        if P is None:
            result.skipped += 1
            continue
        Y = random_action(rng, P.left, bounds.max_carrier)
        X = random_action(rng, P.right, bounds.max_carrier)
        left = enumerate_equivariant_maps(tensor_apply(P, Y), X)
        right = enumerate_equivariant_maps(Y, coapply(P, X))
        result.record(case, len(left) == len(right), f'{len(left)} vs {len(right)} maps')
        result.record(
            case,
            all(tensor_untranspose(P, Y, X, tensor_transpose(P, Y, X, m)) == m for m in left),
            'tensor transposes are not mutually inverse',
        )
    return result


def check_morita_oracle(bounds):
    """The invariant-based decision agrees with the brute-force oracle."""
    result = SuiteResult('morita-oracle')
    catalogue = small_groupoids(
        max_objects=min(bounds.max_objects, 2), max_arrows=min(bounds.max_arrows, 6)
    )
    for case, (H, G) in enumerate(combinations_with_replacement(catalogue, 2)):
        decided = morita_equivalent(H, G).equivalent
        try:
            brute = morita_oracle(H, G) is not None
        except SearchExhausted:
            result.skipped += 1
            continue
        result.record(case, decided == brute, f'decision {decided}, oracle {brute}')
    return result


def check_semidirect(bounds):
    """The semidirect product of the reconstructed internal groupoid is the groupoid of P."""
    result = SuiteResult('semidirect')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 50)):
        P = _random_bibundle(rng, bounds)
        if P is None or P.carrier.size > 6:
            result.skipped += 1
            continue
        K = reconstruct_internal_groupoid(P)
        result.record(case, isomorphic_groupoids(semidirect_product(K), bibundle_groupoid(P)),
                      'semidirect product and bibundle groupoid differ')
        result.record(case, _is_iso(tensor_unit_map(P)), 'objects of K are not the carrier of P')
        result.record(case, finset.is_bijective(arrow_legs_map(P)), 'arrows of K are not H1 x P')
    return result


def check_pseudo_product(bounds):
    result = SuiteResult('pseudo-product')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 50)):
        K = _groupoid(rng, bounds)
        H, G = relabelled(rng, K), relabelled(rng, K)
        F1, F2 = random_functor(rng, K, H), random_functor(rng, K, G)
        P1, P2 = from_functor(F1), from_functor(F2)
        first, second = projection_functors(H, G)
        paired = pair(P1, P2)
        result.record(case, find_morphism(compose(paired, from_functor(first)), P1) is not None,
                      'first projection law')
        result.record(case, find_morphism(compose(paired, from_functor(second)), P2) is not None,
                      'second projection law')
    return result


def check_points(bounds):
    result = SuiteResult('points')
    rng = _rng(bounds, result.name)
    for case in range(_scaled(bounds, 20)):
        G = _groupoid(rng, bounds)
        I = FinSet(1 + rng.randrange(2))
        check = check_points_functor(G, I)
        result.record(case, check.faithful and check.full, f'faithful={check.faithful} full={check.full}')
    return result


SUITES = (
    check_axioms,
    check_components,
    check_frobenius,
    check_restriction_adjunction,
    check_essential_equivalences,
    check_bibundle_morphisms,
    check_localization,
    check_tensor_adjunction,
    check_morita_oracle,
    check_semidirect,
    check_pseudo_product,
    check_points,
)


def run_suites(bounds):
    results = []
    for suite in SUITES:
        result = suite(bounds)
        logger.debug('suite %s: %d cases, %d failures', result.name, result.cases, len(result.failures))
        results.append(result)
    return results
