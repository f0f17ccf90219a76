import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from groupoidify import config
from groupoidify.degroupoidify import matrix, vector
from groupoidify.errors import BoundaryError, ResourceLimitError
from groupoidify.groupoid import (
    Functor,
    NaturalIso,
    cardinality,
    check_equivalence,
    codiscrete,
    discrete,
    materialize,
    one_object,
    terminal,
    validate_functor,
    validate_groupoid,
)
from groupoidify.groups import SymmetricGroup, cyclic_group
from groupoidify.randomized import random_groupoid, random_over, random_span
from groupoidify.span import (
    Cospan,
    Span,
    SpanEquivalence,
    adjoint,
    apply_span,
    associator,
    bloat_span,
    check_span_equivalence,
    check_span_map,
    compose,
    essential_preimage,
    identity_span,
    identity_span_map,
    inner_product_groupoid,
    point_over,
    skeleton_span,
    tautological_over,
    weak_pullback,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def small(rng):
    return random_groupoid(rng, max_objects=4, max_morphisms=12, max_classes=2)


def point_into(G):
    """The functor 1 -> G picking object 0."""
    one = terminal()
    return Functor(one, G, [0], [G.identity(0)])


def test_weak_pullback_of_two_points_into_one_object_group():
    # 1 -> 1//G <- 1: objects are the elements of G, no non-identity arrows
    for g in (cyclic_group(3), SymmetricGroup(3)):
        B = one_object(g)
        P, pi1, pi2 = weak_pullback(Cospan(point_into(B), point_into(B)))
        assert P.num_objects == g.order
        assert cardinality(P) == g.order
        assert validate_groupoid(materialize(P)).ok
        assert validate_functor(pi1).ok and validate_functor(pi2).ok


def test_weak_pullback_over_terminal_is_product():
    G, H = one_object(cyclic_group(2)), codiscrete(3)
    one = terminal()
    f = Functor(G, one, [0] * G.num_objects, [0] * G.num_morphisms())
    g = Functor(H, one, [0] * H.num_objects, [0] * H.num_morphisms())
    P, _, _ = weak_pullback(Cospan(f, g))
    assert cardinality(P) == cardinality(G) * cardinality(H)


@given(seeds)
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_weak_pullback_is_a_groupoid_with_functorial_projections(seed):
    rng = random.Random(seed)
    X, Y, Z = (small(rng) for _ in range(3))
    S = random_span(rng, X, Y, max_classes=2)
    T = random_span(rng, Y, Z, max_classes=2)
    P, pi1, pi2 = weak_pullback(Cospan(S.left, T.right))
    # the associativity check is cubic; keep instances small
    assume(P.num_morphisms() <= 300)
    assert validate_groupoid(materialize(P)).ok
    assert validate_functor(pi1).ok and validate_functor(pi2).ok


def test_pullback_cap_raises_resource_limit():
    B = one_object(SymmetricGroup(4))
    c = Cospan(point_into(B), point_into(B))
    with pytest.raises(ResourceLimitError):
        weak_pullback(c, cap=5)
    config.set_pullback_cap(5)
    try:
        with pytest.raises(ResourceLimitError):
            weak_pullback(c)
    finally:
        config.set_pullback_cap(None)
    assert weak_pullback(c)[0].num_objects == 24


def test_composing_mismatched_spans_raises():
    rng = random.Random(1)
    S, T = random_span(rng), random_span(rng)
    with pytest.raises(BoundaryError):
        compose(T, S)


def test_essential_preimage_collects_isomorphic_fibers():
    X = codiscrete(3)
    v = tautological_over(X)
    assert essential_preimage(v, 1).num_objects == 3


def test_point_over_has_trivial_automorphisms():
    X = one_object(SymmetricGroup(3))
    v = point_over(X, 0)
    assert cardinality(v.total) == 1
    assert vector(v).entries == [Fraction(1)]


def test_inner_product_groupoid_of_points_over_a_group():
    X = one_object(cyclic_group(4))
    v = point_over(X, 0)
    assert cardinality(inner_product_groupoid(v, v)) == 4


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_identity_span_is_a_unit_for_composition(seed):
    rng = random.Random(seed)
    S = random_span(rng)
    assert matrix(compose(identity_span(S.codomain), S)) == matrix(S)
    assert matrix(compose(S, identity_span(S.domain))) == matrix(S)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_adjoint_matrix_is_weighted_transpose(seed):
    rng = random.Random(seed)
    S = random_span(rng)
    M, Mt = matrix(S), matrix(adjoint(S))
    X, Y = S.domain, S.codomain
    for i, y in enumerate(M.rows):
        for j, x in enumerate(M.cols):
            assert Mt[j, i] == M[i, j] * Fraction(Y.aut_order(y), X.aut_order(x))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_applying_a_composite_is_applying_twice(seed):
    rng = random.Random(seed)
    S = random_span(rng, max_classes=3)
    T = random_span(rng, X=S.codomain, max_classes=3)
    v = random_over(rng, S.domain, max_classes=3)
    assert vector(apply_span(compose(T, S), v)) == vector(apply_span(T, apply_span(S, v)))


def test_identity_span_map_is_valid():
    S = random_span(random.Random(2))
    assert check_span_map(identity_span_map(S)).ok


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_skeleton_span_is_witnessed_equivalent(seed):
    S = random_span(random.Random(seed))
    small, eq = skeleton_span(S)
    assert small.apex.num_objects == len(S.apex.classes)
    assert check_span_equivalence(eq).ok
    assert matrix(small) == matrix(S)


@given(seeds, st.integers(min_value=2, max_value=3))
@settings(max_examples=25, deadline=None)
def test_bloated_span_is_witnessed_equivalent(seed, copies):
    S = random_span(random.Random(seed), max_classes=3)
    big, eq = bloat_span(S, copies)
    assert big.apex.num_objects == copies * S.apex.num_objects
    assert check_equivalence(eq.forward.functor).equivalence
    assert check_span_equivalence(eq).ok
    assert matrix(big) == matrix(S)


def test_tampered_equivalence_is_rejected():
    S = random_span(random.Random(7), max_classes=2)
    assert S.apex.num_objects > 0
    big, eq = bloat_span(S, 2)
    apex = big.apex
    # identities are wrong components on the second copy, where GF(o) != o
    bad_unit = NaturalIso(eq.unit.from_, eq.unit.to, apex.identity)
    report = check_span_equivalence(SpanEquivalence(eq.forward, eq.backward, bad_unit))
    assert not report.ok


def test_associator_on_small_spans():
    rng = random.Random(8)
    for _ in range(3):
        W = [random_groupoid(rng, max_objects=3, max_morphisms=8, max_classes=2)
             for _ in range(4)]
        R = random_span(rng, W[0], W[1], max_classes=2)
        S = random_span(rng, W[1], W[2], max_classes=2)
        T = random_span(rng, W[2], W[3], max_classes=2)
        eq = associator(T, S, R)
        assert check_span_equivalence(eq).ok
        assert matrix(compose(T, compose(S, R))) == matrix(compose(compose(T, S), R))


def test_span_rejects_legs_from_another_apex():
    A, B = discrete(1), discrete(1)
    X = discrete(1)
    with pytest.raises(BoundaryError):
        Span(A, Functor(A, X, [0], [0]), Functor(B, X, [0], [0]))
