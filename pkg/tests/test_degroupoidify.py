import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidify.degroupoidify import (
    RationalMatrix,
    RationalVector,
    frac_str,
    generating_function,
    inner_product,
    inner_product_weighted,
    is_finite_sets,
    matrix,
    matrix_oracle,
    vector,
)
from groupoidify.errors import BoundaryError, BoundError
from groupoidify.groupoid import (
    Functor,
    codiscrete,
    discrete,
    materialize,
    one_object,
    terminal,
)
from groupoidify.groups import SymmetricGroup, cyclic_group
from groupoidify.oscillator import build_E, two_colored
from groupoidify.randomized import random_groupoid, random_over, random_span
from groupoidify.span import GroupoidOver, Span, tautological_over

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def to_terminal(G, one=None):
    one = one or terminal()
    return Functor(G, one, [0] * G.num_objects, [0] * G.num_morphisms())


def test_frac_str_always_shows_denominator():
    assert frac_str(Fraction(3)) == "3/1"
    assert frac_str(Fraction(-2, 4)) == "-1/2"
    assert frac_str(Fraction(0)) == "0/1"


def test_point_into_group_gives_group_order():
    # span 1 <- 1 -> 1//G: one apex class with trivial automorphisms
    for g in (cyclic_group(4), SymmetricGroup(3)):
        X = one_object(g)
        one = terminal()
        S = Span(one, Functor(one, terminal(), [0], [0]), Functor(one, X, [0], [X.identity(0)]))
        assert matrix(S).grid == [[Fraction(g.order)]]
        assert matrix_oracle(S) == matrix(S)


def test_group_to_point_gives_reciprocal_order():
    # span 1 <- 1//G -> 1//G with the identity on the right
    g = SymmetricGroup(3)
    X = one_object(g)
    ident = Functor(X, X, [0], list(range(g.order)))
    S = Span(X, to_terminal(X), ident)
    assert matrix(S).grid == [[Fraction(1)]]
    S2 = Span(X, ident, to_terminal(X))
    assert matrix(S2).grid == [[Fraction(1, 6)]]
    assert matrix_oracle(S2) == matrix(S2)


def test_tautological_vector_is_reciprocal_automorphism_order():
    X = one_object(cyclic_group(3))
    assert vector(tautological_over(X)).entries == [Fraction(1, 3)]
    E = build_E(5)
    assert vector(tautological_over(E)).entries == [Fraction(1, math.factorial(n))
                                                    for n in range(6)]


def test_codiscrete_over_a_point_counts_one():
    C, one = codiscrete(4), terminal()
    v = GroupoidOver(C, one, to_terminal(C, one))
    assert vector(v).entries == [Fraction(1)]


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_matrix_matches_oracle(seed):
    S = random_span(random.Random(seed))
    assert matrix(S) == matrix_oracle(S)


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_inner_product_two_routes(seed):
    rng = random.Random(seed)
    X = random_groupoid(rng)
    a, b = random_over(rng, X), random_over(rng, X)
    assert inner_product(a, b) == inner_product_weighted(a, b)
    assert inner_product(a, b) == inner_product(b, a)


def test_inner_product_needs_a_shared_base():
    rng = random.Random(0)
    a = random_over(rng, random_groupoid(rng))
    b = random_over(rng, random_groupoid(rng, min_classes=2))
    with pytest.raises(BoundaryError):
        inner_product_weighted(a, b)


def test_finite_sets_series_matches_exponential():
    x = sympy.symbols("x")
    ref = sympy.series(sympy.exp(x), x, 0, 7).removeO()
    got = generating_function(tautological_over(build_E(6)), 6).coefficients
    assert got == [Fraction(str(ref.coeff(x, n))) for n in range(7)]


def test_two_colored_series_matches_exp_2x():
    x = sympy.symbols("x")
    ref = sympy.series(sympy.exp(2 * x), x, 0, 7).removeO()
    got = generating_function(two_colored(6), 6).coefficients
    assert got == [Fraction(str(ref.coeff(x, n))) for n in range(7)]


def test_generating_function_rejects_other_bases():
    X = one_object(cyclic_group(2))
    with pytest.raises(BoundaryError):
        generating_function(tautological_over(X), 0)
    with pytest.raises(BoundError):
        generating_function(tautological_over(build_E(3)), 4)


def test_finite_sets_recognised_after_materializing():
    assert is_finite_sets(build_E(4))
    assert is_finite_sets(materialize(build_E(3)))
    # sets of size ≤ 1 have trivial automorphisms, so two points qualify
    assert is_finite_sets(discrete(2))
    assert not is_finite_sets(discrete(3))


def test_matrix_algebra():
    rows = [0, 1]
    A = RationalMatrix(rows, rows, [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(1, 2)]])
    I = RationalMatrix.identity(rows)
    assert A @ I == A and I @ A == A
    assert (A + A) == A.scale(2)
    v = RationalVector(rows, [Fraction(1), Fraction(1)])
    assert (A @ v).entries == [Fraction(3), Fraction(1, 2)]
    assert A.block([1], [0, 1]) == [[Fraction(0), Fraction(1, 2)]]
    assert A.to_json()["entries"] == [["1/1", "2/1"], ["0/1", "1/2"]]
    assert A.to_csv().splitlines() == [",0,1", "0,1/1,2/1", "1,0/1,1/2"]
    with pytest.raises(BoundaryError):
        A @ RationalMatrix.identity([0, 1, 2])
    with pytest.raises(ValueError):
        RationalMatrix(rows, rows, [[Fraction(0)]])
