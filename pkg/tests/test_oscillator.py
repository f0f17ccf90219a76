import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidify import config
from groupoidify.degroupoidify import cardinality, inner_product, matrix
from groupoidify.errors import BoundError
from groupoidify.groupoid import validate_functor
from groupoidify.oscillator import (
    FormalOperatorSum,
    build_E,
    diagram_classes,
    enumerate_diagrams,
    feynman_diagrams_json,
    feynman_entry,
    ladder_matrices,
    ladder_spans,
    normal_order,
    normal_product,
    parse_word,
    psi_n,
    realize,
    safe_bound,
    span_block,
    span_entry,
    symmetry_order,
    verify_commutation,
    word_span,
    word_str,
)


# ---------------------------------------------------------------------------
# an independent Fock-space model: a* e_n = e_{n+1}, a e_n = n e_{n-1}


def fock_apply(word: str, vec: dict[int, Fraction]) -> dict[int, Fraction]:
    ops = []
    k = 0
    while k < len(word):
        if word[k:k + 2] == "a*":
            ops.append("+")
            k += 2
        else:
            ops.append("-")
            k += 1
    for op in reversed(ops):          # rightmost letter acts first
        out: dict[int, Fraction] = {}
        for n, c in vec.items():
            if op == "+":
                out[n + 1] = out.get(n + 1, 0) + c
            elif n > 0:
                out[n - 1] = out.get(n - 1, 0) + n * c
        vec = out
    return vec


def normal_power(n: int) -> dict[str, int]:
    """:(a + a*)^n: = Σ_k C(n, k) (a*)^k a^(n-k)."""
    return {"a*" * k + "a" * (n - k): math.comb(n, k) for k in range(n + 1)}


def fock_entry(valences, i: int, j: int) -> Fraction:
    vec = {i: Fraction(1)}
    for n in reversed(valences):
        out: dict[int, Fraction] = {}
        for w, c in normal_power(n).items():
            for m, v in fock_apply(w, vec).items():
                out[m] = out.get(m, 0) + c * v
        vec = out
    return vec.get(j, Fraction(0))


# ---------------------------------------------------------------------------


def test_finite_sets_truncation_bound():
    assert build_E(config.E_MAX).num_objects == config.E_MAX + 1
    with pytest.raises(BoundError):
        build_E(config.E_MAX + 1)


def test_finite_sets_cardinality_partial_sums():
    for N in range(8):
        assert cardinality(build_E(N)) == sum(Fraction(1, math.factorial(n)) for n in range(N + 1))


@pytest.mark.parametrize("N", [1, 3, 6])
def test_ladder_matrices(N):
    A, As = ladder_matrices(N)
    for m in range(N + 1):
        for n in range(N + 1):
            assert A[m, n] == (n if m == n - 1 else 0)
            assert As[m, n] == (1 if m == n + 1 else 0)
    Aspan, Asspan = ladder_spans(N)
    for leg in (Aspan.left, Aspan.right, Asspan.left, Asspan.right):
        assert validate_functor(leg).ok


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_commutation_relation(N):
    rep = verify_commutation(N)
    assert rep.ok
    assert rep.safe_block == N - 1
    # the cutoff breaks the relation on the top row: AA* vanishes at n = N
    assert rep.diag_aa_star[N] == 0
    assert rep.diag_a_star_a[N] == N
    assert rep.to_json()["ok"] is True


def test_commutation_needs_room():
    with pytest.raises(BoundError):
        verify_commutation(1)


def test_psi_orthogonality():
    N = 5
    for m, n in itertools.product(range(N + 1), repeat=2):
        want = Fraction(1, math.factorial(n)) if m == n else Fraction(0)
        assert inner_product(psi_n(m, N), psi_n(n, N)) == want
    with pytest.raises(BoundError):
        psi_n(N + 1, N)


@pytest.mark.parametrize("n", range(7))
def test_normal_order_is_binomial(n):
    assert normal_order(n).as_strings() == normal_power(n)


def test_formal_sums():
    a = FormalOperatorSum.parse({"a": 1})
    s = FormalOperatorSum.parse({"a*": 1, "a": 1})
    assert (a * s).as_strings() == {"aa*": 1, "aa": 1}
    assert parse_word("a*aa*") == ("a*", "a", "a*")
    assert word_str(parse_word("a*a")) == "a*a"
    assert normal_product([1, 1]) == normal_order(1) * normal_order(1)
    with pytest.raises(ValueError):
        parse_word("ab")


def test_word_spans_match_fock_model():
    N = 5
    for word in ("a", "a*", "aa*", "a*a", "a*aa", "aa*a*"):
        M = matrix(word_span(parse_word(word), N))
        for i in range(N - 1):
            got = fock_apply(word, {i: Fraction(1)})
            for j in range(N - 1):
                assert M[j, i] == got.get(j, 0), (word, i, j)


def test_realize_scalars_and_sums():
    N = 4
    total = FormalOperatorSum.parse({"a*a": 3, "": 2})
    M = matrix(realize(total, N))
    for n in range(N + 1):
        assert M[n, n] == 3 * n + 2


def test_safe_bound():
    assert safe_bound((), 0, 0) == 1
    assert safe_bound((2,), 0, 2) == 2
    assert safe_bound((4, 4), 1, 1) == 5


# hand counts: (valences, in, out, value)
HAND = [
    ((1,), 0, 1, 1),          # a* e0 = e1
    ((1,), 1, 0, 1),          # a e1 = e0
    ((2,), 0, 0, 0),          # normal ordering kills the self-loop
    ((2,), 0, 2, 1),
    ((2,), 2, 0, 2),
    ((1, 1), 0, 0, 1),        # one edge between the two vertices
    ((2, 2), 0, 0, 2),        # two parallel edges, both orders of stubs
    ((3, 3), 0, 0, 6),
    ((4,), 2, 2, 12),         # 6 · a*a*aa e2 = 6 · 2 e2
]


def test_feynman_against_fock_model_small():
    for vals, i, j, want in HAND:
        assert fock_entry(vals, i, j) == want
        assert feynman_entry(vals, i, j) == want


def test_feynman_against_fock_model_grid():
    for total in range(5):
        for vals in itertools.product(range(1, total + 1), repeat=2):
            if sum(vals) > 5:
                continue
            for i, j in itertools.product(range(4), repeat=2):
                assert feynman_entry(vals, i, j) == fock_entry(vals, i, j), (vals, i, j)


@given(st.lists(st.integers(min_value=1, max_value=3), max_size=2),
       st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
@settings(max_examples=25, deadline=None)
def test_feynman_equals_span_entry(vals, i, j):
    assert feynman_entry(vals, i, j) == span_entry(vals, i, j)


def test_feynman_entry_ignores_vertex_order():
    for i, j in itertools.product(range(3), repeat=2):
        assert feynman_entry((1, 3), i, j) == feynman_entry((3, 1), i, j)


def test_span_block_matches_single_entries():
    M = span_block((2,), 2)
    for i, j in itertools.product(range(3), repeat=2):
        assert M[j, i] == span_entry((2,), i, j)


def test_diagrams_have_no_self_loops_and_json_shape():
    for d in enumerate_diagrams((2, 2), 1, 1):
        assert all(v != w for (v, w), _ in d.edges)
    for d in diagram_classes((2,), 1, 1):
        assert symmetry_order(d) >= 1
    recs = feynman_diagrams_json((1, 1), 0, 0)
    assert recs and all({"valences", "in", "out", "edges", "symmetry_order"} <= set(r)
                        for r in recs)


def test_odd_leg_count_gives_zero():
    assert feynman_entry((1,), 0, 0) == 0
    assert feynman_entry((2, 1), 1, 1) == 0


def test_normal_square_matches_matrix_algebra():
    N = 6
    A, As = ladder_matrices(N)
    M = matrix(realize(normal_order(2), N))
    want = A @ A + (As @ A).scale(2) + As @ As
    for m in range(N - 1):
        for n in range(N - 1):
            assert M[m, n] == want[m, n]


@pytest.mark.parametrize("n", range(5))
def test_normal_power_respects_parity(n):
    N = 6
    M = matrix(realize(normal_order(n), N))
    for m in range(N - n + 1):
        for k in range(N - n + 1):
            if (m - k - n) % 2:
                assert M[m, k] == 0


def test_quadratic_vertex_one_leg_each_side():
    assert feynman_entry((2,), 1, 1) == 2
    assert span_entry((2,), 1, 1) == 2


def test_two_colored_fibers():
    from groupoidify.oscillator import two_colored
    v = two_colored(5)
    U = v.total
    for n in range(6):
        fiber = [x for x in U.objects if v.projection.ob(x) == n]
        assert len(fiber) == 2 ** n
        assert len({U.classes.index(x) for x in fiber}) == n + 1
