import itertools
import random
from fractions import Fraction

import pytest

from groupoidify.errors import BoundError
from groupoidify.hecke import (
    A2_BASIS,
    PrimeField,
    a1_algebra,
    associative,
    braid_holds,
    compose_relations,
    flag_permutation,
    flags,
    hecke_algebra,
    identity_relation,
    integral,
    plp_paths,
    lpl_paths,
    projective_plane,
    quadratic_holds,
    random_sl3,
    relation_constants,
    relation_spans,
    relative_position,
    sl3_group,
    sl3_orbits,
    unit_holds,
    verify_geometric_relations,
    verify_hecke,
    yang_baxter,
    yang_baxter_inverse,
)

LENGTH = {"1": 0, "P": 1, "L": 1, "PL": 2, "LP": 2, "PLP": 3}


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_plane_counts(q):
    plane = projective_plane(q)
    n = q * q + q + 1
    assert len(plane.points) == n and len(plane.lines) == n
    assert len(flags(q)) == n * (q + 1)
    assert plane.verify().ok


def test_fano_plane_axioms_by_hand():
    plane = projective_plane(2)
    for a, b in itertools.combinations(range(7), 2):
        l = plane.join(a, b)
        assert a in plane.on_line[l] and b in plane.on_line[l]
    for l, m in itertools.combinations(range(7), 2):
        p = plane.meet(l, m)
        assert p in plane.on_line[l] and p in plane.on_line[m]
    assert all(len(plane.on_line[l]) == 3 for l in range(7))
    assert all(len(plane.through[p]) == 3 for p in range(7))


def test_prime_field():
    F = PrimeField(7)
    assert not F.violations()
    assert all(F.mul(a, F.inv(a)) == 1 for a in range(1, 7))
    with pytest.raises(BoundError):
        PrimeField(4)
    with pytest.raises(BoundError):
        projective_plane(6)


@pytest.mark.parametrize("q", [2, 3])
def test_relation_quadratic_identities(q):
    P, L = relation_spans(q)
    one = identity_relation(len(flags(q)))
    assert compose_relations(P, P) == P.times(q - 1) + one.times(q)
    assert compose_relations(L, L) == L.times(q - 1) + one.times(q)
    plp = compose_relations(P, compose_relations(L, P))
    lpl = compose_relations(L, compose_relations(P, L))
    assert plp == lpl


def test_path_bijection_q2():
    plane = projective_plane(2)
    plp = list(plp_paths(plane))
    lpl = set(lpl_paths(plane))
    assert len(plp) == len(lpl) == 21 * 2 * 2 * 2
    images = {yang_baxter(plane, p) for p in plp}
    assert images == lpl
    assert all(yang_baxter_inverse(plane, yang_baxter(plane, p)) == p for p in plp)


@pytest.mark.parametrize("q", [2, 3])
def test_orbit_sizes_by_length(q):
    n = len(flags(q))
    orb = sl3_orbits(q)
    assert orb.labels == A2_BASIS
    assert orb.sizes == [n * q ** LENGTH[w] for w in A2_BASIS]
    assert orb.enumerated and orb.routes_agree


def test_orbit_sizes_q5_classifier_only():
    orb = sl3_orbits(5)
    assert not orb.enumerated and orb.routes_agree is None
    assert orb.sizes == [186 * 5 ** LENGTH[w] for w in A2_BASIS]


def test_sl3_orders():
    # |SL(3, q)| = q^3 (q^2 - 1)(q^3 - 1)
    for q in (2, 3):
        assert sl3_group(q).order == q ** 3 * (q ** 2 - 1) * (q ** 3 - 1)


def test_relative_position_is_invariant():
    plane = projective_plane(3)
    F = plane.flags
    rng = random.Random(0)
    for _ in range(5):
        perm = flag_permutation(plane, random_sl3(3, rng))
        for a, b in itertools.islice(itertools.product(range(len(F)), repeat=2), 0, None, 37):
            assert relative_position(plane, F[a], F[b]) == \
                relative_position(plane, F[perm[a]], F[perm[b]])


@pytest.mark.parametrize("q", [2, 3])
def test_hecke_relations(q):
    alg = hecke_algebra(q)
    assert quadratic_holds(alg, "P") and quadratic_holds(alg, "L")
    assert braid_holds(alg) and unit_holds(alg) and associative(alg) and integral(alg)
    assert [[[int(c) for c in row] for row in m] for m in alg.constants] == relation_constants(q)


def test_hecke_products_q2_by_hand():
    alg = hecke_algebra(2)
    P, L = alg.basis("P"), alg.basis("L")
    # T_P T_L = T_PL: one middle flag for every pair in relative position PL
    assert alg.product(P, L) == alg.basis("PL")
    assert alg.product(P, P) == [Fraction(2), Fraction(1), 0, 0, 0, 0]


def test_raw_indicator_basis_differs_from_normalized_basis():
    # in the class-indicator basis the quadratic relation picks up scale factors
    alg = hecke_algebra(2)
    p = A2_BASIS.index("P")
    assert alg.raw[p][p][:2] == [Fraction(4), Fraction(4)]
    assert alg.scales == [Fraction(1, 8), Fraction(1, 4), Fraction(1, 4),
                          Fraction(1, 2), Fraction(1, 2), Fraction(1)]


@pytest.mark.parametrize("q", [2, 3, 5])
def test_rank_one_algebra(q):
    alg = a1_algebra(q)
    assert alg.labels == ("1", "s")
    assert quadratic_holds(alg, "s") and unit_holds(alg) and associative(alg)
    s = alg.basis("s")
    assert alg.product(s, s) == [Fraction(q), Fraction(q - 1)]


def test_geometric_report_q5():
    rep = verify_geometric_relations(5)
    assert rep.ok and rep.flags == 186
    assert rep.paths_plp == 186 * 5 ** 3


def test_verify_hecke_json():
    rep = verify_hecke(2)
    doc = rep.to_json()
    assert doc["ok"] is True and doc["flags"] == 21
    assert doc["algebra"]["basis"] == list(A2_BASIS)
    assert "algebra" not in verify_hecke(5).to_json()


@pytest.mark.parametrize("q", [2, 3])
def test_point_move_squared_on_the_diagonal(q):
    P, _ = relation_spans(q)
    PP = compose_relations(P, P)
    for f in range(len(flags(q))):
        assert PP.pairs[f, f] == q
