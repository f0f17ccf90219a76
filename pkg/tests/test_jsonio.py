import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoidify.degroupoidify import matrix, vector
from groupoidify.errors import StructureError
from groupoidify.groupoid import cardinality, validate_groupoid
from groupoidify.jsonio import (
    dumps,
    groupoid_from_json,
    groupoid_to_json,
    over_from_json,
    over_to_json,
    span_from_json,
    span_to_json,
)
from groupoidify.oscillator import build_E
from groupoidify.randomized import random_groupoid, random_over, random_span

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def through_text(doc):
    return json.loads(dumps(doc))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_groupoid_round_trip(seed):
    G = random_groupoid(random.Random(seed))
    H = groupoid_from_json(through_text(groupoid_to_json(G)))
    assert validate_groupoid(H).ok
    assert cardinality(H) == cardinality(G)
    assert groupoid_to_json(H) == groupoid_to_json(G)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_span_round_trip_keeps_matrix(seed):
    S = random_span(random.Random(seed))
    T = span_from_json(through_text(span_to_json(S)))
    assert matrix(T).grid == matrix(S).grid


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_over_round_trip_keeps_vector(seed):
    rng = random.Random(seed)
    v = random_over(rng, random_groupoid(rng))
    w = over_from_json(through_text(over_to_json(v)))
    assert vector(w).entries == vector(v).entries


def test_finite_sets_shorthand():
    E = groupoid_from_json({"finite_sets": 4})
    assert cardinality(E) == cardinality(build_E(4))


def test_span_with_equal_boundaries_shares_them():
    S = random_span(random.Random(3))
    doc = span_to_json(S)
    doc["right"]["target"] = doc["left"]["target"] = groupoid_to_json(S.domain)
    doc["left"]["objects"] = doc["right"]["objects"]
    doc["left"]["morphisms"] = doc["right"]["morphisms"]
    T = span_from_json(doc)
    assert T.domain is T.codomain


@pytest.mark.parametrize("doc", [
    [],
    {"objects": [0]},
    {"objects": [0, 2], "morphisms": [], "identity": {}, "compose": [], "inverse": {}},
    {"objects": [0], "morphisms": [{"id": 0, "src": 0, "tgt": 0}], "identity": {"0": 0},
     "compose": [[0, 0]], "inverse": {"0": 0}},
    {"objects": [0], "morphisms": [{"id": "x", "src": 0, "tgt": 0}], "identity": {"0": 0},
     "compose": [[0, 0, 0]], "inverse": {"0": 0}},
])
def test_malformed_groupoids_rejected(doc):
    with pytest.raises(StructureError):
        groupoid_from_json(doc)


def test_functor_must_cover_its_source():
    S = random_span(random.Random(4))
    doc = span_to_json(S)
    doc["left"]["objects"].pop(next(iter(doc["left"]["objects"])))
    with pytest.raises(StructureError):
        span_from_json(doc)


def test_over_needs_all_parts():
    with pytest.raises(StructureError):
        over_from_json({"total": {}, "base": {}})
