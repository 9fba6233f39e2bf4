from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from ric.pattern import (
    EMPTY,
    Pattern,
    features_disjoint,
    format_pattern,
    intersect,
    is_subset,
    parse_pattern,
    pattern_from_json,
    pattern_to_json,
    union_disjoint,
)


def patterns(max_feature=6, max_code=2):
    items = st.dictionaries(st.integers(0, max_feature), st.integers(0, max_code), max_size=max_feature + 1)
    return items.map(lambda d: Pattern(d.items()))


def as_set(p):
    return set(p)


def test_canonical_order_and_equality():
    a = Pattern([(3, 2), (1, 0)])
    assert tuple(a) == ((1, 0), (3, 2))
    assert a == Pattern([(1, 0), (3, 2)])
    assert hash(a) == hash(Pattern([(1, 0), (3, 2)]))
    assert a.order == 2 and a.features == (1, 3)


def test_repeated_feature_rejected():
    with pytest.raises(ValueError):
        Pattern([(1, 0), (1, 1)])


def test_subset_examples():
    assert is_subset(EMPTY, Pattern([(1, 0)]))
    assert is_subset(EMPTY, EMPTY)
    assert is_subset(Pattern([(1, 0)]), Pattern([(1, 0), (3, 2)]))
    assert not is_subset(Pattern([(1, 1)]), Pattern([(1, 0), (3, 2)]))


def test_intersect_chain_example():
    # features C1..C3 as indices 0..2; c2' is a different code on feature 1
    a = Pattern([(0, 0), (1, 0), (2, 0)])
    b = Pattern([(0, 0), (1, 1), (2, 0)])
    assert intersect(a, b) == Pattern([(0, 0), (2, 0)])
    assert intersect(a, a) == a
    assert intersect(Pattern([(0, 1)]), Pattern([(1, 1)])) == EMPTY


def test_union_disjoint_examples():
    assert union_disjoint(Pattern([(0, 1)]), Pattern([(2, 0)])) == Pattern([(0, 1), (2, 0)])
    b = Pattern([(4, 1), (5, 0)])
    assert union_disjoint(EMPTY, b) == b
    with pytest.raises(ValueError):
        union_disjoint(Pattern([(1, 0)]), Pattern([(1, 0)]))
    with pytest.raises(ValueError):
        union_disjoint(Pattern([(1, 0)]), Pattern([(1, 1)]))


def test_same_code_on_different_features_are_distinct_items():
    assert intersect(Pattern([(0, 1)]), Pattern([(1, 1)])) == EMPTY
    assert features_disjoint(Pattern([(0, 1)]), Pattern([(1, 1)]))


def test_matches_row():
    p = Pattern([(0, 2), (3, 1)])
    assert p.matches([2, 0, 0, 1])
    assert not p.matches([2, 0, 0, 0])
    assert EMPTY.matches([5, 5])
    assert Pattern.from_row([4, 5, 6], [2, 0]) == Pattern([(0, 4), (2, 6)])


def test_text_form():
    p = Pattern([(0, 1), (3, 0)])
    assert format_pattern(p) == "f0=1,f3=0"
    names = [{0: "x", 1: "o"}, {}, {}, {0: "red"}]
    assert format_pattern(p, names) == "f0=o,f3=red"
    assert parse_pattern("f0=o,f3=red", names) == p
    assert parse_pattern("") == EMPTY
    with pytest.raises(ValueError):
        parse_pattern("g0=1")
    with pytest.raises(ValueError):
        parse_pattern("f0=purple", names)


def test_json_form_uses_names():
    p = Pattern([(0, 1), (3, 0)])
    fn = ["a", "b", "c", "d"]
    cn = [{0: "x", 1: "o"}, {}, {}, {0: "red"}]
    items = pattern_to_json(p, fn, cn)
    assert items == [{"feature": "a", "value": "o"}, {"feature": "d", "value": "red"}]
    assert pattern_from_json(json.loads(json.dumps(items)), fn, cn) == p
    assert pattern_from_json(pattern_to_json(p)) == p


@given(patterns(), patterns())
def test_intersect_is_commutative_and_matches_set_semantics(a, b):
    c = intersect(a, b)
    assert c == intersect(b, a)
    assert as_set(c) == as_set(a) & as_set(b)
    assert is_subset(c, a) and is_subset(c, b)


@given(patterns(), patterns(), patterns())
def test_intersect_is_associative_and_idempotent(a, b, c):
    assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))
    assert intersect(a, a) == a


@given(patterns(), patterns())
def test_is_subset_agrees_with_set_inclusion(a, b):
    assert is_subset(a, b) == (as_set(a) <= as_set(b))


@given(patterns())
def test_text_round_trip(p):
    assert parse_pattern(format_pattern(p)) == p


@given(patterns(), patterns())
def test_union_disjoint_when_features_disjoint(a, b):
    if features_disjoint(a, b):
        u = union_disjoint(a, b)
        assert as_set(u) == as_set(a) | as_set(b)
        assert u.order == a.order + b.order
    else:
        with pytest.raises(ValueError):
            union_disjoint(a, b)
