from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from src.errors import DimensionMismatchError, FormatError
from src.lattice.dyadic import (
    DyadicBox,
    DyadicInterval,
    ancestors,
    binary_path,
    common_prefix_length,
    contains,
    corner_box,
    join,
)
from tests.conftest import boxes, paths


def test_root_contains_everything():
    root = DyadicBox.root(2)
    assert root.is_root()
    assert root.contains(DyadicBox.of("0110", "1"))
    assert not DyadicBox.of("0110", "1").contains(root)


def test_join_takes_common_prefix_per_axis():
    a = DyadicBox.of("0010", "11")
    b = DyadicBox.of("0011", "10")
    assert join(a, b) == DyadicBox.of("001", "1")


def test_ancestor_count_and_enumeration():
    box = DyadicBox.of("010", "11")
    found = list(ancestors(box))
    assert box.ancestor_count == 12
    assert len(found) == len(set(found)) == 12
    assert found[0] == DyadicBox.root(2)
    assert all(a.contains(box) for a in found)


def test_parse_and_serialize():
    box = DyadicBox.parse("0010xe")
    assert box.paths == ("0010", "")
    assert box.serialize() == "0010xe"
    assert DyadicBox.parse("exe").is_root()


@pytest.mark.parametrize("text", ["", "01x", "012", "x1"])
def test_parse_rejects_malformed_text(text):
    with pytest.raises(FormatError):
        DyadicBox.parse(text)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        DyadicBox.of("0").contains(DyadicBox.of("0", "1"))
    with pytest.raises(DimensionMismatchError):
        DyadicBox(("0", "1", "0", "1"))


def test_interval_bounds():
    assert DyadicInterval("101").bounds() == (Fraction(5, 8), Fraction(6, 8))
    assert DyadicInterval("").bounds() == (Fraction(0), Fraction(1))


def test_corner_box_and_binary_path():
    assert binary_path(5, 4) == "0101"
    assert binary_path(0, 0) == ""
    assert corner_box("10", (3, 1)) == DyadicBox.of("10000", "100")


def test_parent_and_children():
    box = DyadicBox.of("01", "")
    assert box.parent(0) == DyadicBox.of("0", "")
    assert box.parent(1) is None
    assert box.children(1) == (DyadicBox.of("01", "0"), DyadicBox.of("01", "1"))


def test_common_prefix_on_long_paths():
    a = "0" * 3000 + "1"
    b = "0" * 3000 + "0" + "1" * 50
    assert common_prefix_length(a, b) == 3000


@given(a=paths(12), b=paths(12))
@settings(max_examples=200)
def test_common_prefix_matches_scan(a, b):
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    assert common_prefix_length(a, b) == k


@given(a=boxes(2), b=boxes(2))
@settings(max_examples=100)
def test_join_is_least_common_ancestor(a, b):
    j = join(a, b)
    assert contains(j, a) and contains(j, b)
    common = [r for r in ancestors(a) if r.contains(b)]
    assert all(r.contains(j) for r in common)
    assert j.ancestor_count == len(common)


@given(box=boxes(3, 4), axis=st.integers(min_value=0, max_value=2))
@settings(max_examples=50)
def test_children_are_contained(box, axis):
    for child in box.children(axis):
        assert box.contains(child)
        assert child.parent(axis) == box


@given(a=boxes(2), b=boxes(2), c=boxes(2))
@settings(max_examples=100)
def test_join_is_commutative_associative_idempotent(a, b, c):
    assert join(a, b) == join(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert join(a, a) == a


@given(a=boxes(2), b=boxes(2), c=boxes(2))
@settings(max_examples=100)
def test_containment_is_a_partial_order(a, b, c):
    assert contains(a, a)
    if contains(a, b) and contains(b, a):
        assert a == b
    # chain a >= j >= b through the join
    j = join(b, c)
    assert contains(j, b)
    if contains(a, j):
        assert contains(a, b)
    if contains(a, b) and contains(b, c):
        assert contains(a, c)


@given(a=boxes(2, 4), b=boxes(2, 4))
@settings(max_examples=100)
def test_join_absorbs_contained_boxes(a, b):
    assert contains(a, b) == (join(a, b) == a)
