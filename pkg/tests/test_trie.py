import numpy as np
from hypothesis import given, settings, strategies as st

from src.lattice.boxset import BoxSet, reduce_to_maximal
from src.lattice.dyadic import DyadicBox, common_prefix_length
from src.lattice.trie import AxisTrie
from tests.conftest import box_lists, paths


def test_trie_nodes_are_prefixes():
    trie = AxisTrie(["010", "011", "1"])
    # root, 0, 01, 010, 011, 1
    assert trie.node_count == 6
    assert sorted(trie.node_path(n) for n in range(trie.node_count)) == [
        "",
        "0",
        "01",
        "010",
        "011",
        "1",
    ]
    assert trie.node_of("01") is not None
    assert trie.node_of("00") is None
    assert [trie.node_path(int(n)) for n in trie.locate("0101")] == ["", "0", "01", "010"]


@given(items=st.lists(paths(8), min_size=1, max_size=8), query=paths(10))
@settings(max_examples=100)
def test_lcp_plus_one_matches_direct(items, query):
    trie = AxisTrie(items)
    columns = np.arange(len(trie.paths))
    table = trie.lcp_plus_one(columns)
    for node in range(trie.node_count):
        prefix = trie.node_path(node)
        for col, path in enumerate(trie.paths):
            assert table[node, col] == common_prefix_length(prefix, path) + 1
    located = trie.locate(query)
    expected = {
        path[:k]
        for path in trie.paths
        for k in range(len(path) + 1)
        if query.startswith(path[:k])
    }
    assert {trie.node_path(int(n)) for n in located} == expected


def test_reduce_drops_contained_boxes():
    E = BoxSet.of(
        [DyadicBox.of("0", ""), DyadicBox.of("01", "1"), DyadicBox.of("1", "11")]
    )
    assert reduce_to_maximal(E).boxes == (DyadicBox.of("0", ""), DyadicBox.of("1", "11"))


def test_boxset_deduplicates_and_covers():
    E = BoxSet.of([DyadicBox.of("1"), DyadicBox.of("1"), DyadicBox.of("00")])
    assert len(E) == 2
    assert E.covers(DyadicBox.of("001"))
    assert not E.covers(DyadicBox.of("01"))


@given(items=box_lists(2, 4, 12))
@settings(max_examples=100)
def test_reduce_matches_quadratic_filter(items):
    E = BoxSet.of(items)
    expected = [
        b for b in E if not any(a != b and a.contains(b) for a in E)
    ]
    assert list(reduce_to_maximal(E)) == expected
