"""
Per-axis prefix tries.

An ``AxisTrie`` indexes every prefix of a collection of bit paths without
materialising the prefix strings: a node is identified by the first (in
sorted order) path that owns it and its depth. Node ids are assigned in
pre-order, which keeps enumeration deterministic.

The trie answers the one question the kernels need, lcp(node, path) + 1,
for whole blocks of nodes and paths at once.
"""

from __future__ import annotations

import bisect
from typing import Iterable

import numpy as np

from src.lattice.dyadic import common_prefix_length


class AxisTrie:
    """Prefix trie of the bit paths seen on one axis."""

    def __init__(self, paths: Iterable[str]):
        self.paths: list[str] = sorted(set(paths))
        self._index = {path: i for i, path in enumerate(self.paths)}

        count = len(self.paths)
        adjacent = np.zeros(count, dtype=np.int64)
        for i in range(1, count):
            adjacent[i] = common_prefix_length(self.paths[i - 1], self.paths[i])
        self.adjacent_lcp = adjacent

        depth: list[int] = []
        parent: list[int] = []
        owner: list[int] = []
        self._chains: list[np.ndarray] = []
        stack: list[int] = []

        for i, path in enumerate(self.paths):
            keep = int(adjacent[i]) + 1 if i else 0
            del stack[keep:]
            for k in range(keep, len(path) + 1):
                node = len(depth)
                depth.append(k)
                parent.append(stack[-1] if stack else -1)
                owner.append(i)
                stack.append(node)
            self._chains.append(np.array(stack, dtype=np.int64))

        self.depth = np.array(depth, dtype=np.int64)
        self.parent = np.array(parent, dtype=np.int64)
        self.owner = np.array(owner, dtype=np.int64)
        self._pair_lcp: np.ndarray | None = None

    # =======================================
    # Basic lookups
    # =======================================
    @property
    def node_count(self) -> int:
        return len(self.depth)

    def item(self, path: str) -> int:
        """Index of a full path among the sorted unique paths."""
        return self._index[path]

    def chain(self, item: int) -> np.ndarray:
        """Node ids of the prefixes of path ``item``, root first."""
        return self._chains[item]

    def node_path(self, node: int) -> str:
        return self.paths[self.owner[node]][: self.depth[node]]

    def locate(self, path: str) -> np.ndarray:
        """
        Node ids of the prefixes of an arbitrary ``path`` that are in the trie.

        The deepest such prefix is shared with one of the sorted neighbours of
        ``path``, so two lcp computations suffice.
        """
        if not self.paths:
            return np.zeros(0, dtype=np.int64)
        at = bisect.bisect_left(self.paths, path)
        best_item, best_len = 0, -1
        for item in (at - 1, at):
            if 0 <= item < len(self.paths):
                length = common_prefix_length(path, self.paths[item])
                if length > best_len:
                    best_item, best_len = item, length
        return self._chains[best_item][: best_len + 1]

    def node_of(self, path: str) -> int | None:
        """Node id of ``path`` itself, or ``None`` if it is not a prefix of any item."""
        nodes = self.locate(path)
        if len(nodes) == len(path) + 1:
            return int(nodes[-1])
        return None

    # =======================================
    # lcp tables
    # =======================================
    @property
    def pair_lcp(self) -> np.ndarray:
        """lcp between every pair of stored paths (k x k, int32)."""
        if self._pair_lcp is None:
            count = len(self.paths)
            table = np.zeros((count, count), dtype=np.int32)
            for i in range(count):
                table[i, i] = len(self.paths[i])
                if i + 1 < count:
                    row = np.minimum.accumulate(self.adjacent_lcp[i + 1 :])
                    table[i, i + 1 :] = row
                    table[i + 1 :, i] = row
            self._pair_lcp = table
        return self._pair_lcp

    def lcp_plus_one(
        self, columns: np.ndarray, nodes: np.ndarray | None = None
    ) -> np.ndarray:
        """
        ``lcp(node, paths[column]) + 1`` for a block of nodes and columns.

        A node is a prefix of its owner path, so the lcp with any column is
        the smaller of its depth and the owner/column lcp.

        Args:
            columns: Item indices of the paths to compare against
            nodes: Node ids (default: every node)

        Returns:
            Integer array of shape (len(nodes), len(columns))
        """
        if nodes is None:
            nodes = np.arange(self.node_count)
        owners = self.owner[nodes]
        lcp = self.pair_lcp[np.ix_(owners, np.asarray(columns))]
        return np.minimum(self.depth[nodes][:, None], lcp) + 1
