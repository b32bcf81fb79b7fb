"""
Join kernel between boxes.

For two boxes ``a`` and ``b`` the number of boxes containing both is
``ancestor_count(join(a, b)) = prod_t (lcp(a_t, b_t) + 1)``. Potentials,
energies and the dual capacity problem are all linear or quadratic forms in
this kernel, so everything here is expressed as blocks of it.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from src.config import CHUNK_SIZE
from src.errors import DimensionMismatchError
from src.lattice.dyadic import DyadicBox
from src.lattice.trie import AxisTrie


class JoinKernel:
    """
    Kernel ``K[p, q] = ancestor_count(join(p, q))`` over a fixed list of boxes.

    Rows are produced from one ``AxisTrie`` per axis, so no join box is ever
    built. The object also behaves as a symmetric operator for the
    coordinate-ascent solver (``size``, ``diagonal``, ``column``, ``apply``,
    ``submatrix``).
    """

    def __init__(self, boxes: Sequence[DyadicBox]):
        self.boxes = list(boxes)
        if not self.boxes:
            raise DimensionMismatchError("JoinKernel needs at least one box")
        self.dimension = self.boxes[0].dimension
        if any(box.dimension != self.dimension for box in self.boxes):
            raise DimensionMismatchError("JoinKernel boxes must share one dimension")

        self.tries = [
            AxisTrie(box.paths[axis] for box in self.boxes)
            for axis in range(self.dimension)
        ]
        self.items = np.array(
            [
                [trie.item(box.paths[axis]) for box in self.boxes]
                for axis, trie in enumerate(self.tries)
            ],
            dtype=np.int64,
        ).reshape(self.dimension, len(self.boxes))

    # =======================================
    # Operator interface
    # =======================================
    @property
    def size(self) -> int:
        return len(self.boxes)

    def diagonal(self) -> np.ndarray:
        return np.array([box.ancestor_count for box in self.boxes], dtype=np.float64)

    def rows(self, index: np.ndarray) -> np.ndarray:
        """Kernel rows for the boxes at ``index`` against every box."""
        index = np.asarray(index, dtype=np.int64)
        block = np.ones((len(index), self.size), dtype=np.float64)
        for axis, trie in enumerate(self.tries):
            lcp = trie.pair_lcp[np.ix_(self.items[axis, index], self.items[axis])]
            block *= lcp + 1.0
        return block

    def column(self, i: int) -> np.ndarray:
        return self.rows(np.array([i]))[0]

    def submatrix(self, index: np.ndarray) -> np.ndarray:
        index = np.asarray(index, dtype=np.int64)
        block = np.ones((len(index), len(index)), dtype=np.float64)
        for axis, trie in enumerate(self.tries):
            items = self.items[axis, index]
            block *= trie.pair_lcp[np.ix_(items, items)] + 1.0
        return block

    def matrix(self) -> np.ndarray:
        return self.rows(np.arange(self.size))

    def apply(self, weights: np.ndarray) -> np.ndarray:
        """``K @ weights`` computed in row blocks."""
        weights = np.asarray(weights, dtype=np.float64)
        out = np.empty(self.size, dtype=np.float64)
        step = max(1, CHUNK_SIZE // max(1, self.size))
        for start in range(0, self.size, step):
            index = np.arange(start, min(start + step, self.size))
            out[index] = self.rows(index) @ weights
        return out

    # =======================================
    # Queries against arbitrary boxes
    # =======================================
    def query(self, box: DyadicBox) -> np.ndarray:
        """
        ``ancestor_count(join(box, p))`` for every kernel box ``p``.

        The deepest trie prefix of ``box`` on each axis is shared with one
        stored path ``b``; for any stored ``p``,
        ``lcp(box, p) = min(L, lcp(b, p))`` where ``L`` is that depth.
        """
        if box.dimension != self.dimension:
            raise DimensionMismatchError(
                f"Query box has dimension {box.dimension}, kernel has {self.dimension}"
            )
        row = np.ones(self.size, dtype=np.float64)
        for axis, trie in enumerate(self.tries):
            nodes = trie.locate(box.paths[axis])
            depth = len(nodes) - 1
            owner = trie.owner[nodes[-1]]
            lcp = np.minimum(depth, trie.pair_lcp[owner, self.items[axis]])
            row *= lcp + 1.0
        return row

    def query_many(self, boxes: Sequence[DyadicBox]) -> np.ndarray:
        return np.vstack([self.query(box) for box in boxes])
