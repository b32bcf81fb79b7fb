"""Finite sets of boxes and their reduction to order-maximal elements."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator

from src.errors import DimensionMismatchError
from src.lattice.dyadic import DyadicBox
from src.lattice.trie import AxisTrie


@dataclass(frozen=True)
class BoxSet:
    """
    Sorted, duplicate-free set of boxes of one dimension.

    ``maximal`` is true when the set is known to be reduced, i.e. no element
    contains another.
    """

    boxes: tuple[DyadicBox, ...]
    dimension: int
    maximal: bool = False

    @classmethod
    def of(cls, boxes: Iterable[DyadicBox], dimension: int | None = None) -> BoxSet:
        unique = sorted(set(boxes))
        if dimension is None:
            if not unique:
                raise DimensionMismatchError("An empty BoxSet needs an explicit dimension")
            dimension = unique[0].dimension
        for box in unique:
            if box.dimension != dimension:
                raise DimensionMismatchError(
                    f"Box {box} has dimension {box.dimension}, set has {dimension}"
                )
        return cls(tuple(unique), dimension)

    def __len__(self) -> int:
        return len(self.boxes)

    def __iter__(self) -> Iterator[DyadicBox]:
        return iter(self.boxes)

    def __contains__(self, box: object) -> bool:
        return box in self.boxes

    def contains_root(self) -> bool:
        return any(box.is_root() for box in self.boxes)

    def reduced(self) -> BoxSet:
        return reduce_to_maximal(self)

    def covers(self, box: DyadicBox) -> bool:
        """True iff some element of the set contains ``box``."""
        return any(element.contains(box) for element in self.boxes)

    def serialize(self) -> list[str]:
        return [box.serialize() for box in self.boxes]


def reduce_to_maximal(boxes: BoxSet | Iterable[DyadicBox]) -> BoxSet:
    """
    Keep only the order-maximal (largest) boxes of a set.

    Candidates for containing a box ``b`` are looked up through the axis-0
    trie: their first path must be a prefix of ``b``'s first path, i.e. a node
    on ``b``'s chain. The remaining axes are checked with ``startswith``.

    Args:
        boxes: A BoxSet or any iterable of boxes of one dimension

    Returns:
        BoxSet of pairwise non-nested boxes covering every input box
    """
    if not isinstance(boxes, BoxSet):
        boxes = BoxSet.of(boxes)
    if boxes.maximal or len(boxes) <= 1:
        return BoxSet(boxes.boxes, boxes.dimension, maximal=True)

    trie = AxisTrie(box.paths[0] for box in boxes)
    by_node: dict[int, list[int]] = defaultdict(list)
    for idx, box in enumerate(boxes.boxes):
        by_node[int(trie.chain(trie.item(box.paths[0]))[-1])].append(idx)

    kept = []
    for idx, box in enumerate(boxes.boxes):
        chain = trie.chain(trie.item(box.paths[0]))
        dominated = False
        for node in chain:
            for other in by_node.get(int(node), ()):
                if other != idx and all(
                    path.startswith(prefix)
                    for prefix, path in zip(boxes.boxes[other].paths[1:], box.paths[1:])
                ):
                    dominated = True
                    break
            if dominated:
                break
        if not dominated:
            kept.append(box)

    return BoxSet(tuple(kept), boxes.dimension, maximal=True)
