"""
Exact capacity on T by series-parallel reduction.

Every vertex is a unit resistor. Leaves of the reduced constraint set are
grounded at potential 1 and the root is driven from potential 0:
``R(v) = 1`` on E and ``R(v) = 1 + 1 / sum_children 1/R(c)`` elsewhere,
``cap(E) = 1/R(root)``, and the equilibrium mass at each element of E is the
current reaching it.
"""

from typing import Iterable

import numpy as np

from src.capacity.certificate import CapacityCertificate, certify
from src.errors import DimensionMismatchError, EmptySetError
from src.lattice.boxset import BoxSet, reduce_to_maximal
from src.lattice.dyadic import DyadicBox
from src.lattice.trie import AxisTrie
from src.potential.measures import AtomicMeasure
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


def tree_capacity_exact(E: BoxSet | Iterable[DyadicBox]) -> CapacityCertificate:
    """
    Capacity of a vertex set of T with its equilibrium measure.

    Args:
        E: Nonempty set of 1-dimensional boxes

    Returns:
        CapacityCertificate computed in one pass over the ancestor-closure

    Raises:
        EmptySetError: E is empty
        DimensionMismatchError: E does not live on T
    """
    if not isinstance(E, BoxSet):
        E = BoxSet.of(E, dimension=1)
    if E.dimension != 1:
        raise DimensionMismatchError("tree_capacity_exact works on T only")
    if not len(E):
        raise EmptySetError("Capacity of the empty set requested")

    reduced = reduce_to_maximal(E)
    trie = AxisTrie(box.paths[0] for box in reduced)
    terminal = np.zeros(trie.node_count, dtype=bool)
    terminal[[trie.chain(i)[-1] for i in range(len(trie.paths))]] = True

    # children carry larger pre-order ids than their parent
    resistance = np.ones(trie.node_count)
    conductance = np.zeros(trie.node_count)
    for node in range(trie.node_count - 1, -1, -1):
        if not terminal[node]:
            resistance[node] = 1.0 + 1.0 / conductance[node]
        parent = trie.parent[node]
        if parent >= 0:
            conductance[parent] += 1.0 / resistance[node]

    cap = 1.0 / resistance[0]
    current = np.zeros(trie.node_count)
    current[0] = cap
    for node in range(1, trie.node_count):
        parent = trie.parent[node]
        current[node] = current[parent] / (resistance[node] * conductance[parent])

    equilibrium = AtomicMeasure.from_atoms(
        [
            (DyadicBox((path,)), float(current[trie.chain(i)[-1]]))
            for i, path in enumerate(trie.paths)
        ],
        dimension=1,
    )
    logger.debug(f"{LogEmoji.SOLVER} tree capacity {cap:.15g} over {len(reduced)} vertices")
    return certify(reduced, equilibrium, cap, method="tree")
