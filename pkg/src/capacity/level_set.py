"""
Capacity of the level sets D_x = {V^nu >= x}.

D_x is closed under taking sub-boxes. Along an axis whose path is not a
prefix of any atom path, moving to the parent does not change V, so every
maximal element of D_x has all its axis paths in the atom tries. Scanning
that product grid gives D_x exactly whenever the grid fits the budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from src.capacity.certificate import CapacityCertificate, root_certificate
from src.capacity.dual import dual_capacity
from src.capacity.options import SolverOptions
from src.capacity.tree import tree_capacity_exact
from src.config import CHUNK_SIZE, LEVELSET_GRID_CAP
from src.errors import BudgetExceededError, SupportViolationError
from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox
from src.potential.measures import AtomicMeasure, potentials
from src.potential.poset import mixed_radix_strides
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class LevelSetCapacity:
    """C(x) = cap(D_x), exact or a certified lower bound from a witness."""

    x: float
    value: float
    exact: bool
    witness_size: int
    certificate: CapacityCertificate | None


def level_set_boxes(
    nu: AtomicMeasure, x: float, grid_cap: int = LEVELSET_GRID_CAP
) -> BoxSet:
    """
    Maximal elements of D_x.

    Raises:
        BudgetExceededError: The trie product grid is larger than ``grid_cap``
    """
    if not len(nu):
        return BoxSet((), nu.dimension, maximal=True)

    kernel = nu.kernel
    radix = [int(trie.node_count) for trie in kernel.tries]
    size = math.prod(radix)
    if size > grid_cap:
        logger.warning(
            f"{LogEmoji.BUDGET} level-set grid of {size} boxes exceeds {grid_cap}"
        )
        raise BudgetExceededError(f"Level-set grid has {size} boxes (cap {grid_cap})")

    grid = np.stack(
        [g.ravel() for g in np.meshgrid(*[np.arange(r) for r in radix], indexing="ij")]
    )
    values = np.empty(size)
    step = max(1, CHUNK_SIZE // len(nu))
    for start in range(0, size, step):
        block = np.ones((min(step, size - start), len(nu)))
        for axis, trie in enumerate(kernel.tries):
            nodes = grid[axis, start : start + step]
            block *= trie.lcp_plus_one(kernel.items[axis], nodes=nodes)
        values[start : start + step] = block @ nu.mass_array

    inside = values >= x
    maximal = inside.copy()
    shape = tuple(radix)
    flat_strides = mixed_radix_strides(radix)
    for axis, trie in enumerate(kernel.tries):
        parent = trie.parent[grid[axis]]
        has_parent = parent >= 0
        parent_flat = np.arange(size) + (parent - grid[axis]) * flat_strides[axis]
        parent_inside = np.zeros(size, dtype=bool)
        parent_inside[has_parent] = inside[parent_flat[has_parent]]
        maximal &= ~parent_inside

    tries = kernel.tries
    boxes = [
        DyadicBox(tuple(trie.node_path(int(grid[t, i])) for t, trie in enumerate(tries)))
        for i in np.flatnonzero(maximal)
    ]
    logger.debug(
        f"{LogEmoji.LATTICE} D_x at x={x:.6g}: {int(inside.sum())} grid boxes, "
        f"{len(boxes)} maximal (grid shape {shape})"
    )
    return BoxSet(tuple(sorted(boxes)), nu.dimension, maximal=True)


def level_set_capacity(
    nu: AtomicMeasure,
    x: float,
    witness: Iterable[DyadicBox] | None = None,
    opts: SolverOptions = SolverOptions(),
) -> LevelSetCapacity:
    """
    C(x) = cap{V^nu >= x}.

    Args:
        nu: Measure
        x: Level
        witness: Optional subset of D_x; its capacity is returned as a lower bound
        opts: Solver options for the dual path

    Returns:
        LevelSetCapacity (exact when computed from the full D_x)

    Raises:
        SupportViolationError: A witness box has V^nu < x
    """
    if x <= nu.total_mass:
        return LevelSetCapacity(x, 1.0, True, 1, root_certificate(nu.dimension))

    if witness is not None:
        boxes = BoxSet.of(witness, dimension=nu.dimension)
        values = potentials(nu, list(boxes))
        if np.any(values < x):
            raise SupportViolationError("Witness is not contained in the level set")
        cert = dual_capacity(boxes, opts)
        return LevelSetCapacity(x, cert.cap_value, False, len(boxes), cert)

    boxes = level_set_boxes(nu, x)
    if not len(boxes):
        return LevelSetCapacity(x, 0.0, True, 0, None)
    if nu.dimension == 1:
        cert = tree_capacity_exact(boxes)
    else:
        cert = dual_capacity(boxes, opts)
    return LevelSetCapacity(x, cert.cap_value, True, len(boxes), cert)
