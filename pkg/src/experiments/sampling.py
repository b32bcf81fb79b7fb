"""Seeded random boxes, sets and measures for the randomized suites."""

import numpy as np

from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox, binary_path
from src.potential.dense import DenseFunction
from src.potential.measures import AtomicMeasure, granular_measure


def random_path(rng: np.random.Generator, depth: int) -> str:
    return binary_path(int(rng.integers(0, 2**depth)), depth) if depth else ""


def random_box(rng: np.random.Generator, dimension: int, max_depth: int) -> DyadicBox:
    """A box with every axis depth drawn uniformly from 0 .. max_depth."""
    depths = rng.integers(0, max_depth + 1, size=dimension)
    return DyadicBox(tuple(random_path(rng, int(k)) for k in depths))


def random_box_set(
    rng: np.random.Generator, dimension: int, max_depth: int, max_size: int
) -> BoxSet:
    size = int(rng.integers(1, max_size + 1))
    return BoxSet.of(
        (random_box(rng, dimension, max_depth) for _ in range(size)), dimension
    )


def random_measure(
    rng: np.random.Generator, dimension: int, max_depth: int, max_atoms: int
) -> AtomicMeasure:
    """Atoms anywhere on the truncated lattice, masses uniform in [0.1, 1)."""
    count = int(rng.integers(1, max_atoms + 1))
    atoms = [
        (random_box(rng, dimension, max_depth), float(rng.uniform(0.1, 1.0)))
        for _ in range(count)
    ]
    return AtomicMeasure.from_atoms(atoms, dimension)


def random_tree_measure(
    rng: np.random.Generator, max_depth: int, max_atoms: int
) -> AtomicMeasure:
    """
    Measure on T: sparse atoms three times out of four, otherwise a granular
    measure with random leaf densities at a random depth.
    """
    if rng.random() < 0.75:
        return random_measure(rng, 1, max_depth, max_atoms)
    depth = int(rng.integers(0, max_depth + 1))
    return granular_measure(depth, rng.uniform(0.0, 1.0, size=2**depth) + 1e-3)


def random_dense(
    rng: np.random.Generator, dimension: int, depth: int
) -> DenseFunction:
    """Nonnegative function on every vertex of the truncated lattice."""
    size = 2 ** (depth + 1) - 1
    return DenseFunction(rng.random((size,) * dimension), depth)
