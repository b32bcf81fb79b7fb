"""
Atomic measures on T^d and their closed-form potentials and energies.

``V^nu(alpha) = sum_a m_a * ancestor_count(join(alpha, a))`` and
``E[nu] = sum_{a, b} m_a m_b * ancestor_count(join(a, b))``: a box ``R``
contributes ``m_a`` to ``V(alpha)`` exactly when it contains both ``alpha``
and the atom, i.e. when it contains their join.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from src.errors import DimensionMismatchError, FormatError
from src.lattice.dyadic import DyadicBox, binary_path
from src.potential.kernel import JoinKernel


# =======================================
# 1. AtomicMeasure
# =======================================
@dataclass(frozen=True)
class AtomicMeasure:
    """
    Finite nonnegative measure: a mass on each of finitely many boxes.

    Atoms may sit on any vertex, not only on leaves. Atoms are kept sorted by
    box so iteration and every reduction run in a fixed order.
    """

    boxes: tuple[DyadicBox, ...]
    masses: tuple[float, ...]
    dimension: int

    @classmethod
    def from_atoms(
        cls, atoms: Mapping[DyadicBox, float] | Iterable[tuple[DyadicBox, float]],
        dimension: int | None = None,
    ) -> AtomicMeasure:
        """
        Build a measure, merging repeated boxes and dropping zero masses.

        Args:
            atoms: Mapping or iterable of (box, mass) pairs
            dimension: Required when ``atoms`` is empty

        Returns:
            AtomicMeasure with strictly positive masses
        """
        pairs = atoms.items() if isinstance(atoms, Mapping) else atoms
        merged: dict[DyadicBox, list[float]] = {}
        for box, mass in pairs:
            mass = float(mass)
            if not math.isfinite(mass) or mass < 0:
                raise FormatError(f"Atom {box} has invalid mass {mass}")
            merged.setdefault(box, []).append(mass)

        boxes = sorted(box for box, masses in merged.items() if math.fsum(masses) > 0)
        if dimension is None:
            if not boxes:
                raise DimensionMismatchError("An empty measure needs an explicit dimension")
            dimension = boxes[0].dimension
        for box in boxes:
            if box.dimension != dimension:
                raise DimensionMismatchError(
                    f"Atom {box} has dimension {box.dimension}, measure has {dimension}"
                )
        return cls(
            tuple(boxes), tuple(math.fsum(merged[box]) for box in boxes), dimension
        )

    @classmethod
    def empty(cls, dimension: int) -> AtomicMeasure:
        return cls((), (), dimension)

    @classmethod
    def point_mass(cls, box: DyadicBox, mass: float = 1.0) -> AtomicMeasure:
        return cls.from_atoms([(box, mass)])

    def __len__(self) -> int:
        return len(self.boxes)

    def __iter__(self):
        return iter(zip(self.boxes, self.masses))

    @cached_property
    def mass_array(self) -> np.ndarray:
        return np.array(self.masses, dtype=np.float64)

    @cached_property
    def kernel(self) -> JoinKernel:
        return JoinKernel(self.boxes)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.masses)

    @property
    def max_depth(self) -> int:
        return max((max(box.depths) for box in self.boxes), default=0)

    def scaled(self, factor: float) -> AtomicMeasure:
        return AtomicMeasure.from_atoms(
            [(box, factor * mass) for box, mass in self], self.dimension
        )

    def mass_of(self, box: DyadicBox) -> float:
        """Mass of the atom sitting exactly at ``box`` (0 if none)."""
        for atom, mass in self:
            if atom == box:
                return mass
        return 0.0


# =======================================
# 2. Closed-form evaluation
# =======================================
def _check(nu: AtomicMeasure, box: DyadicBox) -> None:
    if box.dimension != nu.dimension:
        raise DimensionMismatchError(
            f"Box {box} has dimension {box.dimension}, measure has {nu.dimension}"
        )


def box_mass(nu: AtomicMeasure, box: DyadicBox) -> float:
    """nu(R) = I*nu(R): total mass of the atoms contained in ``box``."""
    _check(nu, box)
    return math.fsum(mass for atom, mass in nu if box.contains(atom))


def potential(nu: AtomicMeasure, box: DyadicBox) -> float:
    """
    V^nu(alpha) = sum over every box R containing alpha of nu(R).

    Args:
        nu: Measure
        box: Evaluation box alpha

    Returns:
        Exact potential, one join per atom
    """
    _check(nu, box)
    if not len(nu):
        return 0.0
    return math.fsum(nu.kernel.query(box) * nu.mass_array)


def potentials(nu: AtomicMeasure, boxes: Sequence[DyadicBox]) -> np.ndarray:
    """Vectorised ``potential`` over a list of boxes."""
    for box in boxes:
        _check(nu, box)
    if not len(nu) or not len(boxes):
        return np.zeros(len(boxes))
    rows = nu.kernel.query_many(boxes)
    return np.array([math.fsum(row * nu.mass_array) for row in rows])


def atom_potentials(nu: AtomicMeasure) -> np.ndarray:
    """V^nu at every atom, in atom order."""
    if not len(nu):
        return np.zeros(0)
    return nu.kernel.apply(nu.mass_array)


def energy(nu: AtomicMeasure) -> float:
    """E[nu] = sum_R nu(R)^2 = sum_a m_a V^nu(a), via the pairwise join kernel."""
    if not len(nu):
        return 0.0
    return math.fsum(nu.mass_array * atom_potentials(nu))


# =======================================
# 3. Granular measures
# =======================================
def granular_measure(
    depth: int, density: float | np.ndarray = 1.0, dimension: int = 1
) -> AtomicMeasure:
    """
    Measure with constant density on the leaf cells of the depth-``depth`` lattice.

    Each leaf cell has volume ``2^(-depth*dimension)`` and receives
    ``density * volume``. ``density`` may also be an array over the leaves
    (shape ``(2^depth,) * dimension``), giving a measure that is constant on
    every leaf cell.
    """
    leaves = 2**depth
    volume = 2.0 ** (-depth * dimension)
    weights = np.broadcast_to(np.asarray(density, dtype=np.float64), (leaves,) * dimension)
    if np.any(weights < 0):
        raise FormatError("Granular densities must be nonnegative")

    atoms = []
    for index in itertools.product(range(leaves), repeat=dimension):
        mass = float(weights[index]) * volume
        if mass > 0:
            atoms.append(
                (DyadicBox(tuple(binary_path(i, depth) for i in index)), mass)
            )
    return AtomicMeasure.from_atoms(atoms, dimension)
