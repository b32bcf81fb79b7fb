"""
Corner families on the diagonal squares and their exact symmetric reduction.

A corner family places the same list of corner-anchored boxes, given by
relative depths ``(a, b)``, in every diagonal square Q_j of side
``2^-square_depth``. The bit flips at levels below ``square_depth`` applied
to both axes permute the squares and preserve the join kernel, so a family
invariant under them has a symmetric equilibrium measure and its capacity
is a QP on one square's profile:

* two boxes in the same square share
  ``(m + 1 + min(a, a'))(m + 1 + min(b, b'))`` ancestors;
* a box and its copies in the other squares add the constant
  ``off(m) = sum_{l < m} 2^(m - l - 1) (l + 1)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.capacity.options import SolverOptions
from src.capacity.qp import DenseOperator, coordinate_ascent
from src.errors import ConstructionError
from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox, binary_path, corner_box
from src.potential.measures import AtomicMeasure
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


# =======================================
# 1. Families and profiles
# =======================================
@dataclass(frozen=True)
class CornerFamily:
    """Relative depth pairs repeated at the South-West corner of every diagonal square."""

    square_depth: int
    depths: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.square_depth < 0:
            raise ConstructionError("square_depth must be nonnegative")
        if any(a < 0 or b < 0 for a, b in self.depths):
            raise ConstructionError("Relative depths must be nonnegative")

    def __len__(self) -> int:
        return len(self.depths)

    @property
    def square_count(self) -> int:
        return 2**self.square_depth

    def boxes(self, square: int) -> list[DyadicBox]:
        prefix = binary_path(square, self.square_depth)
        return [corner_box(prefix, depth) for depth in self.depths]

    def box_set(self) -> BoxSet:
        """Every box of the family in every square (explicit, for small scales)."""
        return BoxSet.of(
            (box for j in range(self.square_count) for box in self.boxes(j)),
            dimension=2,
        )


@dataclass(frozen=True)
class SymmetricProfile:
    """Mass ``rho[i]`` on the i-th family box of every square."""

    rho: tuple[float, ...]

    def __post_init__(self):
        if any(r < 0 for r in self.rho):
            raise ConstructionError("Profile masses must be nonnegative")

    @classmethod
    def of(cls, values: Sequence[float]) -> SymmetricProfile:
        return cls(tuple(float(v) for v in values))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.rho, dtype=np.float64)

    def total_mass(self, family: CornerFamily) -> float:
        return family.square_count * math.fsum(self.rho)


def off_square_constant(square_depth: int) -> float:
    """Ancestors shared with the copies of a box in all the other diagonal squares."""
    return float(
        sum(
            2 ** (square_depth - l - 1) * (l + 1) ** 2 for l in range(square_depth)
        )
    )


# =======================================
# 2. Kernel, potentials, energy
# =======================================
def _within(square_depth: int, a, b, a2, b2):
    base = square_depth + 1
    return (base + np.minimum(a, a2)) * (base + np.minimum(b, b2))


def symmetric_kernel(family: CornerFamily) -> np.ndarray:
    """Reduced kernel A[i, i'] = within(i, i') + off."""
    depths = np.array(family.depths, dtype=np.float64).reshape(-1, 2)
    a, b = depths[:, 0], depths[:, 1]
    within = _within(family.square_depth, a[:, None], b[:, None], a[None, :], b[None, :])
    return within + off_square_constant(family.square_depth)


def symmetric_potential(
    family: CornerFamily, profile: SymmetricProfile, a, b
) -> np.ndarray:
    """
    V at the corner box with relative depths ``(a, b)`` of any diagonal square.

    ``a`` and ``b`` may be arrays (broadcast together).
    """
    depths = np.array(family.depths, dtype=np.float64).reshape(-1, 2)
    a = np.asarray(a, dtype=np.float64)[..., None]
    b = np.asarray(b, dtype=np.float64)[..., None]
    kernel = _within(family.square_depth, a, b, depths[:, 0], depths[:, 1])
    kernel = kernel + off_square_constant(family.square_depth)
    return kernel @ profile.array


def symmetric_energy_and_potential(
    family: CornerFamily, profile: SymmetricProfile
) -> tuple[float, np.ndarray]:
    """
    Energy and the potential at each family box for a symmetric measure.

    Returns:
        (E, V) with ``V[i]`` the potential at box i of any square and
        ``E = square_count * sum_i rho_i V[i]``
    """
    values = symmetric_kernel(family) @ profile.array
    return family.square_count * math.fsum(profile.array * values), values


def expand_profile(family: CornerFamily, profile: SymmetricProfile) -> AtomicMeasure:
    """The explicit measure on T^2 that the profile describes."""
    atoms = [
        (box, mass)
        for j in range(family.square_count)
        for box, mass in zip(family.boxes(j), profile.rho)
    ]
    return AtomicMeasure.from_atoms(atoms, dimension=2)


# =======================================
# 3. Symmetric capacity
# =======================================
@dataclass(frozen=True)
class SymmetricCapacity:
    """Exact capacity of a corner family with its per-square equilibrium profile."""

    value: float
    profile: SymmetricProfile
    potentials: np.ndarray
    lower_bound: float
    duality_gap: float
    sweeps: int
    converged: bool


def symmetric_capacity(
    family: CornerFamily, opts: SolverOptions = SolverOptions()
) -> SymmetricCapacity:
    """
    cap of the whole family = square_count * max_rho (2 sum rho - rho A rho).

    Args:
        family: Corner family (boxes within one square should be pairwise
            non-nested for the profile to be unique, but any family works)
        opts: Solver options

    Returns:
        SymmetricCapacity
    """
    if not len(family):
        raise ConstructionError("Empty corner family")
    count = family.square_count
    operator = DenseOperator(symmetric_kernel(family))
    result = coordinate_ascent(operator, np.ones(len(family)), opts)

    rho = SymmetricProfile.of(result.weights)
    energy = count * math.fsum(result.weights * result.gradient)
    lower = count * result.objective
    min_v = float(np.min(result.gradient))
    gap = energy / min_v**2 - lower if min_v > 0 else math.inf
    logger.debug(
        f"{LogEmoji.SOLVER} symmetric capacity {lower:.12g} "
        f"({len(family)} boxes per square, {count} squares)"
    )
    return SymmetricCapacity(
        value=lower,
        profile=rho,
        potentials=result.gradient,
        lower_bound=lower,
        duality_gap=gap,
        sweeps=result.sweeps,
        converged=result.converged,
    )


# =======================================
# 4. Level sets of symmetric measures
# =======================================
def corner_level_set(
    family: CornerFamily, profile: SymmetricProfile, x: float
) -> CornerFamily:
    """
    Maximal corner-anchored boxes with V >= x inside the diagonal squares.

    V is nondecreasing in both relative depths and constant beyond the
    deepest family depth, so the level set is a staircase: for each x-depth
    ``a`` keep the smallest ``b`` reaching ``x`` when it is strictly smaller
    than the one kept for ``a - 1``.
    """
    depths = np.array(family.depths).reshape(-1, 2)
    max_a, max_b = int(depths[:, 0].max()), int(depths[:, 1].max())
    a_grid, b_grid = np.meshgrid(
        np.arange(max_a + 1), np.arange(max_b + 1), indexing="ij"
    )
    inside = symmetric_potential(family, profile, a_grid, b_grid) >= x

    stairs = []
    previous = max_b + 1
    for a in range(max_a + 1):
        hits = np.flatnonzero(inside[a])
        if len(hits) and hits[0] < previous:
            stairs.append((a, int(hits[0])))
            previous = int(hits[0])
    return CornerFamily(family.square_depth, tuple(stairs))
