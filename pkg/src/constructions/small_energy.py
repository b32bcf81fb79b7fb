"""
Counterexample to majorization with small energy on the bi-tree.

With log n = 2^s and 2^M = n / log n, the unit square is cut into n/log n
diagonal squares Q_j of depth M. Each Q_j carries one atom at its
South-West corner square of relative depth n, of mass 1/n^2, and the
family q_{jk} of corner rectangles of relative depths (n/2^k, 2^k),
k = 0 .. log n - 1. Their union F has capacity of order 1 although the
measure has total mass only 1/(n log n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.constructions.symmetric import CornerFamily, SymmetricProfile, symmetric_potential
from src.errors import ConstructionError
from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox, binary_path, corner_box
from src.potential.measures import AtomicMeasure


@dataclass(frozen=True)
class SemParams:
    """
    Parameters of the small-energy counterexample.

    Attributes:
        s: log n = 2^s
        c: Constant in lambda = c/n (None until it is measured)
    """

    s: int
    c: float | None = None

    def __post_init__(self):
        if self.s < 2:
            raise ConstructionError(f"s must be at least 2, got {self.s}")

    @property
    def logn(self) -> int:
        return 2**self.s

    @property
    def n(self) -> int:
        return 2**self.logn

    @property
    def square_depth(self) -> int:
        """M with 2^M = n / log n."""
        return self.logn - self.s

    @property
    def square_count(self) -> int:
        return 2**self.square_depth

    @property
    def atom_mass(self) -> float:
        return 1.0 / self.n**2

    @property
    def delta(self) -> float:
        """delta = |nu| = 1/(n log n)."""
        return 1.0 / (self.n * self.logn)

    @property
    def lam(self) -> float:
        if self.c is None:
            raise ConstructionError("lambda needs the measured constant c")
        return self.c / self.n

    def with_c(self, c: float) -> SemParams:
        return SemParams(self.s, c)


# =======================================
# 1. Boxes
# =======================================
def square_path(p: SemParams, j: int) -> str:
    return binary_path(j, p.square_depth)


def diagonal_square(p: SemParams, j: int) -> DyadicBox:
    return corner_box(square_path(p, j), (0, 0))


def omega(p: SemParams, j: int) -> DyadicBox:
    """Corner atom box of Q_j: relative depth n on both axes."""
    return corner_box(square_path(p, j), (p.n, p.n))


def q_depths(p: SemParams) -> tuple[tuple[int, int], ...]:
    return tuple((p.n >> k, 1 << k) for k in range(p.logn))


def q_box(p: SemParams, j: int, k: int) -> DyadicBox:
    if not 0 <= k < p.logn:
        raise ConstructionError(f"k must lie in [0, {p.logn}), got {k}")
    return corner_box(square_path(p, j), q_depths(p)[k])


# =======================================
# 2. Measure and family
# =======================================
def nu_family(p: SemParams) -> CornerFamily:
    return CornerFamily(p.square_depth, ((p.n, p.n),))


def nu_profile(p: SemParams) -> SymmetricProfile:
    return SymmetricProfile.of([p.atom_mass])


def f_family(p: SemParams) -> CornerFamily:
    return CornerFamily(p.square_depth, q_depths(p))


def build_nu(p: SemParams) -> AtomicMeasure:
    """n/log n atoms of mass 1/n^2, one at the corner of every diagonal square."""
    return AtomicMeasure.from_atoms(
        [(omega(p, j), p.atom_mass) for j in range(p.square_count)], dimension=2
    )


def build_F(p: SemParams) -> BoxSet:
    """F = union over j, k of q_{jk}."""
    return f_family(p).box_set()


# =======================================
# 3. Potentials of nu on the family
# =======================================
def q_potentials(p: SemParams) -> np.ndarray:
    """V^nu(q_{jk}) for k = 0 .. log n - 1 (the same for every j)."""
    depths = np.array(q_depths(p))
    return symmetric_potential(nu_family(p), nu_profile(p), depths[:, 0], depths[:, 1])


def scaled_q_potentials(p: SemParams) -> np.ndarray:
    """n * V^nu(q_{jk}); bounded above and below uniformly in k and s."""
    return p.n * q_potentials(p)
