"""
Construction showing that no function of x bounds the partial energy.

2^M diagonal squares Q_j of depth M, each charged at its corner square of
relative depth n with mass 2^-M, so |mu| = 1 and x = n 2^-M. The rectangles
q_{ji} (relative depths n/2^i by 2^i) all carry potential of order x, and
the families F_{ji} of corner rectangles between q_{ji} and Q_j, with
relative x-depth in (n/2^(i+1), n/2^i] and y-depth at most 2^i, are
pairwise disjoint. Each member holds mass 2^-M, so the partial energy at
threshold Cx is at least 2^-M sum |F_{ji}|, which grows like x (log x + M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from src.constructions.symmetric import (
    CornerFamily,
    SymmetricProfile,
    off_square_constant,
    symmetric_potential,
)
from src.errors import ConstructionError
from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox, binary_path, corner_box
from src.potential.measures import AtomicMeasure
from src.potential.poset import RelevantPoset


@dataclass(frozen=True)
class NazarovParams:
    n: int
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ConstructionError(f"M must be positive, got {self.M}")
        if self.n < 1 or self.n & (self.n - 1):
            raise ConstructionError(f"n must be a power of two, got {self.n}")
        if self.n < 2 ** (self.M + 2):
            raise ConstructionError(
                f"x = n 2^-M must be at least 4 (n={self.n}, M={self.M})"
            )

    @classmethod
    def from_x(cls, x: int, M: int) -> NazarovParams:
        return cls(x * 2**M, M)

    @property
    def x(self) -> float:
        return self.n / 2**self.M

    @property
    def logn(self) -> int:
        return self.n.bit_length() - 1

    @property
    def atom_mass(self) -> float:
        return 2.0**-self.M

    @property
    def square_count(self) -> int:
        return 2**self.M


@dataclass(frozen=True)
class NazarovConstruction:
    params: NazarovParams
    measure: AtomicMeasure
    q_boxes: BoxSet

    def families(self) -> Iterator[tuple[int, int, list[DyadicBox]]]:
        """Stream (j, i, F_{ji}) without holding the union."""
        p = self.params
        for j in range(p.square_count):
            for i in range(p.logn):
                yield j, i, family_boxes(p, j, i)


# =======================================
# 1. Boxes and families
# =======================================
def q_depths(p: NazarovParams) -> tuple[tuple[int, int], ...]:
    return tuple((p.n >> i, 1 << i) for i in range(p.logn))


def family_depths(p: NazarovParams, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Relative (a, b) of F_{ji}: a in (n/2^(i+1), n/2^i], b in [0, 2^i]."""
    a_values = np.arange((p.n >> (i + 1)) + 1, (p.n >> i) + 1)
    b_values = np.arange(0, (1 << i) + 1)
    a, b = np.meshgrid(a_values, b_values, indexing="ij")
    return a.ravel(), b.ravel()


def family_boxes(p: NazarovParams, j: int, i: int) -> list[DyadicBox]:
    prefix = binary_path(j, p.M)
    a, b = family_depths(p, i)
    return [corner_box(prefix, (int(u), int(v))) for u, v in zip(a, b)]


def family_size(p: NazarovParams, i: int) -> int:
    return (p.n >> (i + 1)) * ((1 << i) + 1)


def full_grid_size(p: NazarovParams, i: int) -> int:
    """Every box between q_{ji} and Q_j, before the windows are made disjoint."""
    return ((p.n >> i) + 1) * ((1 << i) + 1)


def total_family_size(p: NazarovParams) -> int:
    return p.square_count * sum(family_size(p, i) for i in range(p.logn))


def build_nazarov(p: NazarovParams) -> NazarovConstruction:
    """2^M corner atoms of mass 2^-M and the rectangles q_{ji}."""
    atoms = [
        (corner_box(binary_path(j, p.M), (p.n, p.n)), p.atom_mass)
        for j in range(p.square_count)
    ]
    q_family = CornerFamily(p.M, q_depths(p))
    return NazarovConstruction(
        params=p,
        measure=AtomicMeasure.from_atoms(atoms, dimension=2),
        q_boxes=q_family.box_set(),
    )


# =======================================
# 2. Potentials (closed form, streamed)
# =======================================
def off_square_sums(p: NazarovParams) -> np.ndarray:
    """
    sum over j' != j of (lcp(j, j') + 1)^2 for every square j.

    Two diagonal squares share ``M - bit_length(j ^ j')`` leading bits.
    """
    squares = np.arange(p.square_count)
    out = np.empty(p.square_count)
    for j in squares:
        others = squares[squares != j]
        lcp = p.M - np.floor(np.log2(others ^ j)).astype(int) - 1
        out[j] = float(np.sum((lcp + 1) ** 2))
    return out


def corner_potential(p: NazarovParams, a, b, off: float | None = None) -> np.ndarray:
    """V^mu at corner boxes of relative depths (a, b) <= n inside one Q_j."""
    if off is None:
        off = off_square_constant(p.M)
    base = p.M + 1
    return p.atom_mass * ((base + np.asarray(a)) * (base + np.asarray(b)) + off)


def q_potentials(p: NazarovParams) -> np.ndarray:
    """V^mu(q_{0i}) for i = 0 .. log n - 1."""
    family = CornerFamily(p.M, ((p.n, p.n),))
    depths = np.array(q_depths(p))
    profile = SymmetricProfile.of([p.atom_mass])
    return symmetric_potential(family, profile, depths[:, 0], depths[:, 1])


def max_q_potential(p: NazarovParams) -> float:
    """Vmax = max over j, i of V^mu(q_{ji}), square by square."""
    depths = np.array(q_depths(p))
    return max(
        float(np.max(corner_potential(p, depths[:, 0], depths[:, 1], off=float(off))))
        for off in off_square_sums(p)
    )


@dataclass(frozen=True)
class RestrictedEnergy:
    threshold: float
    value: float
    boxes_counted: int
    boxes_seen: int


def restricted_partial_energy(
    p: NazarovParams, threshold: float | None = None
) -> RestrictedEnergy:
    """
    S = sum of mu(R)^2 over R in the union of the F_{ji} with V^mu(R) <= threshold.

    Every member of F_{ji} sits inside Q_j and contains only the atom of
    Q_j, so mu(R) = 2^-M; V is evaluated per family with the closed form.
    """
    if threshold is None:
        threshold = max_q_potential(p)
    off = off_square_sums(p)
    mass_sq = p.atom_mass**2
    terms: list[float] = []
    counted = seen = 0
    for j in range(p.square_count):
        for i in range(p.logn):
            a, b = family_depths(p, i)
            values = corner_potential(p, a, b, off=float(off[j]))
            hits = int(np.count_nonzero(values <= threshold))
            counted += hits
            seen += len(a)
            terms.append(hits * mass_sq)
    return RestrictedEnergy(threshold, math.fsum(terms), counted, seen)


def restricted_partial_energy_on_poset(
    construction: NazarovConstruction, poset: RelevantPoset, threshold: float
) -> float:
    """The same sum read from an explicit relevant poset (small parameters only)."""
    terms = []
    for _, _, boxes in construction.families():
        for box in boxes:
            index = poset.index_of(box)
            if index >= 0 and poset.potential[index] <= threshold:
                terms.append(float(poset.mass[index]) ** 2)
    return math.fsum(terms)


# =======================================
# 3. Contributions to V(q_{0i})
# =======================================
@dataclass(frozen=True)
class SideCounts:
    """
    Rectangles containing q_{0i}, by class.

    ``main``: inside Q_0 other than Q_0 itself; ``tall``/``long``: vertical
    (horizontal) rectangles at the dyadic scales n/2^i' (2^j'); ``mlarge[k]``:
    rectangles containing Q_0 whose larger depth is k, which hold 2^(M-k)
    atoms; ``other_vertical``/``other_horizontal``: the remaining vertical
    and horizontal rectangles.
    """

    main: int
    tall: int
    long: int
    mlarge: tuple[int, ...]
    other_vertical: int
    other_horizontal: int


def count_side_rectangles(p: NazarovParams, i: int) -> SideCounts:
    if not 0 <= i < p.logn:
        raise ConstructionError(f"i must lie in [0, {p.logn}), got {i}")
    a, b = p.n >> i, 1 << i
    tall = p.M * (p.logn - i + 1)
    long = p.M * (i + 1)
    return SideCounts(
        main=(a + 1) * (b + 1) - 1,
        tall=tall,
        long=long,
        mlarge=tuple(2 * k + 1 for k in range(p.M + 1)),
        other_vertical=p.M * a - tall,
        other_horizontal=p.M * b - long,
    )


def classify_containing_box(p: NazarovParams, i: int, box: DyadicBox) -> str:
    """Class of one rectangle containing q_{0i} (enumeration oracle)."""
    d1, d2 = box.depths
    M = p.M
    if d1 >= M and d2 >= M and (d1, d2) != (M, M):
        return "main"
    if d1 <= M and d2 <= M:
        return f"mlarge:{max(d1, d2)}"
    if d1 > M:
        scales = {p.n >> k for k in range(i, p.logn + 1)}
        return "tall" if d1 - M in scales else "other_vertical"
    scales = {1 << k for k in range(0, i + 1)}
    return "long" if d2 - M in scales else "other_horizontal"


def contribution_ledger(p: NazarovParams, i: int) -> dict[str, float]:
    """Split V^mu(q_{0i}) into main, tall, long, m-large and remaining parts."""
    counts = count_side_rectangles(p, i)
    m = p.atom_mass
    ledger = {
        "main": counts.main * m,
        "tall": counts.tall * m,
        "long": counts.long * m,
        "mlarge": math.fsum(size * 2.0**-k for k, size in enumerate(counts.mlarge)),
        "remaining": (counts.other_vertical + counts.other_horizontal) * m,
    }
    ledger["total"] = float(q_potentials(p)[i])
    return ledger
