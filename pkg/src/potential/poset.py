"""
Relevant poset: the ancestor-closure of a measure's support.

Outside the poset ``nu(R) = 0``, so every sum of ``nu(R)`` or ``nu(R)^2``
restricted by a potential threshold only has to visit these boxes. Boxes are
encoded as mixed-radix integers over the per-axis trie node ids; the sorted
code array doubles as the lookup index.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from src.config import CHUNK_SIZE, POSET_BOX_CAP
from src.errors import BudgetExceededError, DimensionMismatchError
from src.lattice.dyadic import DyadicBox
from src.potential.measures import AtomicMeasure
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


class RelevantPoset:
    """
    Every box ``R`` with ``nu(R) > 0``, with cached ``nu(R)`` and ``V^nu(R)``.

    Attributes:
        codes: Sorted box codes (one per member)
        mass: ``I*nu(R) = nu(R)`` per member
        potential: ``V^nu(R)`` per member
    """

    def __init__(
        self,
        nu: AtomicMeasure,
        codes: np.ndarray,
        mass: np.ndarray,
        potential: np.ndarray,
    ):
        self.measure = nu
        self.tries = nu.kernel.tries if len(nu) else []
        self.radix = np.array([trie.node_count for trie in self.tries], dtype=np.int64)
        self.strides = mixed_radix_strides(self.radix)
        self.codes = codes
        self.mass = mass
        self.potential = potential

    # =======================================
    # Encoding
    # =======================================
    def __len__(self) -> int:
        return len(self.codes)

    @property
    def dimension(self) -> int:
        return self.measure.dimension

    def nodes(self, index: np.ndarray | None = None) -> np.ndarray:
        """Per-axis trie node ids of members, shape (d, len(index))."""
        codes = self.codes if index is None else self.codes[index]
        return np.stack(
            [(codes // stride) % radix for stride, radix in zip(self.strides, self.radix)]
        )

    def depths(self, index: np.ndarray | None = None) -> np.ndarray:
        nodes = self.nodes(index)
        return np.stack([trie.depth[nodes[t]] for t, trie in enumerate(self.tries)])

    def box(self, i: int) -> DyadicBox:
        nodes = self.nodes(np.array([i]))[:, 0]
        return DyadicBox(
            tuple(trie.node_path(int(n)) for trie, n in zip(self.tries, nodes))
        )

    def boxes(self) -> Iterator[DyadicBox]:
        for i in range(len(self)):
            yield self.box(i)

    def lookup(self, codes: np.ndarray) -> np.ndarray:
        """Member index of each code, -1 where the code is not a member."""
        codes = np.asarray(codes, dtype=np.int64)
        if not len(self.codes):
            return np.full(len(codes), -1, dtype=np.int64)
        at = np.searchsorted(self.codes, codes)
        at_clipped = np.minimum(at, len(self.codes) - 1)
        found = (at < len(self.codes)) & (self.codes[at_clipped] == codes)
        return np.where(found, at_clipped, -1)

    def index_of(self, box: DyadicBox) -> int:
        if box.dimension != self.dimension:
            raise DimensionMismatchError(
                f"Box {box} has dimension {box.dimension}, poset has {self.dimension}"
            )
        if not len(self):
            return -1
        code = 0
        for trie, stride, path in zip(self.tries, self.strides, box.paths):
            node = trie.node_of(path)
            if node is None:
                return -1
            code += node * int(stride)
        return int(self.lookup(np.array([code]))[0])

    def mass_of(self, box: DyadicBox) -> float:
        i = self.index_of(box)
        return float(self.mass[i]) if i >= 0 else 0.0

    def potential_of(self, box: DyadicBox) -> float:
        """V^nu at a member box (boxes outside the poset need ``potential``)."""
        i = self.index_of(box)
        if i < 0:
            raise KeyError(f"{box} is not in the relevant poset")
        return float(self.potential[i])

    def parent_indices(self, axis: int) -> np.ndarray:
        """Member index of the parent along ``axis``, -1 where that axis is the root."""
        nodes = self.nodes()
        parent = self.tries[axis].parent[nodes[axis]]
        has_parent = parent >= 0
        codes = self.codes + (parent - nodes[axis]) * self.strides[axis]
        out = np.full(len(self), -1, dtype=np.int64)
        out[has_parent] = self.lookup(codes[has_parent])
        return out

    def ancestor_indices(self, box: DyadicBox) -> np.ndarray:
        """Members containing ``box`` (all boxes containing it with nu > 0)."""
        if not len(self):
            return np.zeros(0, dtype=np.int64)
        codes = np.zeros(1, dtype=np.int64)
        for trie, stride, path in zip(self.tries, self.strides, box.paths):
            chain = trie.locate(path)
            codes = (codes[:, None] + chain[None, :] * stride).ravel()
        index = self.lookup(codes)
        return index[index >= 0]

    # =======================================
    # Restricted sums
    # =======================================
    def energy(self) -> float:
        """sum_R nu(R)^2 by enumeration."""
        return math.fsum(self.mass**2)

    def partial_energy(self, eps: float) -> float:
        """sum of nu(R)^2 over members with V(R) <= eps."""
        return math.fsum(self.mass[self.potential <= eps] ** 2)

    def truncated_potential(self, eps: float, box: DyadicBox) -> float:
        """sum of nu(R) over R containing ``box`` with V(R) <= eps."""
        index = self.ancestor_indices(box)
        keep = index[self.potential[index] <= eps]
        return math.fsum(self.mass[keep])

    def level_set(self, x: float) -> np.ndarray:
        """Indices of members with V >= x."""
        return np.flatnonzero(self.potential >= x)


def mixed_radix_strides(radix) -> np.ndarray:
    """
    Strides of the row-major mixed-radix code over per-axis node counts.

    Raises:
        BudgetExceededError: The code range does not fit in int64
    """
    radix = [int(r) for r in radix]
    if math.prod(radix) >= 2**63:
        logger.warning(f"{LogEmoji.BUDGET} box codes over radix {radix} overflow int64")
        raise BudgetExceededError(f"Box codes over radix {radix} do not fit in int64")
    strides = np.ones(len(radix), dtype=np.int64)
    for t in range(len(radix) - 2, -1, -1):
        strides[t] = strides[t + 1] * radix[t + 1]
    return strides


# =======================================
# Construction
# =======================================
def build_relevant_poset(
    nu: AtomicMeasure, box_cap: int = POSET_BOX_CAP
) -> RelevantPoset:
    """
    Enumerate the ancestor-closure of supp(nu) with nu(R) and V^nu(R).

    Args:
        nu: Measure
        box_cap: Refuse when the raw ancestor count sum_a prod_t(d_t+1) exceeds it

    Returns:
        RelevantPoset ordered by box code

    Raises:
        BudgetExceededError: Raw ancestor count above ``box_cap``
    """
    if not len(nu):
        empty = np.zeros(0)
        return RelevantPoset(nu, np.zeros(0, dtype=np.int64), empty, empty)

    raw = sum(box.ancestor_count for box in nu.boxes)
    if raw > box_cap:
        logger.warning(
            f"{LogEmoji.BUDGET} relevant poset needs {raw} ancestor entries, cap is {box_cap}"
        )
        raise BudgetExceededError(
            f"Relevant poset would hold {raw} ancestor entries (cap {box_cap})"
        )

    kernel = nu.kernel
    radix = np.array([trie.node_count for trie in kernel.tries], dtype=np.int64)
    strides = mixed_radix_strides(radix)

    all_codes = np.empty(raw, dtype=np.int64)
    weights = np.empty(raw, dtype=np.float64)
    at = 0
    for a, mass in enumerate(nu.masses):
        codes = np.zeros(1, dtype=np.int64)
        for axis, trie in enumerate(kernel.tries):
            chain = trie.chain(int(kernel.items[axis, a]))
            codes = (codes[:, None] + chain[None, :] * strides[axis]).ravel()
        all_codes[at : at + len(codes)] = codes
        weights[at : at + len(codes)] = mass
        at += len(codes)

    codes, inverse = np.unique(all_codes, return_inverse=True)
    box_mass = np.bincount(inverse.ravel(), weights=weights, minlength=len(codes))
    logger.debug(f"{LogEmoji.LATTICE} relevant poset: {len(codes)} boxes from {raw} entries")

    poset = RelevantPoset(nu, codes, box_mass, np.empty(len(codes)))
    step = max(1, CHUNK_SIZE // len(nu))
    for start in range(0, len(codes), step):
        index = np.arange(start, min(start + step, len(codes)))
        nodes = poset.nodes(index)
        block = np.ones((len(index), len(nu)), dtype=np.float64)
        for axis, trie in enumerate(kernel.tries):
            block *= trie.lcp_plus_one(kernel.items[axis], nodes=nodes[axis])
        poset.potential[index] = block @ nu.mass_array
    return poset


def potentials_by_recursion(poset: RelevantPoset) -> np.ndarray:
    """
    Recompute V on the poset top-down by inclusion-exclusion over parents.

    ``V(R) = nu(R) + sum over nonempty axis sets S of (-1)^(|S|+1) V(p_S R)``,
    where ``p_S`` takes the parent along every axis in ``S`` and terms that
    leave the lattice vanish.
    """
    d = poset.dimension
    parents = [poset.parent_indices(axis) for axis in range(d)]
    terms: list[tuple[float, np.ndarray]] = []
    for mask in range(1, 2**d):
        index = np.arange(len(poset))
        for axis in range(d):
            if mask >> axis & 1:
                index = np.where(index >= 0, parents[axis][np.maximum(index, 0)], -1)
        sign = 1.0 if bin(mask).count("1") % 2 else -1.0
        terms.append((sign, index))

    level = poset.depths().sum(axis=0)
    values = np.zeros(len(poset))
    for depth in np.unique(level):
        members = np.flatnonzero(level == depth)
        total = poset.mass[members].copy()
        for sign, index in terms:
            parent = index[members]
            present = parent >= 0
            total[present] += sign * values[parent[present]]
        values[members] = total
    return values


# =======================================
# Measure-level shortcuts
# =======================================
def partial_energy(nu: AtomicMeasure, eps: float) -> float:
    """E_eps[nu] = sum of nu(R)^2 over R with V^nu(R) <= eps (ties included)."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return build_relevant_poset(nu).partial_energy(eps)


def truncated_potential(nu: AtomicMeasure, eps: float, box: DyadicBox) -> float:
    """V^nu_eps(alpha) = I(1_{E_eps} I*nu)(alpha)."""
    return build_relevant_poset(nu).truncated_potential(eps, box)
