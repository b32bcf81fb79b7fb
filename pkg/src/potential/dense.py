"""
Dense functions on the full truncated lattice (brute-force oracle path).

Every axis uses heap order: the interval with path ``p`` at depth ``k`` sits at
index ``2^k - 1 + int(p)``. A function on T^d is an array with one such axis
per dimension, and both Hardy operators are separable level sweeps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from src.config import DENSE_MAX_DEPTH
from src.errors import DepthOverflowError, DimensionMismatchError
from src.lattice.dyadic import DyadicBox, binary_path
from src.potential.measures import AtomicMeasure
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


def heap_index(path: str) -> int:
    return 2 ** len(path) - 1 + (int(path, 2) if path else 0)


def heap_path(index: int) -> str:
    """Inverse of ``heap_index``."""
    depth = (index + 1).bit_length() - 1
    return binary_path(index + 1 - 2**depth, depth)


def heap_box(index: tuple[int, ...]) -> DyadicBox:
    return DyadicBox(tuple(heap_path(int(i)) for i in index))


def _level(k: int) -> slice:
    return slice(2**k - 1, 2 ** (k + 1) - 1)


# =======================================
# 1. DenseFunction
# =======================================
@dataclass(frozen=True, eq=False)
class DenseFunction:
    """Values on every vertex of T^d truncated at ``depth``."""

    values: np.ndarray
    depth: int

    def __post_init__(self):
        size = 2 ** (self.depth + 1) - 1
        if not 1 <= self.values.ndim <= 3 or any(s != size for s in self.values.shape):
            raise DimensionMismatchError(
                f"Dense values of shape {self.values.shape} do not fit depth {self.depth}"
            )
        cap = DENSE_MAX_DEPTH[self.values.ndim]
        if self.depth > cap:
            raise DepthOverflowError(
                f"Dense lattice depth {self.depth} exceeds {cap} for d={self.values.ndim}"
            )

    @property
    def dimension(self) -> int:
        return self.values.ndim

    @classmethod
    def zeros(cls, dimension: int, depth: int) -> DenseFunction:
        size = 2 ** (depth + 1) - 1
        return cls(np.zeros((size,) * dimension), depth)

    @classmethod
    def from_measure(cls, nu: AtomicMeasure, depth: int) -> DenseFunction:
        """Place the atoms of ``nu`` on the dense lattice."""
        if nu.max_depth > depth:
            raise DepthOverflowError(
                f"Measure reaches depth {nu.max_depth}, dense lattice stops at {depth}"
            )
        f = cls.zeros(nu.dimension, depth)
        for box, mass in nu:
            f.values[tuple(heap_index(path) for path in box.paths)] += mass
        return f

    def index(self, box: DyadicBox) -> tuple[int, ...]:
        if box.dimension != self.dimension:
            raise DimensionMismatchError(
                f"Box {box} has dimension {box.dimension}, function has {self.dimension}"
            )
        if max(box.depths) > self.depth:
            raise DepthOverflowError(f"Box {box} is deeper than the dense lattice")
        return tuple(heap_index(path) for path in box.paths)

    def value(self, box: DyadicBox) -> float:
        return float(self.values[self.index(box)])

    def boxes(self):
        """Every vertex of the truncated lattice, in heap order."""
        axis = [
            binary_path(i, k) for k in range(self.depth + 1) for i in range(2**k)
        ]
        for combo in itertools.product(axis, repeat=self.dimension):
            yield DyadicBox(combo)

    # =======================================
    # 2. Hardy operators
    # =======================================
    def hardy_up(self) -> DenseFunction:
        """If(alpha) = sum of f over every box containing alpha."""
        out = self.values.astype(np.float64, copy=True)
        for axis in range(self.dimension):
            view = np.moveaxis(out, axis, 0)
            for k in range(1, self.depth + 1):
                view[_level(k)] += np.repeat(view[_level(k - 1)], 2, axis=0)
        return DenseFunction(out, self.depth)

    def hardy_down(self) -> DenseFunction:
        """I*f(alpha) = sum of f over every box contained in alpha."""
        out = self.values.astype(np.float64, copy=True)
        for axis in range(self.dimension):
            view = np.moveaxis(out, axis, 0)
            for k in range(self.depth, 0, -1):
                child = view[_level(k)]
                view[_level(k - 1)] += child.reshape(
                    (2 ** (k - 1), 2) + child.shape[1:]
                ).sum(axis=1)
        return DenseFunction(out, self.depth)

    def pair(self, other: DenseFunction) -> float:
        """sum over the lattice of f * g."""
        return float(np.sum(self.values * other.values))


# =======================================
# 3. Point operations
# =======================================
def hardy_up(f: DenseFunction, box: DyadicBox) -> float:
    """If(alpha) at one box."""
    return f.hardy_up().value(box)


def hardy_down(f: DenseFunction, box: DyadicBox) -> float:
    """I*f(alpha) at one box."""
    return f.hardy_down().value(box)


def dense_potential(nu: AtomicMeasure, depth: int) -> DenseFunction:
    """V^nu = I(I* nu) on the whole truncated lattice."""
    return DenseFunction.from_measure(nu, depth).hardy_down().hardy_up()


def is_superadditive(g: DenseFunction, rtol: float = 1e-12) -> bool:
    """
    g(parent) >= sum of its two children, along every axis separately.

    On T^2 the children are taken per axis with the other coordinate fixed.
    """
    slack = rtol * float(np.max(np.abs(g.values)))
    for axis in range(g.dimension):
        view = np.moveaxis(g.values, axis, 0)
        for k in range(g.depth):
            child = view[_level(k + 1)]
            sums = child.reshape((2**k, 2) + child.shape[1:]).sum(axis=1)
            if np.any(view[_level(k)] < sums - slack):
                logger.debug(
                    f"{LogEmoji.LATTICE} superadditivity fails on axis {axis} at level {k}"
                )
                return False
    return True


def cut_deficit(g: DenseFunction, lam: float) -> float:
    """
    Largest amount by which I(g 1_{Ig <= lam}) falls below (Ig) 1_{Ig <= lam}.

    For g >= 0 every box containing a point of {Ig <= lam} is in that set
    too, so the cut sum keeps all of Ig there and the deficit is 0.
    """
    G = g.hardy_up().values
    below = G <= lam
    cut = DenseFunction(g.values * below, g.depth).hardy_up().values
    return float(np.max(np.where(below, G, 0.0) - cut, initial=0.0))
