"""
Dyadic intervals and boxes as bit-paths.

A vertex of T^d is a d-tuple of finite bit strings, most-significant bit
first. The empty string is the root interval [0, 1]. Nesting is prefix
order, so containment, join and ancestor enumeration never touch integer
indices and stay cheap at depths beyond a thousand.

Text form of a box: one bit string per axis joined by ``x``, the root axis
written ``e`` (for example ``0010x01`` or ``exe``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from src.errors import DimensionMismatchError, FormatError

_BITS = frozenset("01")
_ROOT_TOKEN = "e"


# =======================================
# 1. Bit-path helpers
# =======================================
def common_prefix_length(a: str, b: str) -> int:
    """
    Length of the longest common prefix of two bit strings.

    Runs a bisection on slice equality, so the character comparison happens
    in C even for paths thousands of bits long.

    Args:
        a: First bit string
        b: Second bit string

    Returns:
        Number of leading bits shared by both strings
    """
    if len(a) > len(b):
        a, b = b, a
    if b.startswith(a):
        return len(a)

    lo, hi = 0, len(a)  # a[:lo] == b[:lo] and a[:hi] != b[:hi]
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if a[:mid] == b[:mid]:
            lo = mid
        else:
            hi = mid
    return lo


def validate_path(path: str) -> str:
    """Reject anything that is not a string of 0/1 characters."""
    if not isinstance(path, str) or not _BITS.issuperset(path):
        raise FormatError(f"Not a bit path: {path!r}")
    return path


# =======================================
# 2. DyadicInterval
# =======================================
@dataclass(frozen=True, slots=True)
class DyadicInterval:
    """A vertex of T: the dyadic interval addressed by ``path``."""

    path: str = ""

    def __post_init__(self):
        validate_path(self.path)

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def index(self) -> int:
        return int(self.path, 2) if self.path else 0

    def bounds(self) -> tuple[Fraction, Fraction]:
        """Exact end points ``(index/2^depth, (index+1)/2^depth)``."""
        scale = Fraction(1, 2**self.depth)
        return self.index * scale, (self.index + 1) * scale

    def contains(self, other: DyadicInterval) -> bool:
        return other.path.startswith(self.path)

    def join(self, other: DyadicInterval) -> DyadicInterval:
        k = common_prefix_length(self.path, other.path)
        return DyadicInterval(self.path[:k])

    def serialize(self) -> str:
        return self.path or _ROOT_TOKEN


# =======================================
# 3. DyadicBox
# =======================================
@dataclass(frozen=True, slots=True)
class DyadicBox:
    """
    A vertex of T^d, d in {1, 2, 3}: one bit path per axis.

    Boxes are immutable and hashable; ordering follows the per-axis paths,
    which is also the order used for deterministic iteration everywhere.
    """

    paths: tuple[str, ...]

    def __post_init__(self):
        if not 1 <= len(self.paths) <= 3:
            raise DimensionMismatchError(
                f"Boxes live on T, T^2 or T^3, got dimension {len(self.paths)}"
            )
        for path in self.paths:
            validate_path(path)

    # ---- construction -------------------------------------------------
    @classmethod
    def root(cls, dimension: int) -> DyadicBox:
        return cls(("",) * dimension)

    @classmethod
    def of(cls, *paths: str) -> DyadicBox:
        return cls(tuple(paths))

    @classmethod
    def parse(cls, text: str) -> DyadicBox:
        """Parse ``0010x01``-style text; ``e`` stands for the root axis."""
        tokens = text.strip().split("x")
        if not text.strip() or any(not token for token in tokens):
            raise FormatError(f"Malformed box text: {text!r}")
        return cls(tuple("" if tok == _ROOT_TOKEN else tok for tok in tokens))

    # ---- shape --------------------------------------------------------
    @property
    def dimension(self) -> int:
        return len(self.paths)

    @property
    def depths(self) -> tuple[int, ...]:
        return tuple(len(path) for path in self.paths)

    @property
    def sides(self) -> tuple[DyadicInterval, ...]:
        return tuple(DyadicInterval(path) for path in self.paths)

    @property
    def ancestor_count(self) -> int:
        """Number of boxes containing this one, itself and the root included."""
        return math.prod(len(path) + 1 for path in self.paths)

    def is_root(self) -> bool:
        return not any(self.paths)

    # ---- order --------------------------------------------------------
    def _check(self, other: DyadicBox) -> None:
        if len(other.paths) != len(self.paths):
            raise DimensionMismatchError(
                f"Cannot compare a {self.dimension}-box with a {other.dimension}-box"
            )

    def contains(self, other: DyadicBox) -> bool:
        self._check(other)
        return all(o.startswith(s) for s, o in zip(self.paths, other.paths))

    def join(self, other: DyadicBox) -> DyadicBox:
        self._check(other)
        return DyadicBox(
            tuple(
                s[: common_prefix_length(s, o)]
                for s, o in zip(self.paths, other.paths)
            )
        )

    def parent(self, axis: int) -> DyadicBox | None:
        """Parent along one axis, ``None`` when that axis is already the root."""
        path = self.paths[axis]
        if not path:
            return None
        return DyadicBox(self.paths[:axis] + (path[:-1],) + self.paths[axis + 1 :])

    def children(self, axis: int) -> tuple[DyadicBox, DyadicBox]:
        head, path, tail = self.paths[:axis], self.paths[axis], self.paths[axis + 1 :]
        return (
            DyadicBox(head + (path + "0",) + tail),
            DyadicBox(head + (path + "1",) + tail),
        )

    def ancestors(self) -> Iterator[DyadicBox]:
        """Every box containing this one, each exactly once, root first."""
        prefixes = [[path[:k] for k in range(len(path) + 1)] for path in self.paths]
        for combo in itertools.product(*prefixes):
            yield DyadicBox(combo)

    def serialize(self) -> str:
        return "x".join(path or _ROOT_TOKEN for path in self.paths)

    def __str__(self) -> str:
        return self.serialize()

    def __lt__(self, other: DyadicBox) -> bool:
        return self.paths < other.paths


# =======================================
# 4. Module-level operations
# =======================================
def contains(a: DyadicBox, b: DyadicBox) -> bool:
    """True iff ``b`` is a sub-box of ``a``."""
    return a.contains(b)


def join(a: DyadicBox, b: DyadicBox) -> DyadicBox:
    """Smallest box containing both arguments."""
    return a.join(b)


def ancestors(box: DyadicBox) -> Iterator[DyadicBox]:
    """Stream of the ``ancestor_count`` boxes containing ``box``."""
    return box.ancestors()


def corner_box(prefix: str, relative_depths: Iterable[int]) -> DyadicBox:
    """
    Box anchored at the South-West corner of the diagonal square ``prefix``.

    Each axis path is ``prefix`` followed by ``relative_depth`` zeros.
    """
    return DyadicBox(tuple(prefix + "0" * depth for depth in relative_depths))


def binary_path(index: int, width: int) -> str:
    """``index`` written on exactly ``width`` bits (empty for width 0)."""
    return format(index, f"0{width}b") if width else ""
