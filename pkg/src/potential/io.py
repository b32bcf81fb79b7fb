"""
Line formats for measures and box sets.

Measure file: one atom per line, ``<box> <mass>``, where mass is a decimal
or a ``2^-k`` literal. Box file: one box per line. ``#`` starts a comment.
"""

import math
import re
from pathlib import Path
from typing import Iterable

from src.errors import FormatError
from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox
from src.potential.measures import AtomicMeasure

_POWER = re.compile(r"^2\^-(\d+)$")


def parse_mass(token: str) -> float:
    """Parse ``0.125``, ``1e-3`` or ``2^-3``."""
    match = _POWER.match(token)
    if match:
        return 2.0 ** -int(match.group(1))
    try:
        mass = float(token)
    except ValueError:
        raise FormatError(f"Not a mass literal: {token!r}")
    if not math.isfinite(mass) or mass < 0:
        raise FormatError(f"Mass must be finite and nonnegative: {token!r}")
    return mass


def format_mass(mass: float) -> str:
    """Exact powers of two are written as ``2^-k``, everything else with repr."""
    fraction, exponent = math.frexp(mass)
    if fraction == 0.5 and exponent <= 1:
        return f"2^-{1 - exponent}"
    return repr(float(mass))


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_measure(text: str, dimension: int | None = None) -> AtomicMeasure:
    atoms = []
    for number, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"Line {number}: expected '<box> <mass>', got {line!r}")
        atoms.append((DyadicBox.parse(parts[0]), parse_mass(parts[1])))
    return AtomicMeasure.from_atoms(atoms, dimension)


def format_measure(nu: AtomicMeasure, header: str | None = None) -> str:
    lines = [f"# {row}" for row in (header or "").splitlines()]
    lines += [f"{box.serialize()} {format_mass(mass)}" for box, mass in nu]
    return "\n".join(lines) + "\n"


def parse_boxes(text: str, dimension: int | None = None) -> BoxSet:
    return BoxSet.of(
        (DyadicBox.parse(line) for _, line in _content_lines(text)), dimension
    )


def format_boxes(boxes: Iterable[DyadicBox], header: str | None = None) -> str:
    lines = [f"# {row}" for row in (header or "").splitlines()]
    lines += [box.serialize() for box in boxes]
    return "\n".join(lines) + "\n"


def read_measure(path: Path, dimension: int | None = None) -> AtomicMeasure:
    with open(path, "r", encoding="utf-8") as f:
        return parse_measure(f.read(), dimension)


def write_measure(nu: AtomicMeasure, path: Path, header: str | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_measure(nu, header))
    return path


def read_boxes(path: Path, dimension: int | None = None) -> BoxSet:
    with open(path, "r", encoding="utf-8") as f:
        return parse_boxes(f.read(), dimension)


def write_boxes(boxes: Iterable[DyadicBox], path: Path, header: str | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_boxes(boxes, header))
    return path
