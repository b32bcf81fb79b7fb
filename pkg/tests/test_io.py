import pytest

from src.errors import FormatError
from src.lattice.dyadic import DyadicBox
from src.potential.io import (
    format_mass,
    parse_boxes,
    parse_mass,
    parse_measure,
    read_boxes,
    read_measure,
    write_boxes,
    write_measure,
)
from src.potential.measures import AtomicMeasure


def test_mass_literals():
    assert parse_mass("2^-3") == 0.125
    assert parse_mass("0.5") == 0.5
    assert format_mass(2.0**-16) == "2^-16"
    assert format_mass(1.0) == "2^-0"
    assert format_mass(0.3) == "0.3"
    with pytest.raises(FormatError):
        parse_mass("half")
    with pytest.raises(FormatError):
        parse_mass("-1")


def test_parse_measure_with_comments():
    text = "# two atoms\n00x1 2^-2\n\n1xe 0.5  # trailing\n"
    nu = parse_measure(text)
    assert nu.boxes == (DyadicBox.of("00", "1"), DyadicBox.of("1", ""))
    assert nu.masses == (0.25, 0.5)


def test_parse_measure_rejects_bad_lines():
    with pytest.raises(FormatError):
        parse_measure("00x1\n")


def test_files(tmp_path):
    nu = AtomicMeasure.from_atoms([(DyadicBox.of("010", "1"), 2.0**-5)])
    path = write_measure(nu, tmp_path / "sub" / "nu.txt", header="one atom")
    assert path.read_text().startswith("# one atom\n010x1 2^-5")
    assert read_measure(path) == nu

    boxes = [DyadicBox.of("1", ""), DyadicBox.of("0", "01")]
    path = write_boxes(boxes, tmp_path / "E.txt")
    assert list(read_boxes(path)) == sorted(boxes)
    assert list(parse_boxes("exe\n")) == [DyadicBox.root(2)]
