import math

import pytest
from hypothesis import given, settings, strategies as st

from src.errors import DimensionMismatchError, FormatError
from src.lattice.dyadic import DyadicBox
from src.potential.measures import (
    AtomicMeasure,
    atom_potentials,
    box_mass,
    energy,
    granular_measure,
    potential,
    potentials,
)
from tests.conftest import boxes, measures


def brute_potential(nu, box):
    return math.fsum(box_mass(nu, r) for r in box.ancestors())


def test_single_atom_energy():
    nu = AtomicMeasure.point_mass(DyadicBox.of("01", "1"), 0.5)
    assert energy(nu) == pytest.approx(0.25 * 3 * 2)


def test_from_atoms_merges_and_drops_zeros():
    a, b = DyadicBox.of("0"), DyadicBox.of("1")
    nu = AtomicMeasure.from_atoms([(a, 0.25), (a, 0.25), (b, 0.0)])
    assert nu.boxes == (a,)
    assert nu.masses == (0.5,)
    assert nu.total_mass == 0.5
    assert nu.mass_of(a) == 0.5
    assert nu.mass_of(b) == 0.0


def test_from_atoms_rejects_bad_masses():
    with pytest.raises(FormatError):
        AtomicMeasure.from_atoms([(DyadicBox.of("0"), -1.0)])
    with pytest.raises(DimensionMismatchError):
        AtomicMeasure.from_atoms([(DyadicBox.of("0"), 1.0), (DyadicBox.of("0", "1"), 1.0)])


def test_potential_along_a_path():
    # one atom of mass 1 at depth 3 on T: V counts the shared ancestors
    nu = AtomicMeasure.point_mass(DyadicBox.of("000"))
    assert potential(nu, DyadicBox.of("")) == 1.0
    assert potential(nu, DyadicBox.of("00")) == 3.0
    assert potential(nu, DyadicBox.of("01")) == 2.0
    assert potential(nu, DyadicBox.of("0000111")) == 4.0


def test_empty_measure():
    nu = AtomicMeasure.empty(2)
    assert energy(nu) == 0.0
    assert potential(nu, DyadicBox.root(2)) == 0.0


def test_granular_measure_masses():
    nu = granular_measure(2, density=1.0, dimension=2)
    assert len(nu) == 16
    assert nu.total_mass == pytest.approx(1.0)
    assert set(nu.masses) == {1 / 16}


@given(nu=measures(2, 4, 4), box=boxes(2, 5))
@settings(max_examples=60, deadline=None)
def test_potential_matches_ancestor_sum(nu, box):
    assert potential(nu, box) == pytest.approx(brute_potential(nu, box), rel=1e-12)


@given(nu=measures(2, 4, 4))
@settings(max_examples=40, deadline=None)
def test_energy_is_sum_of_squared_box_masses(nu):
    closure = {r for atom in nu.boxes for r in atom.ancestors()}
    by_boxes = math.fsum(box_mass(nu, r) ** 2 for r in closure)
    assert energy(nu) == pytest.approx(by_boxes, rel=1e-12)
    by_atoms = math.fsum(nu.mass_array * potentials(nu, list(nu.boxes)))
    assert energy(nu) == pytest.approx(by_atoms, rel=1e-12)


@given(nu=measures(1, 6, 5))
@settings(max_examples=40, deadline=None)
def test_potential_grows_towards_the_leaves(nu):
    values = atom_potentials(nu)
    for atom, value in zip(nu.boxes, values):
        parent = atom.parent(0)
        if parent is not None:
            assert potential(nu, parent) <= value + 1e-12


@given(
    nu=measures(2, 5, 4),
    box=boxes(2, 5),
    t=st.floats(min_value=0.125, max_value=8.0, allow_nan=False),
)
@settings(max_examples=50, deadline=None)
def test_potential_and_energy_scale_with_the_measure(nu, box, t):
    scaled = nu.scaled(t)
    assert potential(scaled, box) == pytest.approx(t * potential(nu, box), rel=1e-12)
    assert energy(scaled) == pytest.approx(t**2 * energy(nu), rel=1e-12)
