import pytest
from hypothesis import given, settings

from src.capacity.tree import tree_capacity_exact
from src.errors import DimensionMismatchError, EmptySetError
from src.lattice.dyadic import DyadicBox
from tests.conftest import box_lists


def test_two_leaves():
    cert = tree_capacity_exact([DyadicBox.of("0"), DyadicBox.of("1")])
    assert cert.cap_value == pytest.approx(2 / 3)
    assert cert.equilibrium.masses == pytest.approx((1 / 3, 1 / 3))
    assert cert.kkt_ok(1e-12)
    assert cert.duality_gap == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("depth", [0, 1, 4, 10])
def test_single_vertex(depth):
    cert = tree_capacity_exact([DyadicBox.of("1" * depth)])
    assert cert.cap_value == pytest.approx(1 / (depth + 1))


def test_contained_boxes_are_reduced():
    cert = tree_capacity_exact([DyadicBox.of("0"), DyadicBox.of("01"), DyadicBox.of("011")])
    assert cert.cap_value == pytest.approx(0.5)
    assert cert.constraint_size == 1


def test_root_gives_one():
    assert tree_capacity_exact([DyadicBox.of(""), DyadicBox.of("0")]).cap_value == 1.0


def test_rejects_bad_input():
    with pytest.raises(EmptySetError):
        tree_capacity_exact([])
    with pytest.raises(DimensionMismatchError):
        tree_capacity_exact([DyadicBox.of("0", "1")])


@given(E=box_lists(1, 8, 10))
@settings(max_examples=80, deadline=None)
def test_equilibrium_is_certified(E):
    cert = tree_capacity_exact(E)
    assert 0 < cert.cap_value <= 1
    assert cert.total_mass == pytest.approx(cert.cap_value, rel=1e-9)
    assert cert.primal_energy == pytest.approx(cert.cap_value, rel=1e-9)
    assert cert.kkt_ok(1e-9)
