import numpy as np
import pytest
from hypothesis import given, settings

from src.capacity.dual import capacity_lower_bound, dual_capacity
from src.capacity.options import SolverOptions
from src.capacity.tree import tree_capacity_exact
from src.errors import EmptySetError, SupportViolationError
from src.lattice.boxset import BoxSet
from src.lattice.dyadic import DyadicBox
from src.potential.measures import AtomicMeasure
from tests.conftest import box_lists


@pytest.mark.parametrize(
    "paths", [("0", "1"), ("01", "110"), ("", "0011"), ("1", "0", "01")]
)
def test_single_box(paths):
    box = DyadicBox.of(*paths)
    cert = dual_capacity([box])
    assert cert.cap_value == pytest.approx(1 / box.ancestor_count)
    assert cert.kkt_ok(1e-9)


def test_root_short_circuit():
    cert = dual_capacity([DyadicBox.root(2), DyadicBox.of("0", "0")])
    assert cert.cap_value == 1.0
    assert cert.method == "root"


def test_empty_set():
    with pytest.raises(EmptySetError):
        dual_capacity(BoxSet((), 2))


def test_matrix_free_agrees():
    E = [DyadicBox.of("00", "1"), DyadicBox.of("1", "01"), DyadicBox.of("01", "00")]
    cached = dual_capacity(E)
    free = dual_capacity(E, SolverOptions(matrix_free=True))
    assert free.cap_value == pytest.approx(cached.cap_value, rel=1e-9)


@given(E=box_lists(1, 6, 8))
@settings(max_examples=40, deadline=None)
def test_dual_matches_tree_reduction(E):
    assert dual_capacity(E).cap_value == pytest.approx(
        tree_capacity_exact(E).cap_value, rel=1e-6
    )


@given(E=box_lists(2, 4, 6))
@settings(max_examples=30, deadline=None)
def test_certificate_on_bitree(E):
    cert = dual_capacity(E)
    assert 0 < cert.cap_value <= 1
    assert cert.kkt_ok(1e-5)
    assert cert.lower_bound <= cert.cap_value + 1e-9
    assert abs(cert.duality_gap) <= 1e-5
    # any measure on E gives a lower bound
    uniform = AtomicMeasure.from_atoms([(box, 0.01) for box in E])
    assert capacity_lower_bound(uniform, E) <= cert.cap_value * (1 + 1e-6)


def test_lower_bound_support_check():
    nu = AtomicMeasure.point_mass(DyadicBox.of("1", "1"))
    with pytest.raises(SupportViolationError):
        capacity_lower_bound(nu, [DyadicBox.of("0", "")])
    # atoms below an element are allowed
    assert capacity_lower_bound(nu, [DyadicBox.of("1", "")]) == pytest.approx(1 / 4)


def test_lower_bound_is_tight_at_the_equilibrium():
    E = [DyadicBox.of("00", "1"), DyadicBox.of("1", "0"), DyadicBox.of("01", "11")]
    cert = dual_capacity(E)
    assert capacity_lower_bound(cert.equilibrium, E) == pytest.approx(
        cert.cap_value, rel=1e-6
    )


@given(E=box_lists(2, 4, 6))
@settings(max_examples=30, deadline=None)
def test_objective_rises_and_stays_below_the_capacity(E):
    cert = dual_capacity(E)
    if cert.method == "root":
        return
    history = np.asarray(cert.objective_history)
    assert cert.weak_duality
    assert cert.objective_monotone()
    assert len(history) >= 2
    assert np.all(np.diff(history) >= -1e-12)
    # every iterate is a dual value, so none exceeds the capacity
    assert np.all(history <= cert.cap_value * (1 + 1e-9) + cert.duality_gap)


@given(E=box_lists(1, 6, 6), extra=box_lists(1, 6, 4))
@settings(max_examples=40, deadline=None)
def test_capacity_is_monotone_on_tree(E, extra):
    small = dual_capacity(E).cap_value
    large = dual_capacity(E + extra).cap_value
    assert small <= large * (1 + 2e-6)
    assert small == pytest.approx(tree_capacity_exact(E).cap_value, rel=1e-6)
    assert large == pytest.approx(tree_capacity_exact(E + extra).cap_value, rel=1e-6)


@given(E=box_lists(2, 4, 5), extra=box_lists(2, 4, 3))
@settings(max_examples=30, deadline=None)
def test_capacity_is_monotone_on_bitree(E, extra):
    small = dual_capacity(E)
    large = dual_capacity(E + extra)
    assert small.cap_value <= large.cap_value * (1 + 1e-5) + max(large.duality_gap, 0.0)
