import pytest

from src.capacity.majorant import MajorantProblem, min_energy_majorant
from src.errors import FormatError
from src.lattice.dyadic import DyadicBox


@pytest.mark.parametrize("target", [0.5, 1.0, 3.0])
def test_single_constraint(target):
    box = DyadicBox.of("01", "1")
    solution = min_energy_majorant(MajorantProblem.of({box: target}))
    assert solution.objective == pytest.approx(target**2 / box.ancestor_count)
    assert solution.dual_value == pytest.approx(solution.objective)
    assert solution.min_slack >= -1e-9


def test_uniform_targets_give_capacity():
    boxes = [DyadicBox.of("0"), DyadicBox.of("1")]
    solution = min_energy_majorant(MajorantProblem.uniform(boxes))
    assert solution.objective == pytest.approx(2 / 3)
    phi = solution.phi()
    assert phi.mass_of(DyadicBox.of("")) == pytest.approx(2 / 3)


def test_zero_targets_are_vacuous():
    problem = MajorantProblem.of({DyadicBox.of("0"): 0.0, DyadicBox.of("1"): 0.0})
    solution = min_energy_majorant(problem)
    assert solution.objective == 0.0
    assert len(solution.measure) == 0


def test_negative_target():
    with pytest.raises(FormatError):
        MajorantProblem.of({DyadicBox.of("0"): -1.0})


def test_constant_targets_scale_the_capacity():
    boxes = [DyadicBox.of("00", "1"), DyadicBox.of("1", "01")]
    unit = min_energy_majorant(MajorantProblem.uniform(boxes)).objective
    scaled = min_energy_majorant(MajorantProblem.uniform(boxes, 3.0)).objective
    assert scaled == pytest.approx(9.0 * unit, rel=1e-9)
