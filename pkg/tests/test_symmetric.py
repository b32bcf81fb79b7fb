import numpy as np
import pytest

from src.capacity.dual import capacity_lower_bound, dual_capacity
from src.constructions.small_energy import (
    SemParams,
    build_F,
    build_nu,
    f_family,
    nu_family,
    nu_profile,
)
from src.constructions.symmetric import (
    CornerFamily,
    SymmetricProfile,
    corner_level_set,
    expand_profile,
    symmetric_capacity,
    symmetric_energy_and_potential,
)
from src.errors import ConstructionError
from src.experiments.counterexamples import measure_q_range
from src.potential.measures import energy, potential, potentials


def test_symmetric_capacity_matches_full_solve():
    p = SemParams(2)
    sym = symmetric_capacity(f_family(p))
    full = dual_capacity(build_F(p))
    assert sym.value == pytest.approx(full.cap_value, rel=1e-6)
    assert sym.value >= capacity_lower_bound(build_nu(p), build_F(p))
    assert sym.value <= 1.0


def test_expanded_profile_matches_reduction():
    family = f_family(SemParams(2))
    profile = SymmetricProfile.of([0.1, 0.2, 0.3, 0.4])
    nu = expand_profile(family, profile)
    reduced_energy, values = symmetric_energy_and_potential(family, profile)
    assert energy(nu) == pytest.approx(reduced_energy, rel=1e-12)
    for j in range(family.square_count):
        np.testing.assert_allclose(potentials(nu, family.boxes(j)), values, rtol=1e-12)


def test_staircase_is_the_corner_level_set():
    p = SemParams(2, measure_q_range([2, 3]).c)
    nu = build_nu(p)
    stairs = corner_level_set(nu_family(p), nu_profile(p), p.lam)
    assert len(stairs)
    for box in stairs.boxes(0):
        assert potential(nu, box) >= p.lam
        for axis in range(2):
            if len(box.paths[axis]) > p.square_depth:
                assert potential(nu, box.parent(axis)) < p.lam


def test_family_validation():
    with pytest.raises(ConstructionError):
        CornerFamily(-1, ((0, 0),))
    with pytest.raises(ConstructionError):
        SymmetricProfile.of([-0.5])
    with pytest.raises(ConstructionError):
        symmetric_capacity(CornerFamily(2, ()))
