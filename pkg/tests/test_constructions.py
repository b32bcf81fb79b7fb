from collections import Counter

import numpy as np
import pytest

from src.constructions.nazarov import (
    NazarovParams,
    build_nazarov,
    classify_containing_box,
    contribution_ledger,
    count_side_rectangles,
    family_size,
    full_grid_size,
    max_q_potential,
    off_square_sums,
    q_potentials as nazarov_q_potentials,
    restricted_partial_energy,
    restricted_partial_energy_on_poset,
    total_family_size,
)
from src.constructions.small_energy import (
    SemParams,
    build_F,
    build_nu,
    diagonal_square,
    scaled_q_potentials,
    q_box,
    q_potentials,
)
from src.constructions.symmetric import off_square_constant
from src.errors import ConstructionError
from src.lattice.dyadic import corner_box
from src.potential.measures import box_mass, potentials
from src.potential.poset import build_relevant_poset


# =======================================
# 1. Small-energy construction
# =======================================
def test_small_energy_parameters():
    p = SemParams(2)
    assert (p.logn, p.n, p.square_depth, p.square_count) == (4, 16, 2, 4)
    assert p.delta == 1 / 64
    assert build_nu(p).total_mass == pytest.approx(p.delta)
    assert box_mass(build_nu(p), diagonal_square(p, 1)) == 1 / 256
    assert len(build_F(p)) == 16
    with pytest.raises(ConstructionError):
        SemParams(1)
    with pytest.raises(ConstructionError):
        p.lam
    assert SemParams(2, 5.0).lam == 5.0 / 16


def test_scaled_q_potentials():
    np.testing.assert_allclose(
        scaled_q_potentials(SemParams(2)), [5.125, 3.8125, 3.4375, 3.8125]
    )


@pytest.mark.parametrize("s", [2, 3])
def test_closed_form_potentials_match_engine(s):
    p = SemParams(s)
    boxes = [q_box(p, j, k) for j in (0, p.square_count - 1) for k in range(p.logn)]
    engine = potentials(build_nu(p), boxes).reshape(2, p.logn)
    np.testing.assert_allclose(engine[0], q_potentials(p), rtol=1e-12)
    np.testing.assert_allclose(engine[1], q_potentials(p), rtol=1e-12)


def test_q_box_range():
    with pytest.raises(ConstructionError):
        q_box(SemParams(2), 0, 4)


# =======================================
# 2. Unbounded partial energy at fixed x
# =======================================
def test_off_square_constant():
    assert off_square_constant(2) == 6
    assert off_square_constant(4) == 58
    assert off_square_constant(5) == 141


@pytest.mark.parametrize("M", [1, 3, 5])
def test_off_square_sums_are_uniform(M):
    p = NazarovParams.from_x(4, M)
    np.testing.assert_array_equal(off_square_sums(p), off_square_constant(M))


def test_parameter_checks():
    with pytest.raises(ConstructionError):
        NazarovParams(48, 2)
    with pytest.raises(ConstructionError):
        NazarovParams(8, 2)
    with pytest.raises(ConstructionError):
        NazarovParams(16, 0)
    assert NazarovParams.from_x(4, 4) == NazarovParams(64, 4)


def test_measured_constant():
    p = NazarovParams(64, 4)
    assert p.x == 4
    assert max_q_potential(p) == pytest.approx(29.5)
    assert max_q_potential(p) / p.x == pytest.approx(7.375)


def test_family_windows_are_disjoint():
    p = NazarovParams(64, 4)
    construction = build_nazarov(p)
    seen = set()
    for j, i, boxes in construction.families():
        assert len(boxes) == family_size(p, i) <= full_grid_size(p, i)
        seen.update(boxes)
    assert len(seen) == total_family_size(p)


def test_restricted_energy_counts_every_box_below_a_large_threshold():
    p = NazarovParams(32, 2)
    result = restricted_partial_energy(p, threshold=np.inf)
    assert result.boxes_counted == result.boxes_seen == total_family_size(p)
    assert result.value == pytest.approx(total_family_size(p) * 2.0 ** (-2 * p.M))


def test_restricted_energy_matches_poset():
    p = NazarovParams(16, 2)
    construction = build_nazarov(p)
    poset = build_relevant_poset(construction.measure)
    threshold = max_q_potential(p)
    closed = restricted_partial_energy(p, threshold)
    assert restricted_partial_energy_on_poset(
        construction, poset, threshold
    ) == pytest.approx(closed.value, rel=1e-12)
    for i, box in enumerate(corner_box("00", depth) for depth in ((16, 1), (8, 2))):
        assert poset.potential_of(box) == pytest.approx(nazarov_q_potentials(p)[i])


@pytest.mark.parametrize("i", range(6))
def test_ledger_classes(i):
    p = NazarovParams(64, 4)
    box = corner_box("0000", (p.n >> i, 1 << i))
    classes = Counter(classify_containing_box(p, i, r) for r in box.ancestors())
    counts = count_side_rectangles(p, i)
    assert classes["main"] == counts.main
    assert classes["tall"] == counts.tall
    assert classes["long"] == counts.long
    assert classes["other_vertical"] == counts.other_vertical
    assert classes["other_horizontal"] == counts.other_horizontal
    assert [classes[f"mlarge:{k}"] for k in range(p.M + 1)] == list(counts.mlarge)
    assert sum(classes.values()) == box.ancestor_count


@pytest.mark.parametrize("i", range(6))
def test_ledger_sums_to_potential(i):
    ledger = contribution_ledger(NazarovParams(64, 4), i)
    parts = [ledger[key] for key in ("main", "tall", "long", "mlarge", "remaining")]
    assert sum(parts) == pytest.approx(ledger["total"], rel=1e-12)
    assert ledger["mlarge"] <= 6.0
