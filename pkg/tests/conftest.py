"""Shared fixtures and hypothesis strategies."""

import json

import numpy as np
import pytest
from hypothesis import strategies as st

from src.config import DEFAULT_SEED
from src.lattice.dyadic import DyadicBox
from src.potential.measures import AtomicMeasure


def paths(max_depth: int = 6):
    return st.text(alphabet="01", max_size=max_depth)


def boxes(dimension: int = 2, max_depth: int = 6):
    return st.tuples(*[paths(max_depth)] * dimension).map(DyadicBox)


def box_lists(dimension: int = 2, max_depth: int = 6, max_size: int = 8):
    return st.lists(boxes(dimension, max_depth), min_size=1, max_size=max_size)


def measures(dimension: int = 2, max_depth: int = 6, max_atoms: int = 5):
    atom = st.tuples(
        boxes(dimension, max_depth),
        st.floats(min_value=0.05, max_value=1.0, allow_nan=False),
    )
    return st.lists(atom, min_size=1, max_size=max_atoms).map(
        lambda atoms: AtomicMeasure.from_atoms(atoms, dimension)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(DEFAULT_SEED)


@pytest.fixture
def small_config(tmp_path):
    """Experiment config scaled down for the test run."""
    config = {
        "tree_suite": {
            "max_depth": 5,
            "measure_trials": 25,
            "max_atoms": 6,
            "capacitary_pairs": 5,
            "max_set_size": 6,
            "x_points": 5,
            "capT_factor": 4.0,
            "rtol": 1e-12,
        },
        "oracle_suite": {
            "max_depth": 5,
            "measure_trials": 10,
            "max_atoms": 4,
            "dense_depth_t": 6,
            "dense_depth_t2": 3,
            "dense_trials": 3,
            "tree_sets": 10,
            "max_set_size": 6,
            "energy_rtol": 1e-9,
            "adjoint_rtol": 1e-12,
            "capacity_rtol": 1e-6,
        },
        "small_energy": {
            "s_values": [2],
            "growth_ratio": 1.5,
            "gap_tol": 1e-6,
            "kkt_tol": 1e-6,
        },
        "q_range": {"s_values": [2, 3], "max_ratio": 10.0},
        "partial_energy": {
            "s_values": [2],
            "growth_ratio": 1.5,
            "control_trials": 20,
            "control_depth": 6,
            "control_max_atoms": 6,
            "control_rtol": 1e-12,
        },
        "nazarov": {
            "x": 4,
            "M_values": [3, 4],
            "stability_factor": 2.0,
            "mlarge_bound": 6.0,
            "side_exponent": 0.75,
            "cross_check_max_M": 3,
            "cross_check_rtol": 1e-9,
        },
        "levelset": {
            "s_values": [2],
            "margin": 10.0,
            "growth_ratio": 1.5,
            "x_points": 4,
            "measure": "nu",
        },
        "smp": {
            "s": 2,
            "eps_factors": [0.25, 0.5, 1.0],
            "tau_values": [0.25, 0.5, 0.75],
        },
        "majorant": {
            "depths": [4, 5],
            "trials": 10,
            "max_atoms": 6,
            "kappa": 1.0,
            "delta_spread": 1.5,
            "stability_factor": 2.0,
        },
    }
    path = tmp_path / "experiments_config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return path
