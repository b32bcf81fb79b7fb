"""
Randomized suites that must pass: the tree bounds on T and the agreement of
the independent evaluation paths (closed form, poset, dense lattice, solvers).
"""

import math

import numpy as np

from src.capacity.dual import dual_capacity
from src.capacity.level_set import level_set_capacity
from src.capacity.options import SolverOptions
from src.capacity.tree import tree_capacity_exact
from src.experiments.report import ExperimentReport
from src.experiments.sampling import (
    random_box_set,
    random_dense,
    random_measure,
    random_tree_measure,
)
from src.potential.dense import DenseFunction, cut_deficit, heap_index
from src.potential.measures import energy, potentials
from src.potential.poset import build_relevant_poset, potentials_by_recursion
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)


def _relative(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


# =======================================
# 1. Bounds on T
# =======================================
def _tree_measure_trial(rng: np.random.Generator, cfg: dict) -> dict:
    """One random measure: maximum principle, V_delta, E_delta and the cut bound."""
    depth, rtol = cfg["max_depth"], cfg["rtol"]
    nu = random_tree_measure(rng, depth, cfg["max_atoms"])
    g = DenseFunction.from_measure(nu, depth).hardy_down()
    V = g.hardy_up().values
    total = nu.total_mass

    atoms = [heap_index(box.paths[0]) for box in nu.boxes]
    top = float(V[atoms].max())
    violations = {"max_principle": 0, "truncated": 0, "partial_energy": 0, "cut": 0}

    # maximum principle for nu scaled to V <= 1 on its support
    if np.max(V) / top > 1 + rtol:
        violations["max_principle"] = 1

    delta = float(rng.uniform(0.0, 1.0)) * float(V.max())
    truncated = DenseFunction(g.values * (V <= delta), depth).hardy_up().values
    if truncated.max() > delta * (1 + rtol):
        violations["truncated"] = 1

    poset = build_relevant_poset(nu)
    if poset.partial_energy(delta) > delta * total * (1 + rtol):
        violations["partial_energy"] = 1

    x = float(rng.uniform(total, max(total, float(V.max()))))
    cut = DenseFunction(g.values * (V <= x), depth).hardy_up().values
    if np.any(cut[V >= x] < x / 2 * (1 - rtol)):
        violations["cut"] = 1
    return violations


def _capacitary_trial(
    rng: np.random.Generator, cfg: dict, opts: SolverOptions
) -> tuple[int, float]:
    """C(x) <= factor |nu| / x on a grid of x for the equilibrium of a random E."""
    E = random_box_set(rng, 1, cfg["max_depth"], cfg["max_set_size"])
    cert = tree_capacity_exact(E)
    nu = cert.equilibrium
    total = nu.total_mass

    violations = 0
    worst = 0.0
    for x in np.geomspace(total, 1.0, cfg["x_points"]):
        C = level_set_capacity(nu, float(x), opts=opts).value
        bound = cfg["capT_factor"] * total / x
        worst = max(worst, C / bound)
        if C > bound * (1 + 1e-9):
            violations += 1
    return violations, worst


def verify_tree_positive(
    seed: int, cfg: dict, opts: SolverOptions = SolverOptions()
) -> ExperimentReport:
    """
    Maximum principle, V_delta <= delta, E_delta <= delta |mu|, the cut bound
    and C(x) <= 4 cap(E) / x on random instances on T.
    """
    rng = np.random.default_rng(seed)
    report = ExperimentReport("verify_tree", parameters=dict(cfg), seed=seed)
    totals = {"max_principle": 0, "truncated": 0, "partial_energy": 0, "cut": 0}
    for _ in range(cfg["measure_trials"]):
        for name, count in _tree_measure_trial(rng, cfg).items():
            totals[name] += count
    logger.info(f"{LogEmoji.DATA} {cfg['measure_trials']} measures on T checked")

    capT = 0
    worst = 0.0
    for pair in range(cfg["capacitary_pairs"]):
        violations, ratio = _capacitary_trial(rng, cfg, opts)
        capT += violations
        worst = max(worst, ratio)
        report.add_row(pair=pair, capT_violations=violations, worst_ratio=ratio)
    logger.info(f"{LogEmoji.DATA} {cfg['capacitary_pairs']} capacitary pairs checked")

    for name, count in totals.items():
        report.measure(f"violations_{name}", count)
        report.check(name, f"violations_{name}", "==", 0)
    report.measure("violations_capT", capT)
    report.measure("capT_worst_ratio", worst)
    report.check("capT", "violations_capT", "==", 0)
    return report


# =======================================
# 2. Agreement of the evaluation paths
# =======================================
def _energy_paths(nu) -> tuple[float, float]:
    """Largest relative spread among the energy paths, and the potential recursion error."""
    poset = build_relevant_poset(nu)
    by_kernel = energy(nu)
    by_poset = poset.energy()
    by_atoms = math.fsum(nu.mass_array * potentials(nu, list(nu.boxes)))
    spread = max(
        _relative(by_kernel, by_poset),
        _relative(by_kernel, by_atoms),
        _relative(by_poset, by_atoms),
    )
    recursion = potentials_by_recursion(poset)
    scale = float(np.max(np.abs(poset.potential)))
    recursion_error = float(np.max(np.abs(recursion - poset.potential))) / scale
    return spread, recursion_error


def _adjoint_error(rng: np.random.Generator, dimension: int, depth: int) -> float:
    """|<I f, g> - <f, I* g>| relative to the pairing."""
    f = random_dense(rng, dimension, depth)
    g = random_dense(rng, dimension, depth)
    return _relative(f.hardy_up().pair(g), f.pair(g.hardy_down()))


def _cut_error(rng: np.random.Generator, dimension: int, depth: int) -> float:
    """Deficit of the cut inequality for a random g >= 0, relative to lambda."""
    g = random_dense(rng, dimension, depth)
    lam = float(rng.uniform(0.0, 1.0)) * float(g.hardy_up().values.max())
    return cut_deficit(g, lam) / lam if lam > 0 else 0.0


def verify_oracles(
    seed: int, cfg: dict, opts: SolverOptions = SolverOptions()
) -> ExperimentReport:
    """
    Kernel, poset and atom energies agree; I and I* are adjoint and satisfy the
    cut inequality; dual = tree on T with weak duality and a monotone objective.
    """
    rng = np.random.default_rng(seed)
    report = ExperimentReport("verify_oracle", parameters=dict(cfg), seed=seed)

    energy_spread = recursion_error = dense_error = 0.0
    for _ in range(cfg["measure_trials"]):
        nu = random_measure(rng, 2, cfg["max_depth"], cfg["max_atoms"])
        spread, rec = _energy_paths(nu)
        energy_spread = max(energy_spread, spread)
        recursion_error = max(recursion_error, rec)
        dense = DenseFunction.from_measure(nu, cfg["max_depth"]).hardy_down()
        dense_energy = float(np.sum(dense.values**2))
        dense_error = max(dense_error, _relative(dense_energy, energy(nu)))

    adjoint = cut = 0.0
    for _ in range(cfg["dense_trials"]):
        adjoint = max(
            adjoint,
            _adjoint_error(rng, 1, cfg["dense_depth_t"]),
            _adjoint_error(rng, 2, cfg["dense_depth_t2"]),
        )
        cut = max(cut, _cut_error(rng, 2, cfg["dense_depth_t2"]))

    capacity = 0.0
    weak_duality_failures = nonmonotone = 0
    for _ in range(cfg["tree_sets"]):
        E = random_box_set(rng, 1, cfg["max_depth"], cfg["max_set_size"])
        exact = tree_capacity_exact(E).cap_value
        solved = dual_capacity(E, opts)
        capacity = max(capacity, _relative(exact, solved.cap_value))
        weak_duality_failures += not solved.weak_duality
        nonmonotone += not solved.objective_monotone()

    report.measure("energy_rel_spread", energy_spread)
    report.measure("dense_energy_rel_error", dense_error)
    report.measure("recursion_rel_error", recursion_error)
    report.measure("adjoint_rel_error", adjoint)
    report.measure("cut_rel_deficit", cut)
    report.measure("dual_vs_tree_rel_error", capacity)
    report.measure("weak_duality_failures", weak_duality_failures)
    report.measure("nonmonotone_objectives", nonmonotone)
    report.check("energy_paths", "energy_rel_spread", "<=", cfg["energy_rtol"])
    report.check("dense_energy", "dense_energy_rel_error", "<=", cfg["energy_rtol"])
    report.check("recursion", "recursion_rel_error", "<=", cfg["energy_rtol"])
    report.check("adjoint", "adjoint_rel_error", "<=", cfg["adjoint_rtol"])
    report.check("cut", "cut_rel_deficit", "<=", cfg["adjoint_rtol"])
    report.check("dual_vs_tree", "dual_vs_tree_rel_error", "<=", cfg["capacity_rtol"])
    report.check("weak_duality", "weak_duality_failures", "==", 0)
    report.check("objective_monotone", "nonmonotone_objectives", "==", 0)
    return report
