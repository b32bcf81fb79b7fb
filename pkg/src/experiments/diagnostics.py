"""
Diagnostics without a pass/fail threshold of their own: the constants implied
by the surrogate maximum principle, and the majorant bound for superadditive
data on T.
"""

import math

import numpy as np

from src.capacity.majorant import MajorantProblem, min_energy_majorant
from src.capacity.options import SolverOptions
from src.config import POSET_BOX_CAP
from src.errors import ConvergenceError, HypothesisViolationError
from src.experiments.report import ExperimentReport
from src.experiments.sampling import random_measure
from src.potential.dense import DenseFunction, heap_box, is_superadditive
from src.potential.measures import AtomicMeasure
from src.potential.poset import build_relevant_poset
from src.utils.logger import LogEmoji, setup_logger

logger = setup_logger(__name__)

TAU_NOTE = (
    "C_tau follows E_eps <= C_tau eps^(1-tau) E^tau |nu|^(1-tau). The other "
    "convention in use puts tau on eps and 1-tau on E; read C_tau accordingly."
)


# =======================================
# 1. Surrogate maximum principle
# =======================================
def implied_constants(
    partial: float, full: float, eps: float, total: float, taus
) -> dict[str, float]:
    """
    c0 and C_tau that make the surrogate bounds hold with equality.

    Both are invariant under nu -> t nu, eps -> t eps.
    """
    if partial <= 0:
        return {"c0": 0.0, **{f"C_tau{tau:g}": 0.0 for tau in taus}}
    ratio = partial / (eps * total)
    out = {"c0": math.log(ratio) / math.sqrt(math.log(full / (eps * total)))}
    for tau in taus:
        scale = eps ** (1 - tau) * full**tau * total ** (1 - tau)
        out[f"C_tau{tau:g}"] = partial / scale
    return out


def smp_diagnostic(
    nu: AtomicMeasure, eps_grid, taus, budget: int = POSET_BOX_CAP
) -> ExperimentReport:
    """
    Implied c0(eps) and C_tau(eps) over an eps-grid, and the level-set bound
    C_tau |nu| / x^(1+tau) at x = eps (|nu| standing in for cap(E)).

    Raises:
        HypothesisViolationError: E[nu] < 2 eps |nu| for some eps in the grid
    """
    poset = build_relevant_poset(nu, budget)
    full = poset.energy()
    total = nu.total_mass
    report = ExperimentReport(
        "smp_diagnostic",
        parameters={
            "eps_grid": [float(e) for e in eps_grid],
            "tau_values": [float(t) for t in taus],
            "atoms": len(nu),
            "dimension": nu.dimension,
        },
    )
    report.note(TAU_NOTE)
    report.measure("energy", full)
    report.measure("total_mass", total)

    for eps in eps_grid:
        eps = float(eps)
        if full < 2 * eps * total:
            raise HypothesisViolationError(
                f"E[nu] = {full:.6g} < 2 eps |nu| = {2 * eps * total:.6g} at eps = {eps:.6g}"
            )
        partial = poset.partial_energy(eps)
        constants = implied_constants(partial, full, eps, total, taus)
        bounds = {
            f"levelset_bound_tau{tau:g}": constants[f"C_tau{tau:g}"]
            * total
            / eps ** (1 + tau)
            for tau in taus
        }
        report.add_row(eps=eps, partial_energy=partial, **constants, **bounds)
        logger.debug(f"{LogEmoji.DATA} eps={eps:.6g}: c0 = {constants['c0']:.6g}")
    return report


# =======================================
# 2. Majorant for superadditive data on T
# =======================================
def _majorant_trial(
    rng: np.random.Generator, depth: int, cfg: dict, opts: SolverOptions
) -> dict:
    """
    One instance: g = I*nu, f >= 0 on {I g <= delta}, constraints I phi >= I f
    on {2 lambda <= I g <= 4 lambda}, lambda = kappa delta.
    """
    nu = random_measure(rng, 1, depth, cfg["max_atoms"])
    g = DenseFunction.from_measure(nu, depth).hardy_down()
    G = g.hardy_up().values
    total = nu.total_mass
    delta = float(rng.uniform(total, cfg["delta_spread"] * total))
    lam = cfg["kappa"] * delta

    f = DenseFunction(rng.random(G.shape) * (G <= delta), depth)
    If = f.hardy_up().values
    S = np.flatnonzero((G >= 2 * lam) & (G <= 4 * lam))
    trial = {"superadditive": is_superadditive(g), "C": None, "converged": True}
    if not len(S):
        return trial

    problem = MajorantProblem.of({heap_box((int(i),)): float(If[i]) for i in S})
    try:
        solution = min_energy_majorant(problem, opts)
    except ConvergenceError:
        trial["converged"] = False
        return trial
    f_energy = float(np.sum(f.values**2))
    trial["C"] = solution.objective * lam**2 / (delta**2 * f_energy)
    return trial


def majorant_diagnostic(
    seed: int, cfg: dict, opts: SolverOptions = SolverOptions()
) -> ExperimentReport:
    """
    Measured C in sum phi^2 <= C (delta/lambda)^2 sum f^2 over random
    instances, its maximum compared between the configured depths.
    """
    rng = np.random.default_rng(seed)
    report = ExperimentReport("majorant", parameters=dict(cfg), seed=seed)

    worst: dict[int, float] = {}
    not_superadditive = nonfinite = instances = 0
    for depth in cfg["depths"]:
        values = []
        skipped = unconverged = 0
        for _ in range(cfg["trials"]):
            trial = _majorant_trial(rng, depth, cfg, opts)
            not_superadditive += not trial["superadditive"]
            if not trial["converged"]:
                unconverged += 1
            elif trial["C"] is None:
                skipped += 1
            elif not math.isfinite(trial["C"]):
                nonfinite += 1
            else:
                values.append(trial["C"])
        instances += len(values)
        worst[depth] = max(values) if values else math.nan
        report.measure(f"C_max_depth{depth}", worst[depth])
        report.add_row(
            depth=depth,
            instances=len(values),
            skipped_empty=skipped,
            unconverged=unconverged,
            C_max=worst[depth],
            C_median=float(np.median(values)) if values else math.nan,
        )
        logger.info(f"{LogEmoji.DATA} depth {depth}: max C = {worst[depth]:.6g}")

    report.measure("not_superadditive", not_superadditive)
    report.measure("nonfinite_C", nonfinite)
    report.measure("instances", instances)
    report.check("instances_found", "instances", ">", 0)
    report.check("g_superadditive", "not_superadditive", "==", 0)
    report.check("C_finite", "nonfinite_C", "==", 0)
    finite = [v for v in worst.values() if math.isfinite(v)]
    if len(finite) >= 2:
        report.measure("C_max_spread", max(finite) / min(finite))
        report.check("C_stable", "C_max_spread", "<=", cfg["stability_factor"])
    return report
