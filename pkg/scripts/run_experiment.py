"""
Run one verification suite or counterexample reproduction and write its report.

Usage (from the project root):
    python -m scripts.run_experiment verify tree
    python -m scripts.run_experiment cex small-energy --s 2,3
    python -m scripts.run_experiment cex nazarov --x 4 --M 4,6,8 --jobs 3
    python -m scripts.run_experiment levelset --s 3 --csv

The exit status is 0 when every verdict of the run holds, 1 otherwise.
"""

import argparse
import sys
import time
from pathlib import Path

from src.capacity.options import SolverOptions
from src.config import DEFAULT_SEED, KKT_TOL, MAX_SWEEPS, POSET_BOX_CAP, REPORTS_DIR
from src.constructions.small_energy import SemParams, build_nu
from src.experiments.counterexamples import (
    cex_nazarov,
    cex_partial_energy,
    cex_small_energy,
    measure_q_range,
)
from src.experiments.diagnostics import majorant_diagnostic, smp_diagnostic
from src.experiments.levelset import levelset_bitree
from src.experiments.report import ExperimentReport
from src.experiments.settings import load_experiment_config
from src.experiments.tree_suite import verify_oracles, verify_tree_positive
from src.potential.io import read_measure
from src.utils.emoji_log import data, done, error, info, save, task, verdict


def parse_list(text: str, kind=int) -> list:
    """'2,3' -> [2, 3]"""
    return [kind(token) for token in text.split(",") if token.strip()]


# =======================================
# 1. Experiment dispatch
# =======================================
def run(args: argparse.Namespace) -> ExperimentReport:
    config = load_experiment_config(args.config)
    opts = SolverOptions(
        kkt_tol=args.tol, max_sweeps=args.max_sweeps, matrix_free=args.matrix_free
    )

    if args.command == "verify":
        if args.suite == "tree":
            return verify_tree_positive(args.seed, config["tree_suite"], opts)
        return verify_oracles(args.seed, config["oracle_suite"], opts)

    if args.command == "majorant":
        return majorant_diagnostic(args.seed, config["majorant"], opts)

    q_range = measure_q_range(config["q_range"]["s_values"])
    info(f"lambda = c/n with c = {q_range.c:.6g} over s in {list(q_range.s_values)}")

    if args.command == "cex":
        if args.construction == "small-energy":
            cfg = config["small_energy"]
            s_values = parse_list(args.s) if args.s else cfg["s_values"]
            return cex_small_energy(s_values, cfg, q_range, config["q_range"], opts)
        if args.construction == "partial-energy":
            cfg = config["partial_energy"]
            s_values = parse_list(args.s) if args.s else cfg["s_values"]
            return cex_partial_energy(s_values, cfg, q_range, args.seed, args.budget)
        cfg = config["nazarov"]
        x = args.x if args.x is not None else cfg["x"]
        M_values = parse_list(args.M) if args.M else cfg["M_values"]
        return cex_nazarov(x, M_values, cfg, args.budget, args.jobs)

    if args.command == "levelset":
        cfg = config["levelset"]
        s_values = parse_list(args.s) if args.s else cfg["s_values"]
        measure = args.measure or cfg["measure"]
        return levelset_bitree(s_values, cfg, q_range, measure, opts)

    # smp-diagnostic
    cfg = config["smp"]
    taus = parse_list(args.tau, float) if args.tau else cfg["tau_values"]
    if args.measure_file:
        nu = read_measure(Path(args.measure_file))
        if not args.eps:
            raise ValueError("--eps is required with --measure-file")
        eps_grid = parse_list(args.eps, float)
    else:
        p = SemParams(args.s_single or cfg["s"], q_range.c)
        nu = build_nu(p)
        eps_grid = (
            parse_list(args.eps, float)
            if args.eps
            else [factor * p.lam for factor in cfg["eps_factors"]]
        )
    return smp_diagnostic(nu, eps_grid, taus, args.budget)


def report_summary(report: ExperimentReport) -> None:
    for name in sorted(report.measured):
        data(f"{name} = {report.measured[name]:.10g}")
    for name in sorted(report.verdicts):
        verdict(name, report.verdicts[name])
    for note in report.notes:
        info(note)


# =======================================
# 2. CLI
# =======================================
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=str, default=None, help="Report JSON path")
    common.add_argument("--csv", action="store_true", help="Also write CSV tables")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=KKT_TOL, help="KKT tolerance")
    common.add_argument("--max-sweeps", type=int, default=MAX_SWEEPS)
    common.add_argument("--matrix-free", action="store_true")
    common.add_argument(
        "--budget", type=int, default=POSET_BOX_CAP, help="Relevant-poset box cap"
    )
    common.add_argument("--jobs", type=int, default=1, help="Worker processes")
    common.add_argument("--config", type=str, default=None, help="Experiment config")
    common.add_argument("--include-runtime", action="store_true")

    parser = argparse.ArgumentParser(
        description="Potential-theory experiments on dyadic trees and bi-trees"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[common], help="Positive suites")
    verify.add_argument("suite", choices=["tree", "oracle"])

    cex = commands.add_parser("cex", parents=[common], help="Counterexamples on T^2")
    cex.add_argument(
        "construction", choices=["small-energy", "partial-energy", "nazarov"]
    )
    cex.add_argument("--s", type=str, default=None, help="e.g. 2,3")
    cex.add_argument("--x", type=int, default=None)
    cex.add_argument("--M", type=str, default=None, help="e.g. 4,6,8")

    levelset = commands.add_parser("levelset", parents=[common], help="C(x) on T^2")
    levelset.add_argument("--s", type=str, default=None)
    levelset.add_argument("--measure", choices=["nu", "equilibrium"], default=None)

    smp = commands.add_parser(
        "smp-diagnostic", parents=[common], help="Implied surrogate constants"
    )
    smp.add_argument("--s", dest="s_single", type=int, default=None)
    smp.add_argument("--eps", type=str, default=None, help="Explicit eps values")
    smp.add_argument("--tau", type=str, default=None, help="e.g. 0.25,0.5,0.75")
    smp.add_argument("--measure-file", type=str, default=None)

    commands.add_parser("majorant", parents=[common], help="Majorant diagnostic on T")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        task(f"Running {args.command} ...")
        start = time.perf_counter()
        report = run(args)
        report.runtime_s = time.perf_counter() - start

        report_summary(report)
        out = Path(args.out) if args.out else REPORTS_DIR / f"{report.experiment}.json"
        for path in report.save(out, csv=args.csv, include_runtime=args.include_runtime):
            save(f"Report saved at: {path}")

        done(f"{report.experiment} finished in {report.runtime_s:.1f}s")
        if not report.passed:
            error(f"{sum(not v for v in report.verdicts.values())} verdict(s) failed")
            return 1
        return 0

    except Exception as e:
        error(f"Experiment failed: {str(e)}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
