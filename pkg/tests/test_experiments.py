import json

import pytest

from scripts.construct import dump_F, dump_nazarov, dump_nu
from scripts.run_experiment import main
from src.capacity.options import SolverOptions
from src.constructions.small_energy import SemParams, build_nu
from src.errors import FormatError, HypothesisViolationError
from src.experiments.counterexamples import (
    cex_nazarov,
    cex_partial_energy,
    cex_small_energy,
    measure_q_range,
)
from src.experiments.diagnostics import (
    implied_constants,
    majorant_diagnostic,
    smp_diagnostic,
)
from src.experiments.levelset import levelset_bitree, levelset_measure
from src.experiments.runner import run_cells
from src.experiments.settings import get_experiment_config, load_experiment_config
from src.experiments.tree_suite import verify_oracles, verify_tree_positive
from src.potential.io import read_boxes, read_measure


@pytest.fixture
def config(small_config):
    return load_experiment_config(small_config)


@pytest.fixture
def q_range(config):
    return measure_q_range(config["q_range"]["s_values"])


def test_q_range(q_range):
    assert q_range.low <= 3.4375 and q_range.high >= 5.125
    assert q_range.low <= q_range.c <= q_range.high
    assert q_range.high / q_range.low <= 10.0


def test_config_sections(small_config):
    assert get_experiment_config("nazarov", small_config)["x"] == 4
    with pytest.raises(FormatError):
        get_experiment_config("missing", small_config)


# =======================================
# 1. Positive suites
# =======================================
def test_tree_suite(config):
    report = verify_tree_positive(11, config["tree_suite"])
    assert report.passed, report.measured
    assert len(report.rows) == config["tree_suite"]["capacitary_pairs"]


def test_oracle_suite(config):
    report = verify_oracles(11, config["oracle_suite"])
    assert report.passed, report.measured


# =======================================
# 2. Counterexamples
# =======================================
def test_small_energy(config, q_range):
    report = cex_small_energy([2], config["small_energy"], q_range, config["q_range"])
    assert report.verdicts["cap_at_most_one_s2"]
    assert report.verdicts["V_on_F_s2"]
    assert report.verdicts["q_range_bounded"]
    assert report.measured["symmetric_rel_diff_s2"] <= 1e-6
    assert report.measured["conj_ratio_s2"] > 0
    assert report.recheck()


def test_partial_energy(config, q_range):
    report = cex_partial_energy([2], config["partial_energy"], q_range, seed=3)
    assert report.measured["R_s2"] > 0
    assert report.verdicts["sanity_s2"]
    assert report.verdicts["control_on_T"]


def test_nazarov(config):
    report = cex_nazarov(4, [3, 4], config["nazarov"])
    assert report.measured["cmeas_M4"] == pytest.approx(7.375)
    for name in (
        "poset_agrees_M3",
        "ledger_sums_to_V",
        "mlarge_bounded",
        "sides_small",
        "S_increasing",
        "normalized_positive",
    ):
        assert report.verdicts[name], name
    assert [row["M"] for row in report.rows] == [3, 4]


def test_levelset(config, q_range):
    report = levelset_bitree([2], config["levelset"], q_range)
    assert report.recheck()
    assert report.verdicts["witness_below_exact_s2"]
    assert report.verdicts["ratio_below_ceiling_s2"]
    # c log n / 4 is about c at s=2, far below a margin of 10
    assert report.measured["ratio_ceiling_s2"] == pytest.approx(q_range.c)
    assert report.measured["margin_reachable"] == 0.0
    assert "capT_violated" not in report.verdicts
    assert report.passed
    at_c = [row for row in report.rows if row["at_c_over_n"]]
    assert len(at_c) == 1
    assert at_c[0]["lower_bound"] > 0


def test_levelset_checks_the_margin_once_reachable(config, q_range):
    cfg = {**config["levelset"], "margin": 1.0}
    report = levelset_bitree([2], cfg, q_range)
    assert report.measured["margin_reachable"] == 1.0
    assert "capT_violated" in report.verdicts
    assert report.recheck()


def test_levelset_measure_names(q_range):
    with pytest.raises(FormatError):
        levelset_measure(SemParams(2, q_range.c), "uniform", SolverOptions())


# =======================================
# 3. Diagnostics
# =======================================
def test_implied_constants_scale_invariant():
    first = implied_constants(0.2, 4.0, 0.1, 1.0, [0.5])
    second = implied_constants(0.2 * 9, 4.0 * 9, 0.3, 3.0, [0.5])
    assert first["c0"] == pytest.approx(second["c0"])
    assert first["C_tau0.5"] == pytest.approx(second["C_tau0.5"])
    assert implied_constants(0.0, 4.0, 0.1, 1.0, [0.5])["C_tau0.5"] == 0.0


def test_smp_diagnostic(config, q_range):
    cfg = config["smp"]
    p = SemParams(cfg["s"], q_range.c)
    eps_grid = [factor * p.lam for factor in cfg["eps_factors"]]
    report = smp_diagnostic(build_nu(p), eps_grid, cfg["tau_values"])
    assert [row["eps"] for row in report.rows] == pytest.approx(eps_grid)
    assert all("levelset_bound_tau0.5" in row for row in report.rows)
    with pytest.raises(HypothesisViolationError):
        smp_diagnostic(build_nu(p), [4 * p.lam], cfg["tau_values"])


def test_majorant_diagnostic(config):
    report = majorant_diagnostic(5, config["majorant"])
    assert report.verdicts["g_superadditive"]
    assert report.verdicts["C_finite"]
    assert [row["depth"] for row in report.rows] == [4, 5]


# =======================================
# 4. Runner and CLI
# =======================================
@pytest.mark.parametrize("jobs", [1, 2])
def test_run_cells_keeps_order(jobs):
    assert run_cells(abs, [-3, 1, -2], jobs) == [3, 1, 2]


def test_cli_verify_tree(small_config, tmp_path):
    out = tmp_path / "reports" / "tree.json"
    code = main(
        ["verify", "tree", "--config", str(small_config), "--out", str(out), "--csv"]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["experiment"] == "verify_tree"
    assert "runtime_s" not in payload
    assert (tmp_path / "reports" / "tree_rows.csv").exists()


def test_cli_reports_failures(small_config, tmp_path):
    out = tmp_path / "x.json"
    code = main(
        ["smp-diagnostic", "--config", str(small_config), "--eps", "100", "--out", str(out)]
    )
    assert code == 1


def test_construction_dumps(tmp_path):
    (nu_file,) = dump_nu(2, tmp_path)
    assert read_measure(nu_file) == build_nu(SemParams(2))
    (F_file,) = dump_F(2, tmp_path)
    assert len(read_boxes(F_file)) == 16
    written = dump_nazarov(16, 2, atoms=True, families=True, out_dir=tmp_path)
    assert [p.name for p in written] == [
        "nazarov_n16_M2_q.txt",
        "nazarov_n16_M2_mu.txt",
        "nazarov_n16_M2_families.txt",
    ]
    assert read_measure(written[1]).total_mass == pytest.approx(1.0)
