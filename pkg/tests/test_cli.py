import io

import pandas as pd
import pytest

from src.cli import main
from src.data_ingestion.scenario_loader import SCENARIO_DIR, parse_scenario, shipped_scenario
from src.reporting.tables import CURVE_COLUMNS, DUOPOLY_COLUMNS, curve_table, export_csv
from src.reporting.verification import run_verification


def _csv(capsys):
    return pd.read_csv(io.StringIO(capsys.readouterr().out))


# ---------------------------
# threshold
# ---------------------------
def test_threshold_baseline(capsys):
    assert main(["threshold", "--scenario", "fig1"]) == 0
    out = capsys.readouterr().out
    assert "N_tilde = 25.000000" in out
    assert "bracket = [1, 250]" in out


def test_threshold_without_switch(capsys):
    assert main(["threshold", "--scenario", "no_switch"]) == 0
    assert "no regime switch in [1,1000]; alpha = 1 throughout" in capsys.readouterr().out


def test_threshold_hyperbolic(capsys):
    assert main(["threshold", "--scenario", "fig2", "--tol", "1e-10"]) == 0
    out = capsys.readouterr().out
    assert "N_tilde = 2088.289" in out


# ---------------------------
# fee-curve / profit-curve
# ---------------------------
def test_fee_curve_fig1(capsys):
    """Le tarif suit ρ sous Ñ = 25 et π au-dessus."""
    assert main(["fee-curve", "--scenario", "fig1"]) == 0
    table = _csv(capsys)
    assert list(table.columns) == CURVE_COLUMNS
    assert table["N"].is_monotonic_increasing
    below, above = table[table["N"] < 25], table[table["N"] > 25]
    assert (below["fee"] == below["rho"]).all()
    assert (above["fee"] == above["pi"]).all()
    assert (below["alpha"] == 0).all() and (above["alpha"] == 1).all()


def test_fee_curve_fig2_minimum_near_threshold(capsys):
    assert main(["fee-curve", "--scenario", "fig2"]) == 0
    table = _csv(capsys)
    n_min = table.loc[table["fee"].idxmin(), "N"]
    step = table["N"].iloc[1] - table["N"].iloc[0]
    assert abs(n_min - 2088.289) <= step


def test_profit_curve_zero_row(capsys):
    """Ligne N = 0 : Π = −F."""
    assert main(["profit-curve", "--scenario", "fig3"]) == 0
    table = _csv(capsys)
    first = table.iloc[0]
    assert first["N"] == 0.0
    assert first["profit"] == -20000.0
    assert pd.isna(first["marginal_profit"])


def test_csv_is_byte_deterministic(tmp_path, capsys):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["fee-curve", "--scenario", "fig2", "--out", str(first)]) == 0
    assert main(["fee-curve", "--scenario", "fig2", "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert b"\r\n" not in first.read_bytes()
    assert f"written: {first}" in capsys.readouterr().out


def test_grid_override(capsys):
    assert main(["fee-curve", "--scenario", "fig1", "--grid", "10:40:4"]) == 0
    assert list(_csv(capsys)["N"]) == [10.0, 20.0, 30.0, 40.0]


def test_export_csv_returns_text_without_path():
    text = export_csv(curve_table(parse_scenario(shipped_scenario("fig1"))))
    assert text.splitlines()[0] == ",".join(CURVE_COLUMNS)


# ---------------------------
# duopoly / stabilize
# ---------------------------
def test_duopoly_csv(tmp_path):
    out = tmp_path / "nested" / "convex.csv"
    assert main(["duopoly", "--scenario", "prop3_convex_rho", "--out", str(out)]) == 0
    table = pd.read_csv(out)
    assert list(table.columns) == DUOPOLY_COLUMNS
    assert set(table["prop3_case"]) == {"alpha0_convex_rho"}
    assert set(table["prop3_sign"]) == {"negative"}


def test_duopoly_missing_budget(tmp_path, capsys):
    text = shipped_scenario("prop3_alpha1").read_text(encoding="utf-8")
    path = tmp_path / "no_budget.ini"
    path.write_text(text.replace("budget = 450000\n", ""), encoding="utf-8")
    assert main(["duopoly", "--scenario", str(path)]) == 2
    assert "market.budget: budget required" in capsys.readouterr().err


def test_stabilize(capsys):
    assert main(["stabilize", "--scenario", "fig3"]) == 0
    table = _csv(capsys)
    inside = table[table["in_interval"] == 1]
    assert inside["N"].min() == 1000.0 and inside["N"].max() == 4000.0
    assert inside["stabilized_profit"].max() - inside["stabilized_profit"].min() < 1e-6


def test_stabilize_requires_section(capsys):
    assert main(["stabilize", "--scenario", "fig1"]) == 2
    assert "stabilize" in capsys.readouterr().err


# ---------------------------
# verify et codes de sortie
# ---------------------------
@pytest.mark.parametrize("name", sorted(p.stem for p in SCENARIO_DIR.glob("*.ini")))
def test_verify_shipped_scenarios(name, capsys):
    """Tous les scénarios livrés passent la vérification (test de fumée)."""
    code = main(["verify", "--scenario", name])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "FAIL" not in out


@pytest.mark.parametrize("grid, alpha", [("25:100:76", 1), ("1:25:25", 0)])
def test_verify_threshold_on_grid_edge(grid, alpha, capsys):
    """Ñ = 25 tombe sur une borne de la grille : pas de bascule intérieure, vérification en succès."""
    code = main(["verify", "--scenario", "fig1", "--grid", grid])
    out = capsys.readouterr().out
    assert code == 0, out
    lo, hi = grid.split(":")[:2]
    assert f"[PASS] threshold: no regime switch in [{lo},{hi}]; alpha = {alpha} throughout" in out


def test_verify_reports_duopoly_checks():
    report = run_verification(parse_scenario(shipped_scenario("prop3_fixed_rho")))
    names = {check.name for check in report.checks}
    assert {"budget_conservation", "publication_conservation", "eq9_identity",
            "proposition3", "squeeze"} <= names
    assert report.passed


def test_verify_zero_deriv_tol_fails(capsys):
    assert main(["verify", "--scenario", "fig1", "--tol", "0"]) == 1
    out = capsys.readouterr().out
    assert "[FAIL] fee_derivative" in out


def test_convex_publish_is_config_error(tmp_path, capsys):
    text = shipped_scenario("fig1").read_text(encoding="utf-8").replace("gamma = 0.5", "gamma = 1.5")
    path = tmp_path / "convex.ini"
    path.write_text(text, encoding="utf-8")
    assert main(["verify", "--scenario", str(path)]) == 2
    assert "ta.publish: courbe publish non concave" in capsys.readouterr().err


def test_bad_grid_flag(capsys):
    assert main(["fee-curve", "--scenario", "fig1", "--grid", "5:1:10"]) == 2
    assert "--grid" in capsys.readouterr().err


def test_io_errors(tmp_path, capsys):
    assert main(["threshold", "--scenario", str(tmp_path / "missing.ini")]) == 3
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["fee-curve", "--scenario", "fig1", "--out", str(blocker / "out.csv")]) == 3
