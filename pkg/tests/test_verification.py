"""
Tests de la suite de vérification : chaque contrôle doit pouvoir échouer
quand le modèle est faussé.
"""
from dataclasses import replace

from src.data_ingestion.scenario_loader import parse_scenario, shipped_scenario
from src.numerics.grid import Grid
from src.pricing.profit import marginal_profit
from src.reporting import verification
from src.reporting.verification import check_proposition2, check_threshold, find_threshold


def test_proposition2_checks_dampening(monkeypatch):
    """ρ convexe : total − (φ − c) = N·ρ′ < 0 ; un profit marginal sans amortissement est détecté."""
    scenario = parse_scenario(shipped_scenario("fig2"))
    found = find_threshold(scenario)
    assert check_proposition2(scenario, found).passed

    def without_dampening(n, ta):
        mp = marginal_profit(n, ta)
        return replace(mp, total=mp.part_i) if mp.alpha == 0 else mp

    monkeypatch.setattr(verification, "marginal_profit", without_dampening)
    result = check_proposition2(scenario, found)
    assert not result.passed
    assert "first at N=1" in result.detail


def test_threshold_check_edge_equality():
    """π = ρ exactement en N = 25, borne de la grille : aucune bascule à signaler."""
    base = parse_scenario(shipped_scenario("fig1"))
    for lo, hi in ((25.0, 100.0), (1.0, 25.0)):
        scenario = base.with_grid(Grid(lo, hi, 76))
        found = find_threshold(scenario)
        assert found is None
        assert check_threshold(scenario, found).passed
