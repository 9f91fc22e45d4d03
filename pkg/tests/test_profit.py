import numpy as np
import pytest

from src.errors import DomainError, KinkError, ValidationError
from src.numerics.differentiation import fd_derivative
from src.pricing.fees import par_fee
from src.pricing.profit import (
    marginal_profit,
    naive_marginal_profit,
    profit,
    stabilized_fee_schedule,
)


def test_profit_identity(baseline):
    """Π(N) = N·(φ − c) − F, et Π(0) = −F."""
    assert profit(0.0, baseline) == -1000.0
    assert profit(100.0, baseline) == 100.0 * (100.0 - 20.0) - 1000.0


def test_marginal_profit_publish_regime(baseline):
    """α = 1 : dΠ/dN = (φ − c) + N·π′, la partie amplifiée est positive."""
    mp = marginal_profit(100.0, baseline)
    assert mp.alpha == 1
    assert mp.part_i == 80.0
    assert mp.part_ii == pytest.approx(0.5)
    assert mp.part_iii == 0.0
    assert mp.total == pytest.approx(130.0)
    assert mp.total > naive_marginal_profit(100.0, baseline)


def test_marginal_profit_read_regime_constant_rho(baseline):
    """α = 0 et ρ constant : la dérivée se réduit à ρ − c."""
    mp = marginal_profit(16.0, baseline)
    assert mp.alpha == 0
    assert mp.total == 30.0
    assert mp.total == naive_marginal_profit(16.0, baseline)


def test_marginal_profit_read_regime_convex_rho(hyperbolic_ta):
    """α = 0 et ρ(N) décroissante : la dérivée est inférieure à φ − c."""
    mp = marginal_profit(900.0, hyperbolic_ta)
    assert mp.total == pytest.approx(0.0, abs=1e-9)
    assert mp.total < mp.part_i


def test_marginal_profit_matches_finite_difference(hyperbolic_ta):
    for n in (10.0, 500.0, 1500.0, 3000.0, 15000.0):
        numeric = fd_derivative(lambda x: profit(x, hyperbolic_ta), n)
        assert marginal_profit(n, hyperbolic_ta).total == pytest.approx(numeric, abs=1e-4)


def test_marginal_profit_errors(baseline):
    with pytest.raises(KinkError):
        marginal_profit(25.0, baseline)
    with pytest.raises(DomainError):
        marginal_profit(0.0, baseline)


def test_stabilized_schedule_keeps_profit_constant(hyperbolic_ta):
    """Sur [1000, 4000] le profit reste égal à Π(4000) ; hors de l'intervalle, tarif PAR."""
    schedule = stabilized_fee_schedule(hyperbolic_ta, 1000, 4000)
    target = profit(4000.0, hyperbolic_ta)
    assert schedule.target_profit == target
    for n in np.linspace(1000, 4000, 31):
        assert schedule.profit(float(n)) == pytest.approx(target, rel=1e-9)
    assert schedule.fee(500.0) == par_fee(500.0, hyperbolic_ta).fee
    assert schedule(1000.0) == pytest.approx(20.0 + (target + 1000.0) / 1000.0)
    assert schedule.contains(4000.0) and not schedule.contains(4000.5)


def test_stabilized_schedule_explicit_target(baseline):
    schedule = stabilized_fee_schedule(baseline, 100, 200, target_profit=5000.0)
    assert schedule.profit(150.0) == pytest.approx(5000.0)


def test_stabilized_schedule_rejects_bad_interval(baseline):
    with pytest.raises(ValidationError):
        stabilized_fee_schedule(baseline, 0, 100)
    with pytest.raises(ValidationError):
        stabilized_fee_schedule(baseline, 200, 100)


def test_profit_examples(baseline):
    assert profit(100.0, baseline) == 7000.0
    assert profit(9.0, baseline) == -730.0


def test_stabilized_fee_examples(baseline):
    """c = 20, F = 1000, Π* = Π(100) = 7000 : φ̂(100) = 100, φ̂(80) = 120."""
    schedule = stabilized_fee_schedule(baseline, 50, 100)
    assert schedule.target_profit == 7000.0
    assert schedule.fee(100.0) == 100.0
    assert schedule.fee(80.0) == 120.0
    # Π* = −F : le tarif retombe au coût marginal
    at_cost = stabilized_fee_schedule(baseline, 50, 100, target_profit=-1000.0)
    assert at_cost.fee(70.0) == 20.0
