import math

import pytest

from src.errors import DomainError, NoRootError, ValidationError
from src.pricing.curves import CurveSpec
from src.pricing.fees import (
    compose_fee,
    fee_derivative,
    is_kink,
    optimal_alpha,
    par_fee,
    threshold,
)
from src.pricing.publishers import TAPublisher

from conftest import constant, power


def test_compose_fee():
    """φ = α·π + (1 − α)·ρ avec α ∈ {0, 1}."""
    assert compose_fee(1, 30.0, 50.0) == 30.0
    assert compose_fee(0, 30.0, 50.0) == 50.0
    with pytest.raises(ValidationError):
        compose_fee(0.5, 30.0, 50.0)
    with pytest.raises(ValidationError):
        compose_fee(1, -1.0, 50.0)


def test_max_rule_on_baseline(baseline):
    """φ = max(10·√N, 50) : ρ sous Ñ = 25, π au-dessus."""
    low = par_fee(16.0, baseline)
    assert (low.alpha, low.fee) == (0, 50.0)
    high = par_fee(100.0, baseline)
    assert (high.alpha, high.fee) == (1, 100.0)
    # égalité au seuil : α = 1
    assert optimal_alpha(25.0, baseline) == 1
    assert par_fee(25.0, baseline).fee == 50.0


def test_domain_min_enforced():
    ta = TAPublisher(CurveSpec.from_named("power", 10.0, b=1, gamma=0.5), constant(5))
    with pytest.raises(DomainError):
        par_fee(5.0, ta)


def test_fee_derivative_inside_regimes(baseline, hyperbolic_ta):
    assert fee_derivative(16.0, baseline).value == 0.0
    assert fee_derivative(100.0, baseline).value == pytest.approx(0.5)
    slope = fee_derivative(900.0, hyperbolic_ta)
    assert slope.value == pytest.approx(-0.2)
    assert not slope.kink


def test_fee_derivative_at_kink(baseline):
    """Au coude, la dérivée n'existe pas : limites à gauche et à droite."""
    slope = fee_derivative(25.0, baseline)
    assert slope.kink
    assert math.isnan(slope.value)
    assert slope.left == 0.0
    assert slope.right == pytest.approx(1.0)
    assert is_kink(25.0, baseline)
    assert not is_kink(25.5, baseline)


def test_threshold_baseline(baseline):
    found = threshold(baseline, 1, 250)
    assert found.n_tilde == pytest.approx(25.0, abs=1e-9)
    assert abs(found.residual) <= 1e-10
    assert (found.bracket_lo, found.bracket_hi) == (1.0, 250.0)


def test_threshold_hyperbolic(hyperbolic_ta):
    """2·√N = 200000/(N + 100) : Ñ ≈ 2088.29."""
    found = threshold(hyperbolic_ta, 1, 20000)
    assert found.n_tilde == pytest.approx(2088.289, abs=1e-3)
    assert abs(found.residual) <= 1e-10


def test_threshold_without_switch():
    ta = TAPublisher(power(10), constant(0))
    with pytest.raises(NoRootError, match=r"no regime switch in \[1,1000\]; alpha = 1 throughout"):
        threshold(ta, 1, 1000)


def test_threshold_at_bracket_edge(baseline):
    """π = ρ exactement à une borne (N = 25) : pas de bascule à l'intérieur de l'intervalle."""
    with pytest.raises(NoRootError, match=r"no regime switch in \[25,100\]; alpha = 1 throughout"):
        threshold(baseline, 25, 100)
    with pytest.raises(NoRootError, match=r"no regime switch in \[1,25\]; alpha = 0 throughout"):
        threshold(baseline, 1, 25)


def test_threshold_is_deterministic(hyperbolic_ta):
    assert threshold(hyperbolic_ta, 1, 20000).n_tilde == threshold(hyperbolic_ta, 1, 20000).n_tilde
