import pytest

from src.competition.duopoly import DuopolyScenario
from src.pricing.curves import CurveSpec
from src.pricing.publishers import OAPublisher, TAPublisher


def power(b, gamma=0.5, a=0.0):
    return CurveSpec.from_named("power", a=a, b=b, gamma=gamma)


def constant(a):
    return CurveSpec.from_named("constant", a=a)


def hyperbolic(b, s, a=0.0):
    return CurveSpec.from_named("hyperbolic", a=a, b=b, s=s)


@pytest.fixture
def baseline():
    """π = 10·√N, ρ = 50 : seuil Ñ = 25."""
    return TAPublisher(power(10), constant(50), marginal_cost=20, fixed_cost=1000)


@pytest.fixture
def hyperbolic_ta():
    """π = 2·√N, ρ(N) = 200000/(N + 100)."""
    return TAPublisher(power(2), hyperbolic(200000, 100), marginal_cost=20, fixed_cost=1000)


@pytest.fixture
def fixed_rho_market():
    """α = 0 partout, ρ = 50 : φ_OA(s) = 50 + 25000/s."""
    ta = TAPublisher(power(1), constant(50))
    oa = OAPublisher(power(1))
    return DuopolyScenario(budget=100000, n_total=1500, ta=ta, oa=oa)


@pytest.fixture
def convex_rho_market():
    ta = TAPublisher(power(2), hyperbolic(200000, 100), marginal_cost=20, fixed_cost=1000)
    oa = OAPublisher(power(2), marginal_cost=20)
    return DuopolyScenario(budget=600000, n_total=1500, ta=ta, oa=oa)


@pytest.fixture
def alpha1_market():
    ta = TAPublisher(power(10, a=100), constant(50), marginal_cost=20)
    oa = OAPublisher(power(10, a=50), marginal_cost=20)
    return DuopolyScenario(budget=450000, n_total=1500, ta=ta, oa=oa)


@pytest.fixture
def write_scenario(tmp_path):
    """Écrit un fichier de scénario INI temporaire et renvoie son chemin."""
    def _write(text, name="scenario.ini"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
