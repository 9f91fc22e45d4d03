"""
Suite de vérification numérique d'un scénario.

Chaque contrôle compare le modèle à un oracle indépendant (balayage fin, différences finies,
identité budgétaire) et renvoie un CheckResult ; rien n'est levé, l'échec se lit dans le rapport.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.competition.duopoly import EXPECTED_SIGN, Prop3Case, Prop3Sign, shift_sweep
from src.data_ingestion.scenario_loader import Scenario
from src.errors import ModelError, NoRootError
from src.numerics.differentiation import check_derivative, default_step, kink_zone
from src.numerics.grid import Grid
from src.numerics.roots import scan_sign_change
from src.pricing.fees import RegimeThreshold, fee_derivative, is_kink, par_fee, threshold
from src.pricing.profit import marginal_profit, profit, stabilized_fee_schedule

logger = logging.getLogger(__name__)

MAX_RULE_POINTS = 10_000
SCAN_POINTS = 1_000_000
SCALE_FACTORS = (0.5, 2.0, 10.0)
BUDGET_RTOL = 1e-9
EQ9_TOL = 1e-3
STABILIZED_RTOL = 1e-6
SCALE_RTOL = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail}"


@dataclass
class VerificationReport:
    scenario: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def lines(self) -> List[str]:
        return [check.line() for check in self.checks]


# ---------------------------
# Outils
# ---------------------------
def find_threshold(scenario: Scenario, root_tol: Optional[float] = None) -> Optional[RegimeThreshold]:
    """Ñ dans la plage de balayage, ou None si α ne bascule pas."""
    tol = scenario.tolerances.root_tol if root_tol is None else root_tol
    try:
        return threshold(scenario.ta, scenario.sweep.lo, scenario.sweep.hi, tol)
    except NoRootError:
        return None


def _exclusions(scenario: Scenario, found: Optional[RegimeThreshold]) -> List[Tuple[float, float]]:
    zones = []
    if found is not None:
        zones.append(kink_zone(found.n_tilde))
    lo, hi = scenario.sweep.lo, scenario.sweep.hi
    # π = ρ exactement à une borne : threshold ne la rend pas, le coude y est pourtant
    zones.extend(kink_zone(edge) for edge in (lo, hi) if is_kink(edge, scenario.ta))
    # la différence centrée sortirait du domaine au bord gauche
    if lo - default_step(lo) < scenario.ta.domain_min or lo <= 0:
        zones.append((lo, lo + 10 * default_step(lo)))
    return zones


def _regime_grid(scenario: Scenario, found: Optional[RegimeThreshold]) -> Grid:
    hi = 10 * found.n_tilde if found is not None else scenario.sweep.hi
    return Grid(scenario.sweep.lo, max(hi, scenario.sweep.lo + 1.0), MAX_RULE_POINTS)


def _outside(x: float, zones: List[Tuple[float, float]]) -> bool:
    return not any(lo <= x <= hi for lo, hi in zones)


# ---------------------------
# Contrôles éditeur seul
# ---------------------------
def check_threshold(scenario: Scenario, found: Optional[RegimeThreshold]) -> CheckResult:
    ta = scenario.ta
    lo, hi = scenario.sweep.lo, scenario.sweep.hi

    def gap(xs):
        return ta.publish.value(xs) - ta.read.value(xs)

    cell = scan_sign_change(gap, Grid(lo, hi, SCAN_POINTS))
    if found is None:
        # une égalité exacte à une borne ne compte pas comme bascule
        edge_only = cell is not None and ((cell[0] == lo and gap(lo) == 0) or (cell[1] == hi and gap(hi) == 0))
        alpha = 1 if gap(0.5 * (lo + hi)) >= 0 else 0
        return CheckResult("threshold", cell is None or edge_only,
                           f"no regime switch in [{lo:g},{hi:g}]; alpha = {alpha} throughout")
    tol = scenario.tolerances.root_tol
    ok_residual = abs(found.residual) <= tol
    ok_scan = cell is not None and cell[0] - tol <= found.n_tilde <= cell[1] + tol
    return CheckResult("threshold", ok_residual and ok_scan,
                       f"N_tilde={found.n_tilde:.6f}, residual={found.residual:.2e}, scan cell={cell}")


def check_max_rule(scenario: Scenario, found: Optional[RegimeThreshold]) -> CheckResult:
    ta = scenario.ta
    grid = _regime_grid(scenario, found)
    failures = 0
    for n in grid.points:
        dec = par_fee(float(n), ta)
        pi, rho = ta.publish.value(float(n)), ta.read.value(float(n))
        if dec.fee != max(pi, rho) or (dec.alpha == 1) != (pi >= rho):
            failures += 1
    return CheckResult("max_rule", failures == 0,
                       f"{grid.steps} points on [{grid.lo:g}, {grid.hi:g}], {failures} mismatches")


def check_fee_derivative(scenario: Scenario, found: Optional[RegimeThreshold]) -> CheckResult:
    ta = scenario.ta
    report = check_derivative(lambda n: par_fee(n, ta).fee,
                              lambda n: fee_derivative(n, ta).value,
                              scenario.sweep, scenario.tolerances.deriv_tol,
                              _exclusions(scenario, found))
    return CheckResult("fee_derivative", report.passed, report.summary())


def check_marginal_profit(scenario: Scenario, found: Optional[RegimeThreshold]) -> CheckResult:
    ta = scenario.ta
    report = check_derivative(lambda n: profit(n, ta),
                              lambda n: marginal_profit(n, ta).total,
                              scenario.sweep, scenario.tolerances.deriv_tol,
                              _exclusions(scenario, found))
    return CheckResult("marginal_profit", report.passed, report.summary())


def check_proposition2(scenario: Scenario, found: Optional[RegimeThreshold]) -> CheckResult:
    """
    α = 1 : total − (φ − c) = N·π′ ≥ 0 ; α = 0 avec ρ constant : total = ρ − c et ∂φ/∂N = 0 ;
    α = 0 avec ρ convexe : total − (φ − c) = N·ρ′ < 0 (le tarif amortit le gain marginal).
    """
    ta = scenario.ta
    zones = _exclusions(scenario, found)
    checked, failures = 0, []
    for n in scenario.sweep.points:
        n = float(n)
        if n <= 0 or not _outside(n, zones):
            continue
        mp = marginal_profit(n, ta)
        dec = par_fee(n, ta)
        checked += 1
        if mp.alpha == 1:
            amplification = n * ta.publish.derivative(n)
            ok = math.isclose(mp.total - (dec.fee - ta.marginal_cost), amplification,
                              rel_tol=1e-12, abs_tol=1e-9) and amplification >= 0
        elif ta.read.is_constant:
            ok = mp.total == dec.read_part - ta.marginal_cost and fee_derivative(n, ta).value == 0
        else:
            dampening = n * ta.read.derivative(n)
            ok = math.isclose(mp.total - (dec.fee - ta.marginal_cost), dampening,
                              rel_tol=1e-12, abs_tol=1e-9) and dampening < 0
        if not ok:
            failures.append(n)
    detail = f"{checked} points, {len(failures)} failures"
    if failures:
        detail += f" (first at N={failures[0]:g})"
    return CheckResult("proposition2", not failures and checked > 0, detail)


def check_fee_shape(scenario: Scenario, found: Optional[RegimeThreshold]) -> CheckResult:
    """Forme de φ*(N) : plate (ρ constant) ou décroissante sous Ñ, croissante au-dessus."""
    ta = scenario.ta
    if found is None:
        return CheckResult("fee_shape", True, "no regime switch in sweep range, shape check skipped")
    xs = scenario.sweep.points
    decs = [par_fee(float(n), ta) for n in xs]
    fees = np.array([d.fee for d in decs])
    alphas = np.array([d.alpha for d in decs])
    below, above = xs < found.n_tilde, xs > found.n_tilde

    ok_regimes = bool(np.all(alphas[below] == 0) and np.all(alphas[above] == 1))
    if ta.read.is_constant:
        ok_below = bool(np.all(fees[below] == ta.read.value(0.0)))
    else:
        ok_below = bool(np.all(np.diff(fees[below]) < 0))
    ok_above = bool(np.all(np.diff(fees[above]) > 0)) if not ta.publish.is_constant else True

    ok_min = True
    if not ta.read.is_constant and below.any() and above.any():
        i_min = int(np.argmin(fees))
        last_below = int(np.flatnonzero(below)[-1])
        ok_min = i_min in (last_below, last_below + 1)
    ok = ok_regimes and ok_below and ok_above and ok_min
    return CheckResult("fee_shape", ok,
                       f"regimes={ok_regimes}, below={ok_below}, above={ok_above}, min_adjacent={ok_min}")


def check_profit_identity(scenario: Scenario) -> CheckResult:
    ta = scenario.ta
    failures = sum(
        profit(float(n), ta) != float(n) * (par_fee(float(n), ta).fee - ta.marginal_cost) - ta.fixed_cost
        for n in scenario.sweep.points
    )
    ok_zero = True
    if ta.domain_min == 0:
        ok_zero = profit(0.0, ta) == -ta.fixed_cost
    return CheckResult("profit_identity", failures == 0 and ok_zero,
                       f"{failures} mismatches, profit(0) == -F: {ok_zero}")


def check_stabilized(scenario: Scenario) -> Optional[CheckResult]:
    if scenario.stabilize is None:
        return None
    n_lo, n_hi = scenario.stabilize
    schedule = stabilized_fee_schedule(scenario.ta, n_lo, n_hi)
    target = schedule.target_profit
    profits = np.array([schedule.profit(float(n)) for n in np.linspace(n_lo, n_hi, 1000)])
    spread = float(np.max(np.abs(profits - target)))
    ok = spread <= STABILIZED_RTOL * max(1.0, abs(target))
    return CheckResult("stabilized_profit", ok,
                       f"[{n_lo:g}, {n_hi:g}] target={target:.6g}, max deviation={spread:.2e}")


def check_scale_invariance(scenario: Scenario, found: Optional[RegimeThreshold]) -> CheckResult:
    ta = scenario.ta
    xs = [float(n) for n in scenario.sweep.points]
    base = [par_fee(n, ta) for n in xs]
    problems = []
    for factor in SCALE_FACTORS:
        scaled_ta = ta.scaled(factor)
        scaled = [par_fee(n, scaled_ta) for n in xs]
        if any(a.alpha != b.alpha for a, b in zip(base, scaled)):
            problems.append(f"alpha changed for lambda={factor:g}")
        if not all(math.isclose(b.fee, factor * a.fee, rel_tol=SCALE_RTOL, abs_tol=1e-300)
                   for a, b in zip(base, scaled)):
            problems.append(f"fee not scaled for lambda={factor:g}")
        if found is not None:
            moved = threshold(scaled_ta, found.bracket_lo, found.bracket_hi, found.tolerance).n_tilde
            if abs(moved - found.n_tilde) > 1e-9 * max(1.0, found.n_tilde):
                problems.append(f"N_tilde moved for lambda={factor:g}")
    return CheckResult("scale_invariance", not problems,
                       "; ".join(problems) or f"lambda in {SCALE_FACTORS}")


def check_deal_anchor(scenario: Scenario) -> Optional[CheckResult]:
    if scenario.contracted_volume is None:
        return None
    fee = par_fee(scenario.contracted_volume, scenario.ta).fee
    return CheckResult("deal_anchor", fee == scenario.contracted_fee,
                       f"fee at N={scenario.contracted_volume:g} is {fee!r} "
                       f"(contracted {scenario.contracted_fee!r})")


# ---------------------------
# Contrôles duopole
# ---------------------------
def duopoly_checks(scenario: Scenario) -> List[CheckResult]:
    scn = scenario.duopoly()
    table = shift_sweep(scn, scenario.sweep, scenario.tolerances.near_zero_band,
                        slack=scenario.tolerances.deriv_tol)
    results = []

    worst = float(table["budget_residual"].abs().max())
    results.append(CheckResult("budget_conservation", worst <= BUDGET_RTOL,
                               f"max relative residual {worst:.2e} over {len(table)} rows"))

    totals = table["n_ta"] + table["n_oa"]
    ok_pubs = bool(np.allclose(totals, scn.n_total, rtol=1e-12, atol=0))
    results.append(CheckResult("publication_conservation", ok_pubs, f"N_TA + N_OA = {scn.n_total:g}"))

    classified = table[table["prop3_sign"].notna()]
    residual = (classified["part_i"] - (classified["part_ii"] - classified["part_iii"])).abs()
    worst_eq9 = float(residual.max()) if len(classified) else math.nan
    results.append(CheckResult("eq9_identity", len(classified) > 0 and worst_eq9 <= EQ9_TOL,
                               f"{len(classified)} interior points, max |residual| {worst_eq9:.2e}"))

    wrong = []
    slack = scenario.tolerances.deriv_tol
    for row in classified.itertuples():
        expected = EXPECTED_SIGN[Prop3Case(row.prop3_case)]
        ok = Prop3Sign(row.prop3_sign) is expected
        if expected is Prop3Sign.NEAR_ZERO:
            ok = ok and abs(row.part_i) <= abs(row.part_iii) + slack
        if not ok:
            wrong.append(row.s)
    cases = sorted(set(classified["prop3_case"]))
    detail = f"cases {cases}, {len(wrong)} unexpected signs"
    if wrong:
        detail += f" (first at s={wrong[0]:g})"
    results.append(CheckResult("proposition3", len(classified) > 0 and not wrong, detail))

    # compression du revenu OA là où φ_TA + N_TA·ρ′(N_TA) ≤ 0
    read = scn.ta.read
    squeeze = table[(table["alpha_ta"] == 0)
                    & (table["fee_ta"] + table["n_ta"] * read.derivative(table["n_ta"].to_numpy()) <= 0)
                    & table["d_oa_revenue"].notna()]
    ok_squeeze = bool((squeeze["d_oa_revenue"] < 0).all())
    results.append(CheckResult("squeeze", ok_squeeze, f"{len(squeeze)} rows where the squeeze condition holds"))
    return results


def run_verification(scenario: Scenario) -> VerificationReport:
    """Exécute tous les contrôles applicables au scénario."""
    report = VerificationReport(scenario.name)
    found = find_threshold(scenario)
    checks = [
        ("threshold", lambda: check_threshold(scenario, found)),
        ("max_rule", lambda: check_max_rule(scenario, found)),
        ("fee_derivative", lambda: check_fee_derivative(scenario, found)),
        ("marginal_profit", lambda: check_marginal_profit(scenario, found)),
        ("proposition2", lambda: check_proposition2(scenario, found)),
        ("fee_shape", lambda: check_fee_shape(scenario, found)),
        ("profit_identity", lambda: check_profit_identity(scenario)),
        ("stabilized_profit", lambda: check_stabilized(scenario)),
        ("scale_invariance", lambda: check_scale_invariance(scenario, found)),
        ("deal_anchor", lambda: check_deal_anchor(scenario)),
    ]
    for name, check in checks:
        try:
            result = check()
        except ModelError as exc:
            result = CheckResult(name, False, f"error: {exc}")
        if result is not None:
            report.checks.append(result)

    if scenario.is_duopoly:
        try:
            report.checks.extend(duopoly_checks(scenario))
        except ModelError as exc:
            report.checks.append(CheckResult("duopoly", False, f"error: {exc}"))

    for check in report.checks:
        logger.info(check.line())
    return report
