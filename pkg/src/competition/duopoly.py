"""
Duopole sous contrainte budgétaire : un éditeur TA et un éditeur full OA.

La bibliothèque dispose d'un budget fixe B = φ_TA·N_TA + φ_OA·N_OA et le nombre total de
publications N̄ = N_TA + N_OA est fixe. On déplace s publications vers l'OA
(N_OA = s, N_TA = N̄ − s) ; le tarif OA est celui qu'implique le budget.

Identité dérivée du budget :
  I = ∂φ_OA/∂N_OA·N_OA = II − III,  II = ∂φ_TA/∂N_TA·N_TA,  III = φ_OA − φ_TA
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from src.errors import DomainError, KinkError, ModelError, ValidationError
from src.numerics.differentiation import DERIV_TOL, default_step, fd_derivative
from src.numerics.grid import Grid, sweep
from src.pricing.fees import fee_derivative, is_kink, optimal_alpha, par_fee
from src.pricing.publishers import OAPublisher, TAPublisher

logger = logging.getLogger(__name__)


class Prop3Case(str, Enum):
    ALPHA1 = "alpha1"
    ALPHA0_FIXED_RHO = "alpha0_fixed_rho"
    ALPHA0_CONVEX_RHO = "alpha0_convex_rho"


class Prop3Sign(str, Enum):
    POSITIVE = "positive"
    NEAR_ZERO = "near_zero"
    NEGATIVE = "negative"


# signe attendu de la partie I pour chaque cas
EXPECTED_SIGN = {
    Prop3Case.ALPHA1: Prop3Sign.POSITIVE,
    Prop3Case.ALPHA0_FIXED_RHO: Prop3Sign.NEAR_ZERO,
    Prop3Case.ALPHA0_CONVEX_RHO: Prop3Sign.NEGATIVE,
}


@dataclass(frozen=True)
class DuopolyScenario:
    budget: float
    n_total: float
    ta: TAPublisher
    oa: OAPublisher

    def __post_init__(self):
        if not self.budget >= 0:
            raise ValidationError("le budget doit être >= 0")
        if not self.n_total > 0:
            raise ValidationError("n_total doit être > 0")

        ta_pub, oa_pub = self.ta.publish, self.oa.publish
        # pentes égales : même famille et mêmes paramètres de forme, seule l'ordonnée à l'origine diffère
        if ta_pub.family is not oa_pub.family or ta_pub.params[1:] != oa_pub.params[1:]:
            raise ValidationError(
                "les courbes publish TA et OA doivent partager famille et paramètres de forme (seule l'ordonnée à l'origine diffère)"
            )
        if ta_pub.intercept < oa_pub.intercept:
            raise ValidationError("l'ordonnée à l'origine publish TA doit être >= celle de l'OA")

        lo = max(ta_pub.domain_min, oa_pub.domain_min)
        self.ta.validate_range(lo, self.n_total)
        self.oa.validate_range(lo, self.n_total)
        xs = np.linspace(lo, self.n_total, 1000)
        if np.any(ta_pub.value(xs) < oa_pub.value(xs)):
            raise ValidationError("la partie publish TA doit dominer la partie publish OA sur [0, n_total]")


@dataclass(frozen=True)
class ImpliedOAFee:
    s: float
    n_ta: float
    alpha_ta: int
    fee_ta: float
    fee: float
    infeasible: bool
    exhausted: bool


@dataclass(frozen=True)
class Eq9Decomposition:
    s: float
    part_i: float
    part_ii: float
    part_iii: float
    residual: float


@dataclass(frozen=True)
class Prop3Classification:
    s: float
    case: Prop3Case
    sign: Prop3Sign
    part_i: float
    part_ii: float
    part_iii: float
    band: float
    within_fee_gap: bool

    @property
    def expected(self) -> bool:
        return EXPECTED_SIGN[self.case] is self.sign


def _check_shift(scn: DuopolyScenario, s: float) -> None:
    if s == 0:
        raise ValidationError("s = 0 : tarif OA indéfini (division par N_OA)")
    if not 0 < s <= scn.n_total:
        raise DomainError(f"s={s} hors de (0, {scn.n_total}]")


def ta_revenue(scn: DuopolyScenario, s: float) -> float:
    n_ta = scn.n_total - s
    return par_fee(n_ta, scn.ta).fee * n_ta


def implied_oa_fee(scn: DuopolyScenario, s: float) -> ImpliedOAFee:
    """φ_OA = (B − φ_TA(N̄ − s)·(N̄ − s)) / s ; une valeur négative est signalée infaisable."""
    _check_shift(scn, s)
    n_ta = scn.n_total - s
    ta_fee = par_fee(n_ta, scn.ta)
    fee = (scn.budget - ta_fee.fee * n_ta) / s
    return ImpliedOAFee(s=float(s), n_ta=n_ta, alpha_ta=ta_fee.alpha, fee_ta=ta_fee.fee, fee=fee,
                        infeasible=fee < 0, exhausted=fee == 0)


def _check_no_kink(scn: DuopolyScenario, s: float, h: float) -> None:
    n_ta = scn.n_total - s
    delta = max(10.0 * h, 1e-6 * n_ta)
    if s - h <= 0 or n_ta - delta < scn.ta.domain_min:
        raise DomainError(f"s={s} pas strictement dans (0, {scn.n_total})")
    if is_kink(n_ta, scn.ta) or optimal_alpha(n_ta - delta, scn.ta) != optimal_alpha(n_ta + delta, scn.ta):
        raise KinkError(f"N_TA={n_ta} à moins de {delta:g} du seuil de régime TA")


def eq9_decomposition(scn: DuopolyScenario, s: float, h: Optional[float] = None) -> Eq9Decomposition:
    """Parties I (oracle différences finies), II et III, et résidu I − (II − III)."""
    h = default_step(s) if h is None else h
    _check_shift(scn, s)
    _check_no_kink(scn, s, h)

    oa = implied_oa_fee(scn, s)
    part_i = fd_derivative(lambda x: implied_oa_fee(scn, x).fee, s, h) * s
    # dN_TA/ds = −1 : les deux signes se compensent dans II
    part_ii = fee_derivative(oa.n_ta, scn.ta).value * oa.n_ta
    part_iii = oa.fee - oa.fee_ta
    residual = part_i - (part_ii - part_iii)
    return Eq9Decomposition(s=float(s), part_i=part_i, part_ii=part_ii, part_iii=part_iii, residual=residual)


def prop3_case(alpha_ta: int, ta: TAPublisher) -> Prop3Case:
    if alpha_ta == 1:
        return Prop3Case.ALPHA1
    return Prop3Case.ALPHA0_FIXED_RHO if ta.read.is_constant else Prop3Case.ALPHA0_CONVEX_RHO


def proposition3_classify(scn: DuopolyScenario,
                          s: float,
                          near_zero_band: Optional[float] = None,
                          h: Optional[float] = None,
                          slack: float = DERIV_TOL) -> Prop3Classification:
    """
    Signe de la partie I : positif au-delà de la bande, négatif en deçà de −bande, sinon ≈ 0.
    Bande par défaut |φ_OA − φ_TA| élargie de slack (bruit de la différence finie) ;
    une bande explicite est prise telle quelle.
    """
    parts = eq9_decomposition(scn, s, h)
    alpha_ta = optimal_alpha(scn.n_total - s, scn.ta)
    fee_gap = abs(parts.part_iii)
    # bande explicite : seuils exacts ±near_zero_band
    band = fee_gap + slack if near_zero_band is None else near_zero_band

    if parts.part_i > band:
        sign = Prop3Sign.POSITIVE
    elif parts.part_i < -band:
        sign = Prop3Sign.NEGATIVE
    else:
        sign = Prop3Sign.NEAR_ZERO
    return Prop3Classification(
        s=float(s), case=prop3_case(alpha_ta, scn.ta), sign=sign,
        part_i=parts.part_i, part_ii=parts.part_ii, part_iii=parts.part_iii, band=band,
        within_fee_gap=abs(parts.part_i) <= fee_gap + slack,
    )


# ---------------------------
# Balayage du déplacement s
# ---------------------------
def _shift_record(scn: DuopolyScenario, s: float, near_zero_band: Optional[float],
                  slack: float) -> Dict[str, Any]:
    oa = implied_oa_fee(scn, s)
    revenue_ta = oa.fee_ta * oa.n_ta
    revenue_oa = oa.fee * s
    gap = revenue_ta + revenue_oa - scn.budget
    record: Dict[str, Any] = {
        "n_ta": oa.n_ta,
        "n_oa": float(s),
        "fee_ta": oa.fee_ta,
        "fee_oa": oa.fee,
        "alpha_ta": oa.alpha_ta,
        "revenue_ta": revenue_ta,
        "revenue_oa": revenue_oa,
        "budget_residual": gap / scn.budget if scn.budget > 0 else gap,
        "infeasible_flag": int(oa.infeasible),
        "pi_oa": scn.oa.publish.value(s),
        "profit_oa": s * (oa.fee - scn.oa.marginal_cost) - scn.oa.fixed_cost,
        "prop3_case": prop3_case(oa.alpha_ta, scn.ta).value,
    }

    # dérivée du revenu OA g(s) = B − φ_TA·N_TA (oracle différences finies)
    try:
        record["d_oa_revenue"] = fd_derivative(lambda x: scn.budget - ta_revenue(scn, x), s)
    except ModelError:
        record["d_oa_revenue"] = np.nan

    try:
        cls = proposition3_classify(scn, s, near_zero_band, slack=slack)
        record.update(part_i=cls.part_i, part_ii=cls.part_ii, part_iii=cls.part_iii,
                      prop3_sign=cls.sign.value)
    except ModelError as exc:
        # coude ou bord du domaine : pas de classification pour cette ligne
        logger.debug("shift s=%g not classified: %s", s, exc)
        record.update(part_i=np.nan, part_ii=np.nan, part_iii=np.nan, prop3_sign=None)
    return record


def shift_sweep(scn: DuopolyScenario,
                grid: Grid,
                near_zero_band: Optional[float] = None,
                slack: float = DERIV_TOL) -> pd.DataFrame:
    """Une ligne par valeur de s (ordre croissant), identité budgétaire vérifiée ligne à ligne."""
    if grid.lo <= 0 or grid.hi > scn.n_total:
        raise DomainError(f"la grille de déplacement [{grid.lo:g}, {grid.hi:g}] doit être incluse dans (0, {scn.n_total:g}]")
    table = sweep(lambda s: _shift_record(scn, s, near_zero_band, slack), grid, column="s")
    logger.info("shift_sweep: %d rows, max |budget residual| %.3e",
                len(table), table["budget_residual"].abs().max())
    return table
