"""
Dérivées par différences finies centrées et vérification des dérivées analytiques.

check_derivative sert d'oracle indépendant : il compare une dérivée analytique
à la différence centrée sur une grille, en excluant les zones de coude.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.errors import DomainError, ModelError, ValidationError
from src.numerics.grid import Grid

logger = logging.getLogger(__name__)

DERIV_TOL = 1e-4

Interval = Tuple[float, float]


def default_step(x: float) -> float:
    """Pas h = max(1e-6·|x|, 1e-7)."""
    return max(1e-6 * abs(x), 1e-7)


def kink_zone(n_tilde: float, h: Optional[float] = None) -> Interval:
    """Zone d'exclusion [Ñ − δ, Ñ + δ] avec δ = max(10·h, 1e-6·Ñ)."""
    h = default_step(n_tilde) if h is None else h
    delta = max(10.0 * h, 1e-6 * abs(n_tilde))
    return n_tilde - delta, n_tilde + delta


def fd_derivative(f: Callable[[float], float],
                  x: float,
                  h: Optional[float] = None,
                  domain: Optional[Interval] = None) -> float:
    """Différence centrée (f(x+h) − f(x−h)) / (2h)."""
    h = default_step(x) if h is None else h
    if h <= 0:
        raise ValidationError("h doit être > 0")
    if domain is not None and (x - h < domain[0] or x + h > domain[1]):
        raise DomainError(f"x±h = [{x - h:g}, {x + h:g}] hors du domaine [{domain[0]:g}, {domain[1]:g}]")
    return (f(x + h) - f(x - h)) / (2.0 * h)


@dataclass
class DerivativeReport:
    records: pd.DataFrame
    tolerance: float
    excluded_points: List[float] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return len(self.records)

    @property
    def vacuous(self) -> bool:
        """Aucun point vérifié (grille entièrement exclue)."""
        return self.checked == 0

    @property
    def max_abs_error(self) -> float:
        if self.vacuous:
            return 0.0
        errors = self.records["abs_error"]
        # une évaluation en échec compte comme une erreur infinie
        return float(errors.fillna(np.inf).max())

    @property
    def passed(self) -> bool:
        return self.max_abs_error <= self.tolerance

    def summary(self) -> str:
        if self.vacuous:
            return f"0 points checked ({len(self.excluded_points)} excluded), vacuous pass"
        return (f"{self.checked} points, max_abs_error={self.max_abs_error:.3e} "
                f"(tol {self.tolerance:g}), {len(self.excluded_points)} excluded")


def _excluded(x: float, exclusions: Sequence[Interval]) -> bool:
    return any(lo <= x <= hi for lo, hi in exclusions)


def check_derivative(f: Callable[[float], float],
                     df: Callable[[float], float],
                     grid: Grid,
                     tol: float = DERIV_TOL,
                     exclusions: Sequence[Interval] = ()) -> DerivativeReport:
    """
    Compare df à la différence centrée de f sur tous les points non exclus de la grille.
    Les échecs sont rapportés, jamais levés.
    """
    records, excluded = [], []
    for x in grid.points:
        x = float(x)
        if _excluded(x, exclusions):
            excluded.append(x)
            continue
        try:
            analytic = float(df(x))
            numeric = fd_derivative(f, x, default_step(x))
            records.append({"x": x, "analytic": analytic, "finite_difference": numeric,
                            "abs_error": abs(analytic - numeric), "error": None})
        except (ModelError, ArithmeticError) as exc:
            records.append({"x": x, "analytic": np.nan, "finite_difference": np.nan,
                            "abs_error": np.nan, "error": str(exc)})

    table = pd.DataFrame(records, columns=["x", "analytic", "finite_difference", "abs_error", "error"])
    report = DerivativeReport(table, tol, excluded)
    logger.info("check_derivative: %s", report.summary())
    return report
