"""
Tables de balayage (SweepTable) et export CSV.

Les colonnes sont dans un ordre fixe et les flottants écrits au format aller-retour le plus court,
ce qui rend la sortie identique octet pour octet pour un même fichier de scénario.
"""
import io
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from src.competition.duopoly import shift_sweep
from src.data_ingestion.scenario_loader import Scenario
from src.numerics.grid import Grid, sweep
from src.pricing.fees import fee_derivative, par_fee
from src.pricing.profit import marginal_profit, naive_marginal_profit, profit, stabilized_fee_schedule
from src.pricing.publishers import TAPublisher

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ["N", "pi", "rho", "alpha", "fee", "profit", "fee_derivative",
                 "marginal_profit", "kink_flag", "naive_marginal_profit"]
STABILIZED_COLUMNS = ["N", "fee", "stabilized_fee", "profit", "stabilized_profit", "in_interval"]
DUOPOLY_COLUMNS = ["s", "n_ta", "n_oa", "fee_ta", "fee_oa", "alpha_ta", "revenue_ta", "revenue_oa",
                   "budget_residual", "prop3_case", "prop3_sign", "infeasible_flag",
                   "d_oa_revenue", "part_i", "part_ii", "part_iii", "pi_oa", "profit_oa"]
INT_COLUMNS = ["alpha", "kink_flag", "alpha_ta", "infeasible_flag", "in_interval"]


def _ensure_dir(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)


def _curve_row(n: float, ta: TAPublisher) -> Dict[str, Any]:
    decomposition = par_fee(n, ta)
    slope = fee_derivative(n, ta)
    # dΠ/dN n'existe ni au coude ni en N = 0
    mp = marginal_profit(n, ta).total if n > 0 and not slope.kink else math.nan
    return {
        "pi": decomposition.publish_part,
        "rho": decomposition.read_part,
        "alpha": decomposition.alpha,
        "fee": decomposition.fee,
        "profit": profit(n, ta),
        "fee_derivative": slope.value,
        "marginal_profit": mp,
        "kink_flag": int(slope.kink),
        "naive_marginal_profit": naive_marginal_profit(n, ta),
    }


def _ordered(table: pd.DataFrame, columns: List[str]) -> pd.DataFrame:
    """Colonnes dans l'ordre fixé ; 'error' n'est gardée que si une ligne a échoué."""
    table = table.reindex(columns=columns + ["error"])
    for col in INT_COLUMNS:
        if col in table.columns:
            table[col] = table[col].astype("Int64")
    if table["error"].isna().all():
        table = table.drop(columns="error")
    return table


def curve_table(scenario: Scenario, grid: Optional[Grid] = None) -> pd.DataFrame:
    """Courbes de tarif et de profit (une ligne par N, ordre croissant)."""
    grid = grid or scenario.sweep
    table = sweep(lambda n: _curve_row(n, scenario.ta), grid, column="N")
    return _ordered(table, CURVE_COLUMNS)


def stabilized_table(scenario: Scenario, grid: Optional[Grid] = None) -> pd.DataFrame:
    """Tarif PAR et barème stabilisant le profit sur [N', N''] (section [stabilize])."""
    grid = grid or scenario.sweep
    n_lo, n_hi = scenario.stabilize
    schedule = stabilized_fee_schedule(scenario.ta, n_lo, n_hi)

    def row(n: float) -> Dict[str, Any]:
        return {
            "fee": par_fee(n, scenario.ta).fee,
            "stabilized_fee": schedule.fee(n),
            "profit": profit(n, scenario.ta),
            "stabilized_profit": schedule.profit(n),
            "in_interval": int(schedule.contains(n)),
        }

    return _ordered(sweep(row, grid, column="N"), STABILIZED_COLUMNS)


def duopoly_table(scenario: Scenario, grid: Optional[Grid] = None) -> pd.DataFrame:
    """Déplacement s de publications du TA vers l'OA (la grille porte sur s)."""
    grid = grid or scenario.sweep
    band = scenario.tolerances.near_zero_band
    table = shift_sweep(scenario.duopoly(), grid, band, slack=scenario.tolerances.deriv_tol)
    return _ordered(table, DUOPOLY_COLUMNS)


def to_csv_text(table: pd.DataFrame) -> str:
    buffer = io.StringIO()
    table.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def export_csv(table: pd.DataFrame, output_path: Union[str, Path, None] = None) -> str:
    """
    Écrit la table en CSV (UTF-8, LF). Sans chemin, renvoie le texte CSV.
    Retourne le chemin écrit sinon.
    """
    text = to_csv_text(table)
    if output_path is None:
        return text
    out = Path(output_path)
    _ensure_dir(out)
    with open(out, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    logger.info("%d rows written to %s", len(table), out)
    return str(out)
