import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict

import numpy as np
import pandas as pd

from src.errors import ModelError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Grid:
    """Grille uniforme [lo, hi] à steps points, bornes incluses."""
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if not np.isfinite(self.lo) or not np.isfinite(self.hi):
            raise ValidationError("les bornes de la grille doivent être finies")
        if not self.lo < self.hi:
            raise ValidationError(f"la grille exige lo < hi, reçu [{self.lo}, {self.hi}]")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValidationError("la grille exige steps >= 2")

    @classmethod
    def parse(cls, text: str) -> "Grid":
        """Lit une grille « lo:hi:steps »."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"grille attendue au format lo:hi:steps, reçu {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            if isinstance(exc, ModelError):
                raise
            raise ValidationError(f"grille attendue au format lo:hi:steps, reçu {text!r}") from exc

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.steps))


def sweep(f: Callable[[float], Dict[str, Any]], grid: Grid, column: str = "N") -> pd.DataFrame:
    """
    Évalue f en chaque point de la grille et empile les enregistrements dans un DataFrame
    (une ligne par point, ordre croissant de la variable balayée).
    Une erreur d'évaluation est consignée dans la colonne 'error' de la ligne, sans interrompre le balayage.
    """
    rows = []
    for x in grid.points:
        x = float(x)
        try:
            row = {column: x, **f(x)}
            row.setdefault("error", None)
        except (ModelError, ArithmeticError) as exc:
            logger.warning("sweep: evaluation failed at %s=%g: %s", column, x, exc)
            row = {column: x, "error": str(exc)}
        rows.append(row)
    return pd.DataFrame(rows)
