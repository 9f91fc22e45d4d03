# Recherche de racine par bissection et oracle de balayage fin
import logging
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import optimize

from src.errors import BracketError, ConvergenceError, ValidationError
from src.numerics.grid import Grid

logger = logging.getLogger(__name__)

ROOT_TOL = 1e-10
MAX_ITER = 200


def bisect(f: Callable[[float], float],
           lo: float,
           hi: float,
           tol: float = ROOT_TOL,
           max_iter: int = MAX_ITER) -> float:
    """
    Racine de f dans [lo, hi] par bissection (scipy.optimize.bisect).
    Exige f(lo)·f(hi) < 0 ; s'arrête quand la largeur de l'intervalle passe sous tol.
    Déterministe : mêmes entrées, même résultat au bit près.
    """
    if tol <= 0:
        raise ValidationError("tol doit être > 0")
    if not lo < hi:
        raise ValidationError(f"intervalle invalide [{lo}, {hi}]")

    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError(f"pas de changement de signe dans [{lo:g}, {hi:g}]")

    root, info = optimize.bisect(f, lo, hi, xtol=tol, maxiter=max_iter,
                                 full_output=True, disp=False)
    if not info.converged:
        raise ConvergenceError(f"la bissection n'a pas convergé en {max_iter} itérations")
    logger.debug("bisect: root=%r after %d iterations", root, info.iterations)
    return float(root)


def scan_sign_change(f: Callable[[np.ndarray], np.ndarray], grid: Grid) -> Optional[Tuple[float, float]]:
    """
    Oracle de balayage : première cellule [x_i, x_{i+1}] de la grille où le signe de f change
    (f ≥ 0 compte comme positif). f doit être vectorisée. None s'il n'y a aucun changement.
    """
    xs = grid.points
    positive = np.asarray(f(xs)) >= 0
    flips = np.flatnonzero(positive[1:] != positive[:-1])
    if flips.size == 0:
        return None
    i = int(flips[0])
    return float(xs[i]), float(xs[i + 1])
