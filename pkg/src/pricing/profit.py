"""
Profit de l'éditeur TA : Π = N·(φ − c) − F, et sa dérivée décomposée.

dΠ/dN = I + N·(II + III) avec
  I   = φ − c                  (dérivée « naïve » d'un éditeur preneur de prix)
  II  = dérivée de la composante active (π′ si α = 1, ρ′ si α = 0)
  III = ∂α/∂N·(π − ρ)          (nulle à l'intérieur d'un régime)
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

from src.errors import DomainError, KinkError, ValidationError
from src.pricing.fees import fee_derivative, par_fee
from src.pricing.publishers import TAPublisher

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarginalProfit:
    n: float
    alpha: int
    part_i: float
    part_ii: float
    part_iii: float
    total: float


def profit(n: float, publisher: TAPublisher) -> float:
    """Π(N) = N·(φ(N) − c) − F ; profit(0) = −F."""
    fee = par_fee(n, publisher).fee
    return n * (fee - publisher.marginal_cost) - publisher.fixed_cost


def naive_marginal_profit(n: float, publisher: TAPublisher) -> float:
    """φ − c : dérivée du profit si le tarif ne réagissait pas à N."""
    return par_fee(n, publisher).fee - publisher.marginal_cost


def marginal_profit(n: float, publisher: TAPublisher) -> MarginalProfit:
    """Décomposition I / II / III de dΠ/dN à l'intérieur d'un régime."""
    if n <= 0:
        raise DomainError(f"le profit marginal exige N > 0, reçu {n}")
    slope = fee_derivative(n, publisher)
    if slope.kink:
        raise KinkError(
            f"N={n} est au seuil de régime ; évaluer à gauche ou à droite (left={slope.left}, right={slope.right})"
        )
    decomposition = par_fee(n, publisher)
    part_i = decomposition.fee - publisher.marginal_cost
    part_ii = slope.value
    part_iii = 0.0
    total = part_i + n * (part_ii + part_iii)
    return MarginalProfit(n=float(n), alpha=decomposition.alpha, part_i=part_i,
                          part_ii=part_ii, part_iii=part_iii, total=total)


# ---------------------------
# Profit stabilisé sur [N', N'']
# ---------------------------
@dataclass(frozen=True)
class StabilizedSchedule:
    """
    Barème φ̂(N) = c + (Π* + F)/N sur [n_lo, n_hi], qui maintient le profit à Π*.
    Hors de l'intervalle, le tarif PAR habituel s'applique.
    Interprétation de la courbe de profit « stabilisée » : Π étant croissant en φ à N fixé,
    le barème retenu est celui qui garde le profit constant pendant la baisse de N.
    """
    publisher: TAPublisher
    n_lo: float
    n_hi: float
    target_profit: float

    def contains(self, n: float) -> bool:
        return self.n_lo <= n <= self.n_hi

    def fee(self, n: float) -> float:
        if self.contains(n):
            return self.publisher.marginal_cost + (self.target_profit + self.publisher.fixed_cost) / n
        return par_fee(n, self.publisher).fee

    def profit(self, n: float) -> float:
        return n * (self.fee(n) - self.publisher.marginal_cost) - self.publisher.fixed_cost

    def __call__(self, n: float) -> float:
        return self.fee(n)


def stabilized_fee_schedule(publisher: TAPublisher,
                            n_lo: float,
                            n_hi: float,
                            target_profit: Optional[float] = None) -> StabilizedSchedule:
    """Barème stabilisant le profit sur [n_lo, n_hi] ; Π* = profit(n_hi) par défaut."""
    if n_lo <= 0:
        raise ValidationError("le barème stabilisé exige n_lo > 0 (le tarif divise par N)")
    if n_hi < n_lo:
        raise ValidationError(f"le barème stabilisé exige n_lo <= n_hi, reçu [{n_lo}, {n_hi}]")
    if target_profit is None:
        target_profit = profit(n_hi, publisher)
    if not math.isfinite(target_profit):
        raise ValidationError("le profit cible doit être fini")
    logger.debug("stabilized schedule on [%g, %g], target profit %g", n_lo, n_hi, target_profit)
    return StabilizedSchedule(publisher, float(n_lo), float(n_hi), float(target_profit))
