"""
Composition du tarif PAR et règle de bascule entre régimes.

φ = α·π + (1 − α)·ρ avec α ∈ {0, 1} : la solution en coin revient à φ = max(π(N), ρ(N)).
En cas d'égalité π = ρ on retient α = 1.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.errors import BracketError, DomainError, NoRootError, ValidationError
from src.numerics.roots import MAX_ITER, ROOT_TOL, bisect
from src.pricing.publishers import TAPublisher

logger = logging.getLogger(__name__)

# égalité π = ρ à cette précision relative près : on est sur le coude
KINK_RTOL = 1e-12


@dataclass(frozen=True)
class FeeDecomposition:
    n: float
    alpha: int
    publish_part: float
    read_part: float
    fee: float


@dataclass(frozen=True)
class FeeSlope:
    """∂φ/∂N ; au coude, value est NaN et left/right donnent les limites à gauche/droite."""
    n: float
    value: float
    left: float
    right: float
    kink: bool


@dataclass(frozen=True)
class RegimeThreshold:
    n_tilde: float
    bracket_lo: float
    bracket_hi: float
    residual: float
    tolerance: float


def compose_fee(alpha: int, publish_part: float, read_part: float) -> float:
    """φ = α·π + (1 − α)·ρ."""
    if alpha not in (0, 1):
        raise ValidationError(f"alpha doit valoir 0 ou 1, reçu {alpha!r}")
    if publish_part < 0 or read_part < 0:
        raise ValidationError(
            f"les composantes du tarif doivent être >= 0 (publish={publish_part}, read={read_part})"
        )
    return alpha * publish_part + (1 - alpha) * read_part


def check_domain(n: float, publisher: TAPublisher) -> None:
    if not np.isfinite(n) or n < publisher.domain_min:
        raise DomainError(f"N={n} sous domain_min={publisher.domain_min}")


def optimal_alpha(n: float, publisher: TAPublisher) -> int:
    """α = 1 si π(N) ≥ ρ(N), sinon 0."""
    check_domain(n, publisher)
    return 1 if publisher.publish.value(n) >= publisher.read.value(n) else 0


def par_fee(n: float, publisher: TAPublisher) -> FeeDecomposition:
    """Tarif PAR résolu en N : φ = max(π(N), ρ(N))."""
    alpha = optimal_alpha(n, publisher)
    pi = publisher.publish.value(n)
    rho = publisher.read.value(n)
    return FeeDecomposition(n=float(n), alpha=alpha, publish_part=pi, read_part=rho,
                            fee=compose_fee(alpha, pi, rho))


def is_kink(n: float, publisher: TAPublisher) -> bool:
    """Vrai si N est sur le coude Ñ (π(N) = ρ(N))."""
    check_domain(n, publisher)
    return math.isclose(publisher.publish.value(n), publisher.read.value(n),
                        rel_tol=KINK_RTOL, abs_tol=KINK_RTOL)


def fee_derivative(n: float, publisher: TAPublisher) -> FeeSlope:
    """
    ∂φ/∂N = π′(N) si α = 1, ρ′(N) si α = 0 (nulle pour ρ constant).
    Au coude, φ est continue mais non dérivable : limites à gauche min(π′, ρ′) et à droite max(π′, ρ′).
    """
    d_pi = publisher.publish.derivative(n)
    d_rho = publisher.read.derivative(n)
    if is_kink(n, publisher):
        return FeeSlope(n=float(n), value=math.nan, left=min(d_pi, d_rho),
                        right=max(d_pi, d_rho), kink=True)
    value = d_pi if optimal_alpha(n, publisher) == 1 else d_rho
    return FeeSlope(n=float(n), value=value, left=value, right=value, kink=False)


def threshold(publisher: TAPublisher,
              bracket_lo: float,
              bracket_hi: float,
              tol: float = ROOT_TOL,
              max_iter: int = MAX_ITER) -> RegimeThreshold:
    """
    Seuil Ñ solution de π(N) = ρ(N), par bissection dans [bracket_lo, bracket_hi].
    L'intervalle doit contenir un seul croisement (les racines multiples ne sont pas détectées).
    """
    check_domain(bracket_lo, publisher)

    def gap(n: float) -> float:
        return publisher.publish.value(n) - publisher.read.value(n)

    try:
        # la tolérance porte sur le résidu |π − ρ| : on resserre la largeur d'intervalle
        n_tilde = bisect(gap, bracket_lo, bracket_hi, tol=tol * 1e-3, max_iter=max_iter)
    except BracketError:
        n_tilde = None
    if n_tilde is None or n_tilde in (bracket_lo, bracket_hi):
        # égalité à une borne : le régime ne change pas à l'intérieur de l'intervalle
        alpha = 1 if gap(0.5 * (bracket_lo + bracket_hi)) >= 0 else 0
        raise NoRootError(
            f"no regime switch in [{bracket_lo:g},{bracket_hi:g}]; alpha = {alpha} throughout"
        )

    residual = gap(n_tilde)
    logger.info("threshold: N_tilde=%r residual=%.3e", n_tilde, residual)
    return RegimeThreshold(n_tilde=n_tilde, bracket_lo=float(bracket_lo), bracket_hi=float(bracket_hi),
                           residual=residual, tolerance=tol)
