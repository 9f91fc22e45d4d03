# Paramètres des éditeurs (TA et OA)
from dataclasses import dataclass, replace

from src.errors import ValidationError
from src.pricing.curves import (
    CurveSpec,
    check_publish_curve,
    check_publish_shape,
    check_read_curve,
    check_read_shape,
)


def _check_costs(marginal_cost: float, fixed_cost: float) -> None:
    if marginal_cost < 0:
        raise ValidationError("marginal_cost doit être >= 0")
    if fixed_cost < 0:
        raise ValidationError("fixed_cost doit être >= 0")


@dataclass(frozen=True)
class TAPublisher:
    """
    Éditeur sous accord transformant.
    publish : π(N), read : ρ ou ρ(N), marginal_cost : c, fixed_cost : F.
    """
    publish: CurveSpec
    read: CurveSpec
    marginal_cost: float = 0.0
    fixed_cost: float = 0.0

    def __post_init__(self):
        check_publish_shape(self.publish)
        check_read_shape(self.read)
        _check_costs(self.marginal_cost, self.fixed_cost)

    @property
    def domain_min(self) -> float:
        return max(self.publish.domain_min, self.read.domain_min)

    def validate_range(self, lo: float, hi: float) -> None:
        """Contrôle échantillonné des contrats de forme et de la positivité sur [lo, hi]."""
        check_publish_curve(self.publish, lo, hi)
        check_read_curve(self.read, lo, hi)

    def scaled(self, factor: float) -> "TAPublisher":
        """Même éditeur avec π et ρ multipliés par factor (coûts inchangés)."""
        return replace(self, publish=self.publish.scaled(factor), read=self.read.scaled(factor))


@dataclass(frozen=True)
class OAPublisher:
    """Éditeur full open access : φ_OA = π_OA(N), pas de partie « read »."""
    publish: CurveSpec
    marginal_cost: float = 0.0
    fixed_cost: float = 0.0

    def __post_init__(self):
        check_publish_shape(self.publish)
        _check_costs(self.marginal_cost, self.fixed_cost)

    def validate_range(self, lo: float, hi: float) -> None:
        check_publish_curve(self.publish, lo, hi)
