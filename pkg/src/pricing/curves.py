"""
Familles de courbes pour les composantes du tarif PAR.

Une CurveSpec décrit soit la partie « publish » π(N), soit la partie « read » ρ(N).
Les évaluations acceptent un scalaire ou un tableau numpy (vectorisées) ;
un scalaire en entrée donne un float en sortie.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple, Union

import numpy as np

from src.errors import ValidationError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# nombre de points de l'échantillon de contrôle des contrats de forme
SHAPE_SAMPLES = 1000
# marge numérique pour les signes des dérivées échantillonnées
SHAPE_EPS = 1e-12


class CurveFamily(str, Enum):
    POWER = "power"
    LOG_AFFINE = "log-affine"
    AFFINE = "affine"
    CONSTANT = "constant"
    HYPERBOLIC = "hyperbolic"


PARAM_NAMES: Dict[CurveFamily, Tuple[str, ...]] = {
    CurveFamily.POWER: ("a", "b", "gamma"),
    CurveFamily.LOG_AFFINE: ("a", "b"),
    CurveFamily.AFFINE: ("a", "b"),
    CurveFamily.CONSTANT: ("a",),
    CurveFamily.HYPERBOLIC: ("a", "b", "s"),
}


def _out(x: np.ndarray) -> ArrayLike:
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class CurveSpec:
    """
    Courbe paramétrique f(N) :
      power      : a + b·N^γ        (b > 0, γ > 0)
      log-affine : a + b·ln(1 + N)  (b > 0)
      affine     : a + b·N
      constant   : a
      hyperbolic : a + b/(N + s)    (b > 0, s > 0)
    """
    family: CurveFamily
    params: Tuple[float, ...]
    domain_min: float = 0.0

    def __post_init__(self):
        family = CurveFamily(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

        names = PARAM_NAMES[family]
        if len(self.params) != len(names):
            raise ValidationError(
                f"la courbe {family.value} attend les paramètres {names}, reçu {len(self.params)} valeurs"
            )
        if not all(np.isfinite(self.params)):
            raise ValidationError(f"paramètres non finis pour la courbe {family.value}")
        if self.domain_min < 0:
            raise ValidationError("domain_min doit être >= 0")

        p = self.named()
        if family in (CurveFamily.POWER, CurveFamily.LOG_AFFINE, CurveFamily.HYPERBOLIC) and p["b"] <= 0:
            raise ValidationError(f"la courbe {family.value} exige b > 0")
        if family is CurveFamily.POWER and p["gamma"] <= 0:
            raise ValidationError("la courbe power exige gamma > 0")
        if family is CurveFamily.HYPERBOLIC and p["s"] <= 0:
            raise ValidationError("la courbe hyperbolic exige s > 0")

    @classmethod
    def from_named(cls, family: str, domain_min: float = 0.0, **params: float) -> "CurveSpec":
        """Construit la courbe à partir de paramètres nommés (a par défaut à 0)."""
        fam = CurveFamily(family)
        params.setdefault("a", 0.0)
        unknown = set(params) - set(PARAM_NAMES[fam])
        if unknown:
            raise ValidationError(f"paramètre(s) inconnu(s) pour {fam.value} : {sorted(unknown)}")
        missing = [name for name in PARAM_NAMES[fam] if name not in params]
        if missing:
            raise ValidationError(f"paramètre(s) manquant(s) pour {fam.value} : {missing}")
        return cls(fam, tuple(params[name] for name in PARAM_NAMES[fam]), domain_min)

    def named(self) -> Dict[str, float]:
        return dict(zip(PARAM_NAMES[self.family], self.params))

    @property
    def intercept(self) -> float:
        return self.params[0]

    @property
    def is_constant(self) -> bool:
        """Vrai si f′ ≡ 0 (famille constante ou affine de pente nulle)."""
        if self.family is CurveFamily.CONSTANT:
            return True
        return self.family is CurveFamily.AFFINE and self.params[1] == 0.0

    # ---------------------------
    # Évaluations analytiques
    # ---------------------------
    def value(self, n: ArrayLike) -> ArrayLike:
        x = np.asarray(n, dtype=float)
        p = self.named()
        fam = self.family
        if fam is CurveFamily.POWER:
            out = p["a"] + p["b"] * np.power(x, p["gamma"])
        elif fam is CurveFamily.LOG_AFFINE:
            out = p["a"] + p["b"] * np.log1p(x)
        elif fam is CurveFamily.AFFINE:
            out = p["a"] + p["b"] * x
        elif fam is CurveFamily.CONSTANT:
            out = np.full_like(x, p["a"])
        else:
            out = p["a"] + p["b"] / (x + p["s"])
        return _out(out)

    def derivative(self, n: ArrayLike) -> ArrayLike:
        x = np.asarray(n, dtype=float)
        p = self.named()
        fam = self.family
        if fam is CurveFamily.POWER:
            # γ < 1 : la pente diverge en 0
            with np.errstate(divide="ignore"):
                out = p["b"] * p["gamma"] * np.power(x, p["gamma"] - 1.0)
        elif fam is CurveFamily.LOG_AFFINE:
            out = p["b"] / (1.0 + x)
        elif fam is CurveFamily.AFFINE:
            out = np.full_like(x, p["b"])
        elif fam is CurveFamily.CONSTANT:
            out = np.zeros_like(x)
        else:
            out = -p["b"] / (x + p["s"]) ** 2
        return _out(out)

    def second_derivative(self, n: ArrayLike) -> ArrayLike:
        x = np.asarray(n, dtype=float)
        p = self.named()
        fam = self.family
        if fam is CurveFamily.POWER:
            g = p["gamma"]
            with np.errstate(divide="ignore", invalid="ignore"):
                out = p["b"] * g * (g - 1.0) * np.power(x, g - 2.0)
        elif fam is CurveFamily.LOG_AFFINE:
            out = -p["b"] / (1.0 + x) ** 2
        elif fam in (CurveFamily.AFFINE, CurveFamily.CONSTANT):
            out = np.zeros_like(x)
        else:
            out = 2.0 * p["b"] / (x + p["s"]) ** 3
        return _out(out)

    def __call__(self, n: ArrayLike) -> ArrayLike:
        return self.value(n)

    def scaled(self, factor: float) -> "CurveSpec":
        """Multiplie les coefficients monétaires (a, b) par factor ; la forme est inchangée."""
        if factor <= 0:
            raise ValidationError("le facteur d'échelle doit être > 0")
        p = self.named()
        p["a"] *= factor
        if "b" in p:
            p["b"] *= factor
        return CurveSpec.from_named(self.family.value, self.domain_min, **p)


# ---------------------------
# Contrats de forme
# ---------------------------
def _sample(curve: CurveSpec, lo: float, hi: float, samples: int) -> np.ndarray:
    lo = max(lo, curve.domain_min)
    if hi < lo:
        raise ValidationError(f"plage de validation vide [{lo}, {hi}]")
    return np.linspace(lo, hi, samples)


def _check_non_negative(curve: CurveSpec, xs: np.ndarray, role: str) -> None:
    values = curve.value(xs)
    bad = np.flatnonzero(values < 0)
    if bad.size:
        raise ValidationError(f"courbe {role} négative en N={xs[bad[0]]:g} ({values[bad[0]]:g})")


def check_publish_shape(curve: CurveSpec) -> None:
    """Analyse de signe en forme close : la famille doit être concave croissante."""
    fam, p = curve.family, curve.named()
    if fam is CurveFamily.HYPERBOLIC or (fam is CurveFamily.AFFINE and p["b"] < 0):
        raise ValidationError("courbe publish non croissante")
    if fam is CurveFamily.POWER and not p["gamma"] < 1.0:
        raise ValidationError("courbe publish non concave")


def check_read_shape(curve: CurveSpec) -> None:
    """Analyse de signe en forme close : constante ou convexe décroissante."""
    fam, p = curve.family, curve.named()
    if fam in (CurveFamily.POWER, CurveFamily.LOG_AFFINE) or (fam is CurveFamily.AFFINE and p["b"] > 0):
        raise ValidationError("courbe read non décroissante")


def check_publish_curve(curve: CurveSpec, lo: float, hi: float, samples: int = SHAPE_SAMPLES) -> None:
    """
    Contrat « publish » : f′ ≥ 0 et f″ ≤ 0 (concave croissante), f ≥ 0 sur [lo, hi].
    Analyse de signe en forme close par famille, puis contrôle sur un échantillon.
    """
    fam = curve.family
    check_publish_shape(curve)

    xs = _sample(curve, lo, hi, samples)
    _check_non_negative(curve, xs, "publish")
    with np.errstate(invalid="ignore"):
        if np.any(curve.derivative(xs) < -SHAPE_EPS):
            raise ValidationError("courbe publish non croissante")
        if np.any(curve.second_derivative(xs) > SHAPE_EPS):
            raise ValidationError("courbe publish non concave")
    logger.debug("publish curve %s valid on [%g, %g]", fam.value, xs[0], xs[-1])


def check_read_curve(curve: CurveSpec, lo: float, hi: float, samples: int = SHAPE_SAMPLES) -> None:
    """Contrat « read » : constante, ou f′ ≤ 0 et f″ ≥ 0 (convexe décroissante), f ≥ 0."""
    fam = curve.family
    check_read_shape(curve)

    xs = _sample(curve, lo, hi, samples)
    _check_non_negative(curve, xs, "read")
    if np.any(curve.derivative(xs) > SHAPE_EPS):
        raise ValidationError("courbe read non décroissante")
    if np.any(curve.second_derivative(xs) < -SHAPE_EPS):
        raise ValidationError("courbe read non convexe")
    logger.debug("read curve %s valid on [%g, %g]", fam.value, xs[0], xs[-1])
