# Lecture et validation des fichiers de scénario (format INI à clés pointées)
import configparser
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Set, Tuple, Union

from src.competition.duopoly import DuopolyScenario
from src.errors import ConfigError, ModelError
from src.numerics.differentiation import DERIV_TOL
from src.numerics.grid import Grid
from src.numerics.roots import ROOT_TOL
from src.pricing.curves import PARAM_NAMES, CurveFamily, CurveSpec, check_publish_curve, check_read_curve
from src.pricing.publishers import OAPublisher, TAPublisher

logger = logging.getLogger(__name__)

# Dossier des scénarios livrés
SCENARIO_DIR = Path(__file__).resolve().parents[2] / "data" / "scenarios"

ALLOWED_KEYS: Dict[str, Set[str]] = {
    "scenario": {"name"},
    "ta": {"marginal_cost", "fixed_cost"},
    "oa": {"marginal_cost", "fixed_cost"},
    "market": {"budget", "n_total", "contracted_volume", "contracted_fee"},
    "sweep": {"lo", "hi", "steps"},
    "tolerances": {"root_tol", "deriv_tol", "near_zero_band"},
    "stabilize": {"n_lo", "n_hi"},
}
CURVE_PREFIXES = {"ta": ("publish", "read"), "oa": ("publish",)}


@dataclass(frozen=True)
class Tolerances:
    root_tol: float = ROOT_TOL
    deriv_tol: float = DERIV_TOL
    # None : bande automatique |φ_OA − φ_TA|
    near_zero_band: Optional[float] = None


@dataclass(frozen=True)
class Scenario:
    name: str
    ta: TAPublisher
    sweep: Grid
    tolerances: Tolerances = field(default_factory=Tolerances)
    oa: Optional[OAPublisher] = None
    budget: Optional[float] = None
    n_total: Optional[float] = None
    stabilize: Optional[Tuple[float, float]] = None
    contracted_volume: Optional[float] = None
    contracted_fee: Optional[float] = None

    @property
    def is_duopoly(self) -> bool:
        return self.oa is not None and self.budget is not None and self.n_total is not None

    def duopoly(self) -> DuopolyScenario:
        """Scénario de duopole ; lève ConfigError si oa, budget ou n_total manquent."""
        if self.oa is None:
            raise ConfigError("oa section required", "oa")
        if self.budget is None:
            raise ConfigError("budget required", "market.budget")
        if self.n_total is None:
            raise ConfigError("n_total required", "market.n_total")
        try:
            return DuopolyScenario(self.budget, self.n_total, self.ta, self.oa)
        except ModelError as exc:
            raise ConfigError(str(exc), "oa") from exc

    def with_grid(self, grid: Grid) -> "Scenario":
        """Même scénario avec une autre grille (contrats de forme revérifiés sur la nouvelle plage)."""
        try:
            self.ta.validate_range(grid.lo, grid.hi)
        except ModelError as exc:
            raise ConfigError(str(exc), "--grid") from exc
        return replace(self, sweep=grid)

    def with_tolerances(self, **overrides: float) -> "Scenario":
        return replace(self, tolerances=replace(self.tolerances, **overrides))


class _Reader:
    """Accès aux clés avec chemin « section.clé » dans les messages, et suivi des clés consommées."""

    def __init__(self, parser: configparser.ConfigParser):
        self.parser = parser
        self.used: Set[str] = set()

    def has(self, section: str, key: Optional[str] = None) -> bool:
        if key is None:
            return self.parser.has_section(section)
        return self.parser.has_option(section, key)

    def text(self, section: str, key: str, default: Optional[str] = None) -> Optional[str]:
        path = f"{section}.{key}"
        if not self.parser.has_option(section, key):
            return default
        self.used.add(path)
        return self.parser.get(section, key).strip()

    def number(self, section: str, key: str, default: Optional[float] = None,
               required: bool = False) -> Optional[float]:
        path = f"{section}.{key}"
        raw = self.text(section, key)
        if raw is None:
            if required:
                raise ConfigError("missing required key", path)
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"not a number: {raw!r}", path) from None

    def unknown_keys(self) -> Set[str]:
        every = {f"{s}.{k}" for s in self.parser.sections() for k in self.parser.options(s)}
        return every - self.used


def _parse_curve(reader: _Reader, section: str, role: str) -> CurveSpec:
    prefix = f"{role}."
    path = f"{section}.{role}"
    family = reader.text(section, f"{role}.family")
    if family is None:
        raise ConfigError("missing required key", f"{path}.family")
    try:
        fam = CurveFamily(family)
    except ValueError:
        choices = ", ".join(f.value for f in CurveFamily)
        raise ConfigError(f"unknown family {family!r} (expected one of {choices})", f"{path}.family") from None

    params = {}
    for name in PARAM_NAMES[fam]:
        params[name] = reader.number(section, prefix + name, default=0.0 if name == "a" else None,
                                     required=name != "a")
    domain_min = reader.number(section, prefix + "domain_min", default=0.0)
    try:
        return CurveSpec.from_named(fam.value, domain_min, **params)
    except ModelError as exc:
        raise ConfigError(str(exc), path) from exc


def _check_curve(check, curve: CurveSpec, grid: Grid, path: str) -> None:
    try:
        check(curve, grid.lo, grid.hi)
    except ModelError as exc:
        raise ConfigError(str(exc), path) from exc


def _parse_costs(reader: _Reader, section: str) -> Tuple[float, float]:
    costs = []
    for key in ("marginal_cost", "fixed_cost"):
        value = reader.number(section, key, default=0.0)
        if value < 0:
            raise ConfigError("must be >= 0", f"{section}.{key}")
        costs.append(value)
    return costs[0], costs[1]


def _parse_grid(reader: _Reader) -> Grid:
    if not reader.has("sweep"):
        raise ConfigError("missing required section", "sweep")
    lo = reader.number("sweep", "lo", required=True)
    hi = reader.number("sweep", "hi", required=True)
    steps = reader.number("sweep", "steps", required=True)
    if not steps.is_integer():
        raise ConfigError("must be an integer", "sweep.steps")
    try:
        return Grid(lo, hi, int(steps))
    except ModelError as exc:
        raise ConfigError(str(exc), "sweep") from exc


def _parse_tolerances(reader: _Reader) -> Tolerances:
    root_tol = reader.number("tolerances", "root_tol", default=ROOT_TOL)
    deriv_tol = reader.number("tolerances", "deriv_tol", default=DERIV_TOL)
    band = reader.number("tolerances", "near_zero_band")
    if root_tol <= 0:
        raise ConfigError("must be > 0", "tolerances.root_tol")
    if deriv_tol < 0:
        raise ConfigError("must be >= 0", "tolerances.deriv_tol")
    if band is not None and band < 0:
        raise ConfigError("must be >= 0", "tolerances.near_zero_band")
    return Tolerances(root_tol, deriv_tol, band)


def parse_scenario(path: Union[str, Path], require_duopoly: bool = False) -> Scenario:
    """
    Charge un scénario depuis un fichier INI et vérifie tous les contrats de forme.
    Mode strict : toute section ou clé inconnue est une erreur.

    :param path: chemin du fichier (.ini)
    :param require_duopoly: exiger oa, market.budget et market.n_total (commande duopoly)
    :return: Scenario validé
    """
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    with open(path, encoding="utf-8") as handle:
        try:
            parser.read_file(handle)
        except configparser.Error as exc:
            raise ConfigError(f"malformed scenario file: {exc}") from exc

    for section in parser.sections():
        if section not in ALLOWED_KEYS:
            raise ConfigError("unknown section", section)

    reader = _Reader(parser)
    name = reader.text("scenario", "name", default=path.stem)
    grid = _parse_grid(reader)

    # === Éditeur TA ===
    if not reader.has("ta"):
        raise ConfigError("missing required section", "ta")
    publish = _parse_curve(reader, "ta", "publish")
    read = _parse_curve(reader, "ta", "read")
    _check_curve(check_publish_curve, publish, grid, "ta.publish")
    _check_curve(check_read_curve, read, grid, "ta.read")
    ta = TAPublisher(publish, read, *_parse_costs(reader, "ta"))

    # === Éditeur OA (optionnel) ===
    oa = None
    if reader.has("oa"):
        oa_publish = _parse_curve(reader, "oa", "publish")
        _check_curve(check_publish_curve, oa_publish, grid, "oa.publish")
        oa = OAPublisher(oa_publish, *_parse_costs(reader, "oa"))

    # === Marché ===
    budget = reader.number("market", "budget")
    n_total = reader.number("market", "n_total")
    if budget is not None and budget <= 0:
        raise ConfigError("must be > 0", "market.budget")
    if n_total is not None and n_total <= 0:
        raise ConfigError("must be > 0", "market.n_total")
    contracted_volume = reader.number("market", "contracted_volume")
    contracted_fee = reader.number("market", "contracted_fee")
    if (contracted_volume is None) != (contracted_fee is None):
        raise ConfigError("contracted_volume and contracted_fee go together", "market.contracted_fee")

    stabilize = None
    if reader.has("stabilize"):
        n_lo = reader.number("stabilize", "n_lo", required=True)
        n_hi = reader.number("stabilize", "n_hi", required=True)
        if not 0 < n_lo <= n_hi:
            raise ConfigError("requires 0 < n_lo <= n_hi", "stabilize")
        stabilize = (n_lo, n_hi)

    tolerances = _parse_tolerances(reader)

    # les clés des courbes non reconnues (ex. ta.read.b pour une constante) restent non consommées
    unknown = sorted(reader.unknown_keys())
    if unknown:
        raise ConfigError("unknown key", unknown[0])

    scenario = Scenario(name=name, ta=ta, sweep=grid, tolerances=tolerances, oa=oa, budget=budget,
                        n_total=n_total, stabilize=stabilize, contracted_volume=contracted_volume,
                        contracted_fee=contracted_fee)
    if require_duopoly or scenario.is_duopoly:
        scenario.duopoly()
    logger.info("scenario %r loaded from %s", name, path)
    return scenario


def shipped_scenario(name: str) -> Path:
    """Chemin d'un scénario livré dans data/scenarios."""
    return SCENARIO_DIR / f"{name}.ini"
