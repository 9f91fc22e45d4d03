"""
Point d'entrée en ligne de commande.

    python -m src.cli threshold --scenario fig1
    python -m src.cli fee-curve --scenario data/scenarios/fig2.ini --out data/outputs/fig2.csv
    python -m src.cli verify --scenario prop3_convex_rho --tol 1e-5

Codes de sortie : 0 ok, 1 vérification en échec, 2 erreur de configuration, 3 erreur d'E/S.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.data_ingestion.scenario_loader import Scenario, parse_scenario, shipped_scenario
from src.errors import ConfigError, ModelError, NoRootError
from src.numerics.grid import Grid
from src.pricing.fees import threshold
from src.reporting.tables import curve_table, duopoly_table, export_csv, stabilized_table
from src.reporting.verification import run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3

COMMANDS = ("threshold", "fee-curve", "profit-curve", "duopoly", "verify", "stabilize")


def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="src.cli",
        description="Comparative statics of transformative agreements (PAR fee, profit, TA/OA duopoly)",
    )
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument(
        "--scenario", required=True,
        help="Scenario INI file, or the name of a shipped scenario (fig1, fig2, ...)"
    )
    parser.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    parser.add_argument("--grid", default=None, help="Override the sweep grid, as lo:hi:steps")
    parser.add_argument(
        "--tol", type=float, default=None,
        help="Override root_tol (threshold) or deriv_tol (verify)"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return parser


def _resolve(scenario: str) -> Path:
    path = Path(scenario)
    if path.exists() or path.suffix:
        return path
    return shipped_scenario(scenario)


def load(args: argparse.Namespace) -> Scenario:
    """Charge le scénario et applique les surcharges --grid / --tol."""
    scenario = parse_scenario(_resolve(args.scenario), require_duopoly=args.command == "duopoly")
    if args.grid is not None:
        try:
            grid = Grid.parse(args.grid)
        except ModelError as exc:
            raise ConfigError(str(exc), "--grid") from exc
        scenario = scenario.with_grid(grid)
    if args.tol is not None:
        if args.command == "verify":
            if args.tol < 0:
                raise ConfigError("must be >= 0", "--tol")
            scenario = scenario.with_tolerances(deriv_tol=args.tol)
        else:
            if args.tol <= 0:
                raise ConfigError("must be > 0", "--tol")
            scenario = scenario.with_tolerances(root_tol=args.tol)
    return scenario


# ---------------------------
# Commandes
# ---------------------------
def cmd_threshold(scenario: Scenario) -> int:
    grid = scenario.sweep
    try:
        found = threshold(scenario.ta, grid.lo, grid.hi, scenario.tolerances.root_tol)
    except NoRootError as exc:
        print(exc)
        return EXIT_OK
    print(f"N_tilde = {found.n_tilde:.6f}")
    print(f"residual = {found.residual:.3e}")
    print(f"bracket = [{found.bracket_lo:g}, {found.bracket_hi:g}]")
    return EXIT_OK


def _emit(text_or_path: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text_or_path)
    else:
        print(f"written: {text_or_path}")


def cmd_curve(scenario: Scenario, out: Optional[str]) -> int:
    _emit(export_csv(curve_table(scenario), out), out)
    return EXIT_OK


def cmd_stabilize(scenario: Scenario, out: Optional[str]) -> int:
    if scenario.stabilize is None:
        raise ConfigError("missing required section", "stabilize")
    _emit(export_csv(stabilized_table(scenario), out), out)
    return EXIT_OK


def cmd_duopoly(scenario: Scenario, out: Optional[str]) -> int:
    _emit(export_csv(duopoly_table(scenario), out), out)
    return EXIT_OK


def cmd_verify(scenario: Scenario) -> int:
    report = run_verification(scenario)
    for line in report.lines():
        print(line)
    if report.passed:
        print(f"{scenario.name}: all {len(report.checks)} checks passed")
        return EXIT_OK
    failed = sum(not check.passed for check in report.checks)
    print(f"{scenario.name}: {failed} of {len(report.checks)} checks FAILED")
    return EXIT_VERIFY_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    logger.debug("command %s, scenario %s", args.command, args.scenario)

    try:
        scenario = load(args)
        if args.command == "threshold":
            return cmd_threshold(scenario)
        if args.command in ("fee-curve", "profit-curve"):
            return cmd_curve(scenario, args.out)
        if args.command == "stabilize":
            return cmd_stabilize(scenario, args.out)
        if args.command == "duopoly":
            return cmd_duopoly(scenario, args.out)
        return cmd_verify(scenario)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
