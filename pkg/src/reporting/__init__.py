from src.reporting.tables import curve_table, duopoly_table, export_csv, stabilized_table, to_csv_text
from src.reporting.verification import CheckResult, VerificationReport, run_verification

__all__ = [
    "curve_table", "duopoly_table", "export_csv", "stabilized_table", "to_csv_text",
    "CheckResult", "VerificationReport", "run_verification",
]
