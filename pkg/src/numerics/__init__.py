from src.numerics.grid import Grid, sweep
from src.numerics.roots import bisect, scan_sign_change
from src.numerics.differentiation import (
    DerivativeReport,
    check_derivative,
    default_step,
    fd_derivative,
    kink_zone,
)

__all__ = [
    "Grid", "sweep", "bisect", "scan_sign_change", "DerivativeReport",
    "check_derivative", "default_step", "fd_derivative", "kink_zone",
]
