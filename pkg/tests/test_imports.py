import hypothesis
import numpy as np
import pandas as pd
import scipy


def test_imports():
    # Juste vérifier que la pile s'importe sans erreur
    assert np.__version__ is not None
    assert pd.__version__ is not None
    assert scipy.__version__ is not None
    assert hypothesis.__version__ is not None


def test_package_imports():
    import src.cli  # noqa: F401
    from src.competition import shift_sweep
    from src.pricing import par_fee, threshold
    from src.reporting import run_verification

    assert callable(par_fee) and callable(threshold)
    assert callable(shift_sweep) and callable(run_verification)
