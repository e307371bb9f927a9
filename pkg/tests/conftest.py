import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from adhm_lab import DimVector, EnhancedDatum

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("adhm", deadline=None, max_examples=25, derandomize=True)
settings.load_profile("adhm")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def line_datum():
    """(1,2,1): ``A = diag(0,1)``, ``B = diag(0,2)``, ``F = e_1``, ``I = (1,1)^T``."""
    return EnhancedDatum(
        DimVector(1, 2, 1),
        np.diag([0, 1]),
        np.diag([0, 2]),
        [[1], [1]],
        np.zeros((1, 2)),
        [[0]],
        [[0]],
        [[1], [0]],
    )



def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
