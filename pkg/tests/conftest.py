import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from expfam import build_family  # noqa: E402


@pytest.fixture
def three_state():
    """Statistics (0, 1, 2) with reference measure (1, 4, 1)."""
    return build_family(["0", "1", "2"], [1, 4, 1], [[0, 1, 2]])


@pytest.fixture
def blocks():
    """Block indicators of {{0, 1}, {2, 3}} with uniform reference measure."""
    return build_family(4, [1, 1, 1, 1], [[1, 1, 0, 0], [0, 0, 1, 1]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import acceptance_record

    if not acceptance_record.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance_record.RESULTS):
        ok, detail = acceptance_record.RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
