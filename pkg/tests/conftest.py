import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qclets.qcgraph import ExponentMatrix, girth

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_matrix(rng, m, n, N, min_girth=6, tries=2000):
    """Random fully-connected exponent matrix with normalized first row/column and girth >= min_girth."""
    for _ in range(tries):
        arr = rng.integers(0, N, size=(m, n))
        arr[0, :] = 0
        arr[:, 0] = 0
        P = ExponentMatrix.from_array(arr, N)
        if girth(P, min_girth) >= min_girth:
            return P
    raise RuntimeError("no matrix with the requested girth found")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
CRITERIA: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    prev = CRITERIA.get(number)
    if prev is not None:
        ok = ok and prev[0]
        detail = f"{prev[1]}; {detail}"
    CRITERIA[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
