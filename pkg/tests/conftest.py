import numpy as np
import pytest

from resonance_lab.model import PhysicalState, canonical_model
from resonance_lab.oracle import discretize
from resonance_lab.resonance import find_pole


@pytest.fixture(scope="session")
def model():
    return canonical_model(0.2)


@pytest.fixture(scope="session")
def pole(model):
    return find_pole(model)


@pytest.fixture(scope="session")
def mixed_state():
    return PhysicalState(c1=1 / np.sqrt(2), a=1 / np.sqrt(2), p=1j)


@pytest.fixture(scope="session")
def oracle_2000(model):
    return discretize(model, 2000)


@pytest.fixture(scope="session")
def oracle_4000(model):
    return discretize(model, 4000)


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record an acceptance verdict; printed as one line per criterion after the run."""
    def record(number: int, ok: bool, detail: str):
        prev = _CRITERIA.get(number)
        if prev is not None:
            ok, detail = prev[0] and ok, f"{prev[1]}; {detail}"
        _CRITERIA[number] = (bool(ok), detail)
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
