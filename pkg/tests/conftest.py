import functools

import numpy as np
import pytest

from moprl.mop import build_sequence
from moprl.weights import ad_condition_case, example_spec, freud_b, hermite_a, scalar_hermite

NILPOTENT_2 = np.array([[0.0, 1.0], [0.0, 0.0]])


@functools.lru_cache(maxsize=None)
def cached_sequence(key: str, n_max: int, tol: float = 1e-12):
    """Ledgers shared across test modules; keys name a weight."""
    if key == "scalar-hermite":
        spec = scalar_hermite()
    elif key == "hermite-a-nil2":
        spec = hermite_a(NILPOTENT_2)
    elif key == "freud-b-scalar":
        spec = freud_b(np.zeros((1, 1)))
    elif key == "freud-b-nil2":
        spec = freud_b(NILPOTENT_2)
    elif key.startswith("case"):
        variant, dim = key.split("-")
        spec = ad_condition_case(variant, np.ones(int(dim) - 1)).weight()
    else:
        family, dim = key.rsplit("-", 1)
        spec = example_spec(family, int(dim))
    return build_sequence(spec, n_max, tol)


@pytest.fixture(scope="session")
def sh8():
    return cached_sequence("scalar-hermite", 8)


@pytest.fixture(scope="session")
def ha6():
    return cached_sequence("hermite-a-nil2", 6)


@pytest.fixture(scope="session")
def seq_factory():
    return cached_sequence


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def report_criterion(capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
