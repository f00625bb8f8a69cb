import numpy as np
import pytest

from superint.verifier import SampleSpec, sample_arrays

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def points():
    """``points(n, count, seed)`` -> (Q, P) sampled away from the coordinate hyperplanes."""

    def make(n, count=100, seed=11):
        return sample_arrays(SampleSpec(count, seed), n)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
