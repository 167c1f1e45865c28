import numpy as np
import pytest

_VERDICTS = []


@pytest.fixture
def acceptance_verdict():
    """Record one pass/fail line per acceptance criterion for the summary."""
    def record(criterion: str, passed: bool, detail: str = ""):
        _VERDICTS.append((criterion, bool(passed), detail))
        return bool(passed)
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _VERDICTS:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish random unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_row_stochastic(rng: np.random.Generator, shape=(4, 4)) -> np.ndarray:
    m = rng.random(shape)
    return m / m.sum(axis=1, keepdims=True)
