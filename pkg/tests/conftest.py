import pytest

from kerrcat.fock import FockSpace
from kerrcat.spectral import RobustLineCache

#: one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def robust_cache_2():
    """Robust-line interpolant covering cat sizes up to alpha^2 = 2."""
    return RobustLineCache(0.95, 2.0, FockSpace(30), n_points=40)


@pytest.fixture(scope="session")
def robust_cache_3():
    """Robust-line interpolant covering cat sizes up to alpha^2 = 3."""
    return RobustLineCache(0.95, 3.0, FockSpace(30), n_points=40)


@pytest.fixture(scope="session")
def verdict():
    """Record and assert one pass/fail line per acceptance criterion."""

    def _verdict(tag: str, name: str, ok: bool, detail: str = ""):
        line = f"[ACCEPTANCE {tag}] {name}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return _verdict


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
