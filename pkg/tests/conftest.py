import pytest

from radreact import GaussianBump, PhysicalParams, SmoothStep

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def params():
    return PhysicalParams(m=1.0, alpha=0.01, hbar_eff=1.0)


@pytest.fixture(scope="session")
def step():
    return SmoothStep(0.01, 1.0, 0.0)


@pytest.fixture(scope="session")
def early_bump():
    """Bump whose acceleration pulse has ended well before t = 0."""
    return GaussianBump(0.001, 1.0, -9.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
