import pytest

from swipt import build, default_params


@pytest.fixture
def params():
    """Reference budget: 10 mW avg, 30 mW peak, 10 m, lambda=3, -50 dBm noise, -20 dBm floor, Rayleigh."""
    return default_params()


@pytest.fixture(params=["psk", "pam", "qam"])
def constellation16(request):
    return build(request.param, 16)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
