import pytest

from randpoly.sampling import VertexSet


@pytest.fixture
def square():
    return VertexSet.from_points(2, [0b00, 0b01, 0b10, 0b11])


@pytest.fixture(scope="session")
def criteria(request):
    """Collects (number, passed, detail) for the acceptance summary."""
    log = getattr(request.config, "_criteria", None)
    if log is None:
        log = request.config._criteria = {}
    return log


def pytest_terminal_summary(terminalreporter, config):
    log = getattr(config, "_criteria", None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(log):
        passed, detail = log[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
