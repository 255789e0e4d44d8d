import pytest

_RESULTS: dict[str, tuple[str, str]] = {}


@pytest.fixture
def criterion():
    """``criterion(key, status, detail)`` records one line for the acceptance summary."""

    def record(key: str, status: str, detail: str = "") -> None:
        _RESULTS[key] = (status, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=lambda k: int(k.split()[0])):
        status, detail = _RESULTS[key]
        terminalreporter.write_line(f"{status:17s} criterion {key}: {detail}")
