import pytest

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def record():
    """Record one acceptance line: ``record(n, ok, detail)``."""
    def _record(n: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[n] = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(ACCEPTANCE[n])
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
