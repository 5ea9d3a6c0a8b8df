import pytest

from wltl.monoid import LIMINF, TROPICAL

ACCEPTANCE: dict = {}


def record(number: int, ok: bool, detail: str = "") -> None:
    """Store the verdict of an acceptance criterion for the end-of-run summary."""
    ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)


@pytest.fixture(params=[TROPICAL, LIMINF], ids=lambda m: m.name)
def monoid(request):
    return request.param
