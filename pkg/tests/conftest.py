import mpmath
import pytest

mpmath.mp.dps = 40

_ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Collect one PASS/FAIL line per acceptance criterion."""
    def _record(number, name, ok, detail):
        line = f"criterion {number} [{name}]: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
