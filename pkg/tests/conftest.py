import pytest

from neutral_lame.core_model import CoatedDisks, phases_from_moduli


@pytest.fixture
def template():
    """mu_c=2, kappa_c=1, mu_s=1, kappa_s=2, mu_m=1 with kappa_m still free."""
    return CoatedDisks(1.0, 2.0), phases_from_moduli([2.0, 1.0, 1.0], [1.0, 2.0, 1.0])


@pytest.fixture
def neutral_template():
    return CoatedDisks(1.0, 2.0), phases_from_moduli([2.0, 1.0, 1.0], [1.0, 2.0, 5.0 / 3.0])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line, print it, then assert the outcome."""
    def report(number: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
