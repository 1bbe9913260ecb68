import random

import pytest
from hypothesis import HealthCheck, settings

from propinterp import parse

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_REPORT: list[tuple[str, bool, str]] = []


class Acceptance:
    """Collects one verdict per acceptance criterion for the summary."""

    def record(self, name: str, ok: bool, detail: str = "") -> bool:
        _REPORT.append((name, ok, detail))
        return ok


@pytest.fixture(scope="session")
def acceptance():
    return Acceptance()


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def P():
    return parse


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _REPORT:
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
    n_ok = sum(ok for _, ok, _ in _REPORT)
    terminalreporter.write_line(f"{n_ok}/{len(_REPORT)} criteria passed")
