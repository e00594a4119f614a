import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "msum",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("msum")

_acceptance_lines: list[str] = []


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MSUM_EXTENDED"):
        return
    skip = pytest.mark.skip(reason="slow sweep; set MSUM_EXTENDED=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
