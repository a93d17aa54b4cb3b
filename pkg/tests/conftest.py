import pytest
from hypothesis import HealthCheck, settings

from freeballean import preset

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def line4():
    return preset("line", 4)


@pytest.fixture(scope="session")
def line8():
    return preset("line", 8)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict = {}


class _Criterion:
    def __init__(self, number, title):
        self.number, self.title, self.detail = number, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        verdict = "PASS" if exc_type is None else "FAIL"
        ACCEPTANCE[self.number] = f"criterion {self.number} {verdict}: {self.title} ({self.detail})"
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
