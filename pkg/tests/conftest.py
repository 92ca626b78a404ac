import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from halfplane.generate import random_surface

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def surfaces(draw):
    return random_surface(random.Random(draw(seeds)))


@pytest.fixture
def rng():
    return random.Random(20240601)


ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion(request):
    """Call with (ok, detail) to log one PASS/FAIL line for the acceptance summary."""

    def log(ok: bool, detail: str) -> None:
        name = request.node.name.removeprefix("test_").replace("_", " ")
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
