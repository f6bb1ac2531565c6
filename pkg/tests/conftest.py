import pytest
from hypothesis import settings

from cogredient.localring import make_ring

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# one ring per family plus both -1 branches
SMALL_RINGS = [
    "zmod:3",
    "zmod:3^2",
    "zmod:3^3",
    "zmod:5",
    "zmod:5^2",
    "zmod:7",
    "zmod:13",
    "gr:3^2:2",
    "gr:3^1:3",
    "gr:5^2:2",
    "trunc:3:1:2",
    "trunc:3:2:2",
    "trunc:5:1:3",
]


@pytest.fixture(params=SMALL_RINGS)
def ring(request):
    return make_ring(request.param)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
