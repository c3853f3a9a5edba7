import numpy as np
import pytest

from obliquebie import specfun
from obliquebie.cli import solve_scene
from obliquebie.config import build, preset_raw


@pytest.fixture(params=specfun.available_backends())
def backend(request):
    previous = specfun.set_backend(request.param)
    yield request.param
    specfun.set_backend(previous)


@pytest.fixture(scope="session")
def example1():
    return build(preset_raw("example1"))


@pytest.fixture(scope="session")
def example1_solved(example1):
    """Manufactured example-1 scene solved at n = 64."""
    return solve_scene(example1.scene, 64, "manufactured", example1.sources)


@pytest.fixture(scope="session")
def example3():
    return build(preset_raw("example3"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for report in terminalreporter.stats.get(key, []):
            if report.when != "call":
                continue
            lines += [value for name, value in report.user_properties if name == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
