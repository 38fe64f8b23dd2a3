import random

import pytest
from hypothesis import HealthCheck, settings

from finitetopo import Poset, SimplicialComplex

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# one line per acceptance criterion, printed after the test summary;
# stored on the config object so the hook and the tests share one list
def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config._acceptance_lines


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def poset_from_seed(seed: int, size: int, density: float = 0.3) -> Poset:
    """Deterministic random poset; mirrors the generator used by the CLI."""
    from finitetopo import fixtures

    return fixtures.random_poset(random.Random(seed), size, density)


def complex_from_seed(seed: int, max_vertices: int = 7) -> SimplicialComplex:
    from finitetopo import fixtures

    return fixtures.random_complex(random.Random(seed), max_vertices)


@pytest.fixture(scope="session")
def rng_pool():
    return random.Random(20240917)
