import numpy as np
import pytest

from daqc import kernels


@pytest.fixture(params=kernels.available())
def backend(request):
    previous = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    seen = []

    def record(number, title, ok, detail=""):
        seen.append(number)
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        request.config.stash[ACCEPTANCE].append(line + (f"  ({detail})" if detail else ""))
        print(line)
        return ok

    yield record
    if not seen:
        number = request.node.name.split("_")[1]
        request.config.stash[ACCEPTANCE].append(f"criterion {number}: FAIL  raised before a verdict")
