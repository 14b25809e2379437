import numpy as np
import pytest

from cahnblow.core import Field, Grid
from cahnblow.profiles import solve_profile
from cahnblow.simulate import SimConfig, run

# large-data blow-up run shared by the simulate, rescale and acceptance tests
DEMO = dict(L=8.0, x0=-4.0, n=16384, amp=10.0, M=300.0, grow_tol=0.01, shrink_tol=0.001)


def demo_config(p=3.0, n=DEMO["n"]):
    grid = Grid.line(DEMO["L"], n, "periodic", x0=DEMO["x0"])
    cfg = SimConfig(
        p=p, gamma=0.0, sign="unstable", grid=grid,
        blowup_threshold=DEMO["M"], grow_tol=DEMO["grow_tol"],
        shrink_tol=DEMO["shrink_tol"], snapshot_stride=1,
    )
    u0 = Field.from_function(grid, lambda x: DEMO["amp"] * np.exp(-x * x))
    return cfg, u0


@pytest.fixture(scope="session")
def blowup_run():
    cfg, u0 = demo_config()
    return run(cfg, u0)


@pytest.fixture(scope="session")
def profile_p3():
    return solve_profile(3.0)


@pytest.fixture(scope="session")
def profile_p2():
    return solve_profile(2.0)


@pytest.fixture(scope="session")
def profile_p4():
    return solve_profile(4.0)


def navier(L=np.pi, n=255):
    return Grid.line(L, n, "navier")


def periodic(L=2 * np.pi, n=256):
    return Grid.line(L, n, "periodic")


# acceptance criterion number -> summary line, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
