import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models import get_model  # noqa: E402
from numerics.grid import GridSpec  # noqa: E402
from solvers.settings import SolverConfig  # noqa: E402

SCENARIO_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "scenarios")


@pytest.fixture(scope="session")
def grid():
    return GridSpec(20.0, 512)


@pytest.fixture(scope="session")
def coarse_grid():
    return GridSpec(20.0, 256)


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(10.0, 64)


@pytest.fixture
def gaussian(grid):
    return grid.sample(lambda x: np.exp(-x ** 2))


@pytest.fixture(params=["rational_sqrt", "arctan", "cubic", "linear"])
def any_model(request):
    return get_model(request.param)


@pytest.fixture(scope="session")
def rational():
    return get_model("rational_sqrt")


@pytest.fixture(scope="session")
def linear():
    return get_model("linear")


@pytest.fixture(scope="session")
def acceptance_config():
    return SolverConfig(nu=1.0, dt=5e-4, s=3.0, delta_bar=2.0, M=5.0, delta=0.5, theta_floor=0.1, fp_tol=1e-10)


@pytest.fixture(scope="session")
def acceptance_run(grid, rational, acceptance_config):
    """Picard fixed point and oracle run on 0.05 exp(-x^2), T = 0.5."""
    from numerics.grid import derivative
    from solvers.fixed_point import picard_iterate
    from solvers.oracle import oracle_run

    eta0 = grid.sample(lambda x: 0.05 * np.exp(-x ** 2))
    eta1 = grid.zeros()
    traj, history = picard_iterate(eta0, eta1, rational, acceptance_config, 0.5)
    oracle = oracle_run(derivative(eta0), derivative(eta1), rational, 1.0, 5e-4, 0.5)
    return traj, history, oracle


def scenario_path(name: str) -> str:
    return os.path.join(SCENARIO_DIR, name)
