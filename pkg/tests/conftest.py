import numpy as np
import pytest

from lzkit import LZConfig, SolverOptions, integrate


@pytest.fixture(scope="session")
def traj_eps3_tau100():
    """Shared reference run at the canonical parameters eps=3, tau0=100.

    Grid step 0.1 so that tau = +-5, +-10, ... are exact grid points.
    """
    cfg = LZConfig(3.0, 100.0)
    grid = np.linspace(-100.0, 100.0, 2001)
    return integrate(cfg, SolverOptions(sample_grid=grid))


def grid_index(traj, tau):
    i = int(np.argmin(np.abs(traj.tau - tau)))
    assert abs(traj.tau[i] - tau) < 1e-9
    return i
