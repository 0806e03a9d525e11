from functools import lru_cache

import pytest

from qdecay.core import TimeGrid
from qdecay.reservoir import LorentzianCorrelation, LorentzianParams
from qdecay.volterra import solve_amplitude

FINE_H = 1e-3


@lru_cache(maxsize=None)
def lorentzian_solution(gamma0, lam=1.0, h=FINE_H, t_end=10.0):
    """Solve the amplitude equation once per parameter set and reuse."""
    cf = LorentzianCorrelation(LorentzianParams(gamma0, lam))
    grid = TimeGrid(h, round(t_end / h))
    g, gdot = solve_amplitude(cf, grid)
    return cf, grid, g, gdot


@pytest.fixture(scope="session")
def solve():
    return lorentzian_solution
