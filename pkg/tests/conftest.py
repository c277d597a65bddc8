import numpy as np
import pytest

from nls_szego import (
    FunctionalParams,
    Grid,
    HardyField,
    SpectralField,
    default_ground_state,
    minimize_functional,
    szego_project,
    weinstein_r,
)


@pytest.fixture(scope="session")
def small_grid():
    return Grid(256, 100.0)


@pytest.fixture(scope="session")
def circle_grid():
    # L = 2*pi makes the wavenumbers exactly the integers -n/2 .. n/2-1
    return Grid(64, 2 * np.pi)


@pytest.fixture(scope="session")
def gs_gamma2():
    """Converged gamma=2 Hardy ground state on the full-accuracy grid."""
    return default_ground_state(Grid(2 ** 15, 1000.0), FunctionalParams(m=2, gamma=2.0))


@pytest.fixture(scope="session")
def gs_gamma0_hardy():
    """Converged gamma=0 Hardy ground state (bracket checks, threshold scan)."""
    return default_ground_state(Grid(2 ** 14, 500.0), FunctionalParams(m=2, gamma=0.0))


@pytest.fixture(scope="session")
def gs_gamma0_general():
    """gamma=0 minimization over general two-sided fields (Weinstein profile)."""
    g = Grid(2 ** 12, 300.0)
    init = SpectralField(g, samples=np.exp(-(g.x / 1.0) ** 2))
    return minimize_functional(init, FunctionalParams(m=2, gamma=0.0))


def random_field(grid, seed, band=None):
    """Seeded random field, optionally band-limited to |k| <= band."""
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
    if band is not None:
        c[np.abs(grid.k) > band] = 0.0
    return SpectralField(grid, coefficients=c)


def random_hardy(grid, seed, band=None, zero_mean=False):
    f = szego_project(random_field(grid, seed, band))
    if zero_mean:
        c = f.coefficients.copy()
        c[0] = 0.0
        f = HardyField(grid, coefficients=c)
    return f
