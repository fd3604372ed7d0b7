# tests/conftest.py

import pytest

from models.grid import Grid
from models.soliton import SolitonParams
from models.waveguide import WaveguideParams


@pytest.fixture
def waveguide():
    """C = K = 2: KA^2/2 = 1 for the unit soliton."""
    return WaveguideParams(omega0=10.0, k0=5.0, vg=1.0, gvd_C=2.0, kerr_K=2.0)


@pytest.fixture
def wide_grid():
    return Grid(-20.0, 20.0, 1024)


@pytest.fixture
def unit_soliton():
    return SolitonParams(amplitude_A=1.0, width_xi=1.0)
