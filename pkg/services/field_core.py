# services/field_core.py

"""
Shared numerical substrate: wavenumbers, spectral transforms, norms.

FFT convention. The spectrum is the discrete analog of the symmetric continuum
transform F(k) = (1/sqrt(2*pi)) * integral exp(-i k z) a(z) dz, taken with the
absolute coordinates z_j = z_min + j*dz:

    spectrum[m] = dz / sqrt(2*pi) * sum_j a_j * exp(-i k_m z_j)
    a_j         = sqrt(2*pi) / L  * sum_m spectrum[m] * exp(+i k_m z_j)

so fft_inverse(fft_forward(f)) == f up to roundoff and Parseval reads

    sum_j |a_j|^2 dz == dk * sum_m |spectrum[m]|^2,   dk = 2*pi / L.

Because z_min is folded in, the spectrum of a pulse centred at z = 0 is directly
comparable with a closed-form transform such as xi*sqrt(pi/2)*sech(pi*k*xi/2).
"""

import logging
import math

import numpy as np
import scipy.fft

from models.grid import ComplexField, Grid
from utils.errors import GridError

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)


def wavenumbers(grid: Grid) -> np.ndarray:
    """
    FFT-ordered wavenumbers k_m = 2*pi*m/L, m in [-n/2, n/2).
    """
    n = grid.n_points
    # целые индексы мод считаем отдельно, чтобы k*L/(2*pi) было точно целым
    m = scipy.fft.fftfreq(n, d=1.0 / n)
    return (2.0 * math.pi / grid.length) * m


def _shift_phase(grid: Grid, sign: float) -> np.ndarray:
    return np.exp(sign * 1j * wavenumbers(grid) * grid.z_min)


def fft_forward(field: ComplexField) -> np.ndarray:
    """
    Continuum-normalized spectrum of a field (see module docs for the convention).
    """
    grid = field.grid
    return (grid.dz / SQRT_2PI) * _shift_phase(grid, -1.0) * scipy.fft.fft(field.samples)


def fft_inverse(spectrum: np.ndarray, grid: Grid) -> ComplexField:
    """
    Inverse of fft_forward.

    Raises:
        GridError: if the spectrum length does not match the grid.
    """
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    if spectrum.ndim != 1 or spectrum.size != grid.n_points:
        raise GridError(f"Spectrum has {spectrum.size} modes, grid expects {grid.n_points}")
    samples = (SQRT_2PI / grid.dz) * scipy.fft.ifft(spectrum * _shift_phase(grid, 1.0))
    return ComplexField(grid, samples)


def spectral_derivative(field: ComplexField, order: int = 1) -> np.ndarray:
    """
    d^order a / dz^order evaluated spectrally on the periodic grid.
    """
    k = wavenumbers(field.grid)
    multiplier = (1j * k) ** order
    if order % 2 == 1:
        # мода Найквиста несимметрична: для нечётных производных её обнуляем
        multiplier[field.grid.n_points // 2] = 0.0
    return scipy.fft.ifft(multiplier * scipy.fft.fft(field.samples))


def l2_norm_sq(field: ComplexField) -> float:
    """
    Photon count sum_j |a_j|^2 * dz (rectangle rule, exact trapezoid on a periodic grid).
    """
    return float(np.sum(np.abs(field.samples) ** 2) * field.grid.dz)


def spectral_norm_sq(spectrum: np.ndarray, grid: Grid) -> float:
    """Parseval counterpart of l2_norm_sq: dk * sum |spectrum|^2."""
    dk = 2.0 * math.pi / grid.length
    return float(np.sum(np.abs(np.asarray(spectrum)) ** 2) * dk)


def max_abs_diff(f: ComplexField, g: ComplexField) -> float:
    """
    max_j |f_j - g_j|.

    Raises:
        GridError: if the fields live on different grids.
    """
    if f.grid != g.grid:
        raise GridError(f"Grid mismatch: {f.grid} vs {g.grid}")
    return float(np.max(np.abs(f.samples - g.samples)))
