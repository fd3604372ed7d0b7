# services/quantum_stats.py

"""
Coherent-state photon statistics and Kerr phases of the one-soliton state.

The soliton is represented by the coherent state |alpha(t)> with
alpha(0) = sqrt(2 xi) A and alpha(t) = alpha(0) exp(i K A^2 t / 2); only this
c-number amplitude reading is implemented. Probabilities are the Poisson
weights p_n = exp(-|alpha|^2) |alpha|^(2n) / n!, computed in log space.
"""

import logging
import math
from typing import Tuple

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from models.quantum import CoherentAmplitude, PhotonPmf
from models.soliton import SolitonParams
from models.waveguide import WaveguideParams
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

# хвост больше этого значения помечается флагом предупреждения
TAIL_MASS_BOUND = 0.5


def alpha0(p: SolitonParams, w: WaveguideParams = None) -> CoherentAmplitude:
    """alpha(0) = sqrt(2 xi) A, real and non-negative."""
    return CoherentAmplitude(math.sqrt(2.0 * p.width_xi) * p.amplitude_A, soliton=p, waveguide=w)


def alpha_t(a0: CoherentAmplitude, K: float, A: float, t: float) -> CoherentAmplitude:
    """alpha(t) = alpha(0) exp(i K A^2 t / 2)."""
    return CoherentAmplitude(
        a0.alpha * np.exp(0.5j * K * A ** 2 * t), soliton=a0.soliton, waveguide=a0.waveguide
    )


def default_n_max(mean: float) -> int:
    """ceil(|alpha|^2 + 10 sqrt(|alpha|^2) + 20): Poisson tail past it is below 1e-12."""
    return int(math.ceil(mean + 10.0 * math.sqrt(mean) + 20.0))


def photon_pmf(a: CoherentAmplitude, n_max: int = None) -> PhotonPmf:
    """
    Poisson photon-number distribution of the coherent state, truncated at n_max.

    The result carries tail_exceeded=True (and a warning is logged) when the
    discarded tail exceeds TAIL_MASS_BOUND or n_max is below the mean.
    """
    mean = a.mean_photon_number
    if n_max is None:
        n_max = default_n_max(mean)
    if isinstance(n_max, bool) or not isinstance(n_max, (int, np.integer)) or n_max < 0:
        raise ConfigError(f"n_max must be a non-negative integer, got {n_max}")
    n_max = int(n_max)

    n = np.arange(n_max + 1)
    if mean == 0.0:
        probabilities = np.zeros(n_max + 1)
        probabilities[0] = 1.0
        tail = 0.0
    else:
        probabilities = np.exp(poisson.logpmf(n, mean))
        tail = float(poisson.sf(n_max, mean))

    tail_exceeded = tail > TAIL_MASS_BOUND or n_max < mean
    if tail_exceeded:
        logger.warning(
            f"PMF truncated at n_max={n_max} for mean {mean:.6g}: tail mass {tail:.3e}"
        )
    return PhotonPmf(probabilities=probabilities, n_max=n_max, tail_mass=tail, tail_exceeded=tail_exceeded)


def number_state_amplitudes(a: CoherentAmplitude, n_max: int) -> np.ndarray:
    """
    Coherent-state coefficients c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!).

    The Kerr phase n * K A^2 t / 2 of each number state enters through arg(alpha(t)).
    """
    n = np.arange(n_max + 1)
    modulus = abs(a.alpha)
    if modulus == 0.0:
        coefficients = np.zeros(n_max + 1, dtype=np.complex128)
        coefficients[0] = 1.0
        return coefficients
    log_modulus = -0.5 * modulus ** 2 + n * math.log(modulus) - 0.5 * gammaln(n + 1)
    return np.exp(log_modulus) * np.exp(1j * n * np.angle(a.alpha))


def number_state_phase(n: int, K: float, A: float, t: float) -> float:
    """Kerr phase K A^2 t n / 2 of the number state |n>."""
    if n < 0:
        raise ConfigError(f"Photon number n must be >= 0, got {n}")
    return K * A ** 2 * t * n / 2.0


def pmf_moments(pmf: PhotonPmf) -> Tuple[float, float]:
    """Mean and variance of the truncated distribution."""
    n = pmf.n
    p = pmf.probabilities
    mean = float(np.sum(n * p))
    variance = float(np.sum((n - mean) ** 2 * p))
    return mean, variance


def fano_factor(pmf: PhotonPmf) -> float:
    """variance / mean; 1 for a coherent state. NaN for the vacuum."""
    mean, variance = pmf_moments(pmf)
    if mean == 0.0:
        return float('nan')
    return variance / mean
