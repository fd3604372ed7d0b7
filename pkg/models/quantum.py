# models/quantum.py

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from models.soliton import SolitonParams
from models.waveguide import WaveguideParams
from utils.errors import ConfigError
from utils.validators import validate_finite_array, validate_finite_number


@dataclass(frozen=True)
class CoherentAmplitude:
    """
    Амплитуда когерентного состояния alpha и параметры, из которых она построена.
    """
    alpha: complex
    soliton: Optional[SolitonParams] = None
    waveguide: Optional[WaveguideParams] = None

    def __post_init__(self):
        if not validate_finite_array(self.alpha):
            raise ConfigError(f"alpha must be finite, got {self.alpha}")
        object.__setattr__(self, 'alpha', complex(self.alpha))

    @property
    def mean_photon_number(self) -> float:
        """|alpha|^2."""
        return abs(self.alpha) ** 2


@dataclass(frozen=True, eq=False)
class PhotonPmf:
    """
    Распределение числа фотонов p_0..p_nmax и масса отброшенного хвоста.
    tail_exceeded - флаг предупреждения: хвост больше допустимого или n_max
    меньше среднего числа фотонов.
    """
    probabilities: Any = field(repr=False)
    n_max: int
    tail_mass: float
    tail_exceeded: bool = False

    def __post_init__(self):
        probabilities = np.array(self.probabilities, dtype=float)
        if probabilities.ndim != 1 or probabilities.size != self.n_max + 1:
            raise ConfigError(f"Expected {self.n_max + 1} probabilities, got {probabilities.size}")
        if np.any(probabilities < 0) or not validate_finite_array(probabilities):
            raise ConfigError("Probabilities must be finite and non-negative")
        if not validate_finite_number(self.tail_mass) or self.tail_mass < 0:
            raise ConfigError(f"tail_mass must be >= 0, got {self.tail_mass}")
        probabilities.setflags(write=False)
        object.__setattr__(self, 'probabilities', probabilities)
        object.__setattr__(self, 'tail_mass', float(self.tail_mass))

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_max + 1)

    def __repr__(self):
        return (
            f"<PhotonPmf(n_max={self.n_max}, tail_mass={self.tail_mass:.3e}, "
            f"tail_exceeded={self.tail_exceeded})>"
        )
