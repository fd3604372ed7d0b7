# models/run_config.py

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

from models.grid import Grid
from models.soliton import SolitonParams, ZSParams
from models.stepper import StepperConfig
from models.waveguide import WaveguideParams
from utils.errors import ConfigError
from utils.validators import validate_positive, validate_zeta_list


class InitialConditionTypeEnum(enum.Enum):
    """
    Enum для типа начального условия в конфигурации запуска.
    """
    SOLITON = 'soliton'
    ZS_SOLITON = 'zs_soliton'
    PHOTON_NUMBER = 'photon_number'


DEFAULT_ZETAS: Tuple[float, ...] = (-1.0, 0.0, 0.7, 2.0)


@dataclass(frozen=True)
class LaxCheckSpec:
    """
    Параметры проверки пары Лакса: список zeta, шаг решётки, окно решётки
    и сторона прямоугольника для параллельного переноса.
    """
    zetas: Tuple[float, ...] = DEFAULT_ZETAS
    spacing: float = 0.02
    half_width: float = 2.0
    duration: float = 0.2
    rectangle_side: float = 0.1

    def __post_init__(self):
        zetas = tuple(float(z) for z in self.zetas)
        if not validate_zeta_list(list(zetas)):
            raise ConfigError(f"lax.zetas needs at least two distinct finite values, got {list(self.zetas)}")
        object.__setattr__(self, 'zetas', zetas)
        for name in ('spacing', 'half_width', 'duration', 'rectangle_side'):
            if not validate_positive(getattr(self, name)):
                raise ConfigError(f"lax.{name} must be > 0, got {getattr(self, name)}")
            object.__setattr__(self, name, float(getattr(self, name)))


@dataclass(frozen=True)
class RunConfig:
    """
    Полная конфигурация одного запуска. Ровно одно из полей soliton,
    zs_soliton, photon_number задаёт начальное условие.
    """
    waveguide: WaveguideParams
    grid: Grid
    stepper: StepperConfig
    soliton: Optional[SolitonParams] = None
    zs_soliton: Optional[ZSParams] = None
    photon_number: Optional[float] = None
    photons_n_max: Optional[int] = None
    lax: LaxCheckSpec = field(default_factory=LaxCheckSpec)
    out_dir: Optional[str] = None

    def __post_init__(self):
        present = [spec is not None for spec in (self.soliton, self.zs_soliton, self.photon_number)]
        if sum(present) != 1:
            raise ConfigError(
                "Exactly one initial condition (soliton, zs_soliton, photon_number) must be given, "
                f"got {sum(present)}"
            )
        if self.photon_number is not None:
            if not validate_positive(self.photon_number):
                raise ConfigError(f"photon_number must be > 0, got {self.photon_number}")
            object.__setattr__(self, 'photon_number', float(self.photon_number))
        if self.photons_n_max is not None:
            if isinstance(self.photons_n_max, bool) or not isinstance(self.photons_n_max, int) \
                    or self.photons_n_max < 0:
                raise ConfigError(f"photons.n_max must be a non-negative integer, got {self.photons_n_max}")

    @property
    def initial_type(self) -> InitialConditionTypeEnum:
        if self.soliton is not None:
            return InitialConditionTypeEnum.SOLITON
        if self.zs_soliton is not None:
            return InitialConditionTypeEnum.ZS_SOLITON
        return InitialConditionTypeEnum.PHOTON_NUMBER
