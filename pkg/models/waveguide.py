# models/waveguide.py

from dataclasses import dataclass

from utils.errors import ConfigError
from utils.validators import validate_finite_number, validate_positive


@dataclass(frozen=True)
class WaveguideParams:
    """
    Параметры волновода в нормированных единицах.

    omega0 - несущая частота, k0 - несущее волновое число, vg - групповая
    скорость, gvd_C - дисперсия групповой скорости C = d^2(omega)/dk^2 в k0,
    kerr_K - константа Керра.
    """
    omega0: float
    k0: float
    vg: float
    gvd_C: float
    kerr_K: float

    def __post_init__(self):
        if not validate_positive(self.omega0):
            raise ConfigError(f"omega0 must be > 0, got {self.omega0}")
        if not validate_positive(self.vg):
            raise ConfigError(f"vg must be > 0, got {self.vg}")
        for name in ('k0', 'gvd_C', 'kerr_K'):
            if not validate_finite_number(getattr(self, name)):
                raise ConfigError(f"{name} must be a finite number, got {getattr(self, name)}")
        for name in ('omega0', 'k0', 'vg', 'gvd_C', 'kerr_K'):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def supports_bright_soliton(self) -> bool:
        """C*K > 0 - иначе амплитуда A в KA^2 = C/xi^2 не действительна."""
        return self.gvd_C * self.kerr_K > 0.0
