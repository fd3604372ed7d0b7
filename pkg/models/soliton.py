# models/soliton.py

from dataclasses import dataclass

from utils.errors import ConfigError
from utils.validators import validate_finite_number, validate_non_negative, validate_positive


@dataclass(frozen=True)
class SolitonParams:
    """
    Параметры односолитонного решения A*exp(i K A^2 t / 2)*sech(z/xi).

    amplitude_A - амплитуда (корень из числа фотонов на единицу длины),
    width_xi - ширина импульса. Условие KA^2 = C/xi^2 проверяется отдельно,
    когда параметры связываются с волноводом (см. services.analytic_soliton).
    """
    amplitude_A: float
    width_xi: float

    def __post_init__(self):
        # A = 0 допускается: это вакуум, число фотонов 0
        if not validate_non_negative(self.amplitude_A):
            raise ConfigError(f"amplitude_A must be >= 0, got {self.amplitude_A}")
        if not validate_positive(self.width_xi):
            raise ConfigError(f"width_xi must be > 0, got {self.width_xi}")
        object.__setattr__(self, 'amplitude_A', float(self.amplitude_A))
        object.__setattr__(self, 'width_xi', float(self.width_xi))


@dataclass(frozen=True)
class ZSParams:
    """
    Четыре константы солитона в форме Захарова-Шабата: eta, xi_zs, x0, phi,
    плюс нормировочная амплитуда A0 (в исходной записи не фиксирована).
    """
    eta: float
    xi_zs: float = 0.0
    x0: float = 0.0
    phi: float = 0.0
    A0: float = 1.0

    def __post_init__(self):
        if not validate_positive(self.eta):
            raise ConfigError(f"eta must be > 0, got {self.eta}")
        for name in ('xi_zs', 'x0', 'phi', 'A0'):
            if not validate_finite_number(getattr(self, name)):
                raise ConfigError(f"{name} must be a finite number, got {getattr(self, name)}")
        for name in ('eta', 'xi_zs', 'x0', 'phi', 'A0'):
            object.__setattr__(self, name, float(getattr(self, name)))
