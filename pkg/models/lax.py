# models/lax.py

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from utils.errors import ConfigError, StencilError
from utils.validators import validate_finite_array, validate_finite_number, validate_positive


@dataclass(frozen=True, eq=False)
class Matrix2c:
    """
    Комплексная матрица 2x2. Элементы могут быть скалярами или массивами
    одинаковой формы (поле матриц на решётке); операции поэлементные по узлам.
    """
    m11: Any
    m12: Any
    m21: Any
    m22: Any

    def __post_init__(self):
        for name in ('m11', 'm12', 'm21', 'm22'):
            value = getattr(self, name)
            if not validate_finite_array(value):
                raise ConfigError(f"Matrix entry {name} is not finite")
            object.__setattr__(self, name, np.asarray(value, dtype=np.complex128)[()])

    def __matmul__(self, other: 'Matrix2c') -> 'Matrix2c':
        return Matrix2c(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __add__(self, other: 'Matrix2c') -> 'Matrix2c':
        return Matrix2c(self.m11 + other.m11, self.m12 + other.m12,
                        self.m21 + other.m21, self.m22 + other.m22)

    def __sub__(self, other: 'Matrix2c') -> 'Matrix2c':
        return Matrix2c(self.m11 - other.m11, self.m12 - other.m12,
                        self.m21 - other.m21, self.m22 - other.m22)

    def __neg__(self) -> 'Matrix2c':
        return Matrix2c(-self.m11, -self.m12, -self.m21, -self.m22)

    def scale(self, factor: complex) -> 'Matrix2c':
        return Matrix2c(factor * self.m11, factor * self.m12, factor * self.m21, factor * self.m22)

    def conj_transpose(self) -> 'Matrix2c':
        return Matrix2c(np.conj(self.m11), np.conj(self.m21), np.conj(self.m12), np.conj(self.m22))

    def trace(self):
        return self.m11 + self.m22

    def max_diag(self) -> float:
        return float(max(np.max(np.abs(self.m11)), np.max(np.abs(self.m22))))

    def max_offdiag(self) -> float:
        return float(max(np.max(np.abs(self.m12)), np.max(np.abs(self.m21))))

    def max_abs(self) -> float:
        return max(self.max_diag(), self.max_offdiag())

    def to_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class LaxSample:
    """
    Значение поля u и его производные в точке (z, t) или на решётке (массивы).
    """
    u: Any
    du_dz: Any
    du_dt: Any
    d2u_dz2: Any

    def __post_init__(self):
        for name in ('u', 'du_dz', 'du_dt', 'd2u_dz2'):
            value = getattr(self, name)
            if not validate_finite_array(value):
                raise ConfigError(f"LaxSample.{name} is not finite")
            object.__setattr__(self, name, np.asarray(value, dtype=np.complex128)[()])


@dataclass(frozen=True)
class SpectralParam:
    """Действительный спектральный параметр zeta."""
    zeta: float

    def __post_init__(self):
        if not validate_finite_number(self.zeta):
            raise ConfigError(f"zeta must be a finite real number, got {self.zeta}")
        object.__setattr__(self, 'zeta', float(self.zeta))


@dataclass(frozen=True, eq=False)
class SpaceTimeLattice:
    """
    Поле u на равномерной решётке (t, z): samples[i, j] = u(z0 + j*dz, t0 + i*dt).
    """
    samples: Any = field(repr=False)
    z0: float
    dz: float
    t0: float
    dt: float

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128)
        if samples.ndim != 2:
            raise StencilError(f"Lattice samples must be 2-D (t, z), got shape {samples.shape}")
        if not validate_finite_array(samples):
            raise StencilError("Lattice samples must be finite")
        if not (validate_positive(self.dz) and validate_positive(self.dt)):
            raise StencilError(f"Lattice spacings must be > 0, got dz={self.dz}, dt={self.dt}")
        if not (validate_finite_number(self.z0) and validate_finite_number(self.t0)):
            raise StencilError("Lattice origin must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, 'samples', samples)
        for name in ('z0', 'dz', 't0', 'dt'):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.samples.shape

    @property
    def z_axis(self) -> np.ndarray:
        return self.z0 + self.dz * np.arange(self.samples.shape[1])

    @property
    def t_axis(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.shape[0])

    def coarsened(self) -> 'SpaceTimeLattice':
        """Подрешётка из каждого второго узла по обеим осям (шаг 2h)."""
        return SpaceTimeLattice(self.samples[::2, ::2], self.z0, 2 * self.dz, self.t0, 2 * self.dt)

    def __repr__(self):
        return (
            f"<SpaceTimeLattice(shape={self.shape}, z0={self.z0:.6g}, dz={self.dz:.3g}, "
            f"t0={self.t0:.6g}, dt={self.dt:.3g})>"
        )


@dataclass(frozen=True, eq=False)
class ResidualField:
    """
    Невязка условия совместности R = HM - MH - dM/dt + dH/dz на решётке.
    """
    matrix: Matrix2c
    z_axis: Any = field(repr=False)
    t_axis: Any = field(repr=False)
    zeta: float = 0.0

    @property
    def max_diag(self) -> float:
        return self.matrix.max_diag()

    @property
    def max_offdiag(self) -> float:
        return self.matrix.max_offdiag()


@dataclass(frozen=True)
class ZetaIndependenceReport:
    """
    Итог проверки независимости недиагональных элементов невязки от zeta.
    """
    zetas: Tuple[float, ...]
    max_pairwise_deviation: float
    max_offdiag_by_zeta: Dict[float, float]
    tolerance: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'zetas': list(self.zetas),
            'max_pairwise_deviation': self.max_pairwise_deviation,
            'max_offdiag_by_zeta': {repr(k): v for k, v in self.max_offdiag_by_zeta.items()},
            'tolerance': self.tolerance,
            'passed': self.passed,
        }
