# models/grid.py

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from utils.errors import GridError
from utils.validators import validate_finite_array, validate_finite_number, validate_power_of_two


@dataclass(frozen=True)
class Grid:
    """
    Равномерная периодическая сетка по z.

    Точка j находится в z_min + j*dz, j = 0..n_points-1; z_max в сетку не входит
    (отождествляется с z_min).
    """
    z_min: float
    z_max: float
    n_points: int

    def __post_init__(self):
        if not (validate_finite_number(self.z_min) and validate_finite_number(self.z_max)):
            raise GridError(f"Grid bounds must be finite numbers, got ({self.z_min}, {self.z_max})")
        if not self.z_max > self.z_min:
            raise GridError(f"Grid requires z_max > z_min, got ({self.z_min}, {self.z_max})")
        if not validate_power_of_two(self.n_points):
            raise GridError(f"n_points must be a power of two >= 8, got {self.n_points}")
        object.__setattr__(self, 'z_min', float(self.z_min))
        object.__setattr__(self, 'z_max', float(self.z_max))
        object.__setattr__(self, 'n_points', int(self.n_points))

    @property
    def length(self) -> float:
        """Длина периода L = z_max - z_min."""
        return self.z_max - self.z_min

    @property
    def dz(self) -> float:
        return self.length / self.n_points

    @property
    def z(self) -> np.ndarray:
        """Координаты узлов сетки."""
        return self.z_min + self.dz * np.arange(self.n_points)


@dataclass(frozen=True, eq=False)
class ComplexField:
    """
    Комплексная огибающая a(z) на сетке в один момент времени.
    Массив samples копируется и помечается как только для чтения.
    """
    grid: Grid
    samples: Any = field(repr=False)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.shape[0] != self.grid.n_points:
            raise GridError(
                f"Field has {samples.size} samples, grid expects {self.grid.n_points}"
            )
        if not validate_finite_array(samples):
            raise GridError("Field samples must be finite (no NaN/Inf)")
        samples.setflags(write=False)
        object.__setattr__(self, 'samples', samples)

    @property
    def z(self) -> np.ndarray:
        return self.grid.z

    def __repr__(self):
        peak = float(np.max(np.abs(self.samples)))
        return f"<ComplexField(grid={self.grid}, max|a|={peak:.6g})>"
