# models/stepper.py

import enum
from dataclasses import dataclass, field
from typing import Any, Tuple

import numpy as np

from models.grid import ComplexField
from utils.errors import ConfigError, GridError
from utils.validators import validate_non_negative, validate_positive


class SchemeEnum(enum.Enum):
    """
    Enum для схемы расщепления по времени.
    """
    STRANG = 'strang'


@dataclass(frozen=True)
class StepperConfig:
    """
    Параметры интегрирования по времени.

    Число шагов steps = round(t_end/dt); фактический шаг effective_dt = t_end/steps,
    так что steps*effective_dt == t_end точно. Для t_end, кратного dt,
    effective_dt совпадает с dt до округления.
    """
    dt: float
    t_end: float
    snapshot_stride: int = 1
    scheme: SchemeEnum = SchemeEnum.STRANG

    def __post_init__(self):
        if not validate_positive(self.dt):
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if not validate_non_negative(self.t_end):
            raise ConfigError(f"t_end must be >= 0, got {self.t_end}")
        if isinstance(self.snapshot_stride, bool) or not isinstance(self.snapshot_stride, (int, np.integer)) \
                or self.snapshot_stride < 1:
            raise ConfigError(f"snapshot_stride must be a positive integer, got {self.snapshot_stride}")
        if not isinstance(self.scheme, SchemeEnum):
            try:
                object.__setattr__(self, 'scheme', SchemeEnum(self.scheme))
            except ValueError:
                raise ConfigError(f"Unknown scheme '{self.scheme}'") from None
        object.__setattr__(self, 'dt', float(self.dt))
        object.__setattr__(self, 't_end', float(self.t_end))
        object.__setattr__(self, 'snapshot_stride', int(self.snapshot_stride))

    @property
    def steps(self) -> int:
        if self.t_end == 0.0:
            return 0
        return max(1, int(round(self.t_end / self.dt)))

    @property
    def effective_dt(self) -> float:
        steps = self.steps
        return self.dt if steps == 0 else self.t_end / steps


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Результат эволюции: моменты времени, снимки поля и для каждого снимка
    кортеж сохраняющихся величин (N, P, E).
    """
    times: Any
    snapshots: Tuple[ComplexField, ...]
    invariants: Tuple[Tuple[float, float, float], ...] = field(default=())

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        times.setflags(write=False)
        snapshots = tuple(self.snapshots)
        if times.ndim != 1 or times.size != len(snapshots) or times.size == 0:
            raise GridError("Trajectory needs one time per snapshot and at least one snapshot")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise GridError("Trajectory times must be strictly increasing")
        grid = snapshots[0].grid
        if any(s.grid != grid for s in snapshots):
            raise GridError("All trajectory snapshots must share one grid")
        if self.invariants and len(self.invariants) != len(snapshots):
            raise GridError("Invariants record must have one entry per snapshot")
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'snapshots', snapshots)
        object.__setattr__(self, 'invariants', tuple(tuple(map(float, q)) for q in self.invariants))

    @property
    def grid(self):
        return self.snapshots[0].grid

    @property
    def final(self) -> ComplexField:
        return self.snapshots[-1]

    def __repr__(self):
        return (
            f"<Trajectory(snapshots={len(self.snapshots)}, "
            f"t=[{self.times[0]:.6g}, {self.times[-1]:.6g}])>"
        )
