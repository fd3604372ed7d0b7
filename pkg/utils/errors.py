# utils/errors.py

"""
Иерархия исключений лаборатории.

ConfigError и его потомки означают некорректные входные данные (код выхода 2),
NumericalError и его потомки - сбой численного расчёта (код выхода 3).
"""

from typing import Optional


class SolitonLabError(Exception):
    """Базовое исключение для всех ошибок лаборатории."""


class ConfigError(SolitonLabError, ValueError):
    """Некорректная конфигурация или нарушенное предусловие операции."""


class GridError(ConfigError):
    """Некорректная сетка или несовпадение сеток/длин массивов."""


class ConstraintError(ConfigError):
    """Параметры солитона не удовлетворяют условию KA^2 = C/xi^2."""


class NoSolitonRegimeError(ConfigError):
    """C*K <= 0: режим светлого солитона отсутствует."""


class StencilError(ConfigError):
    """Решётка (z, t) слишком мала или шаг задан некорректно."""


class NumericalError(SolitonLabError, RuntimeError):
    """Сбой численного интегрирования."""


class BlowUpError(NumericalError):
    """В поле появились NaN/Inf во время эволюции."""

    def __init__(self, step_index: int, time: Optional[float] = None):
        self.step_index = step_index
        self.time = time
        message = f"Non-finite samples detected at step {step_index}"
        if time is not None:
            message += f" (t={time:.6g})"
        super().__init__(message)


class TransportStepError(NumericalError):
    """Оценка локальной ошибки шага переноса превысила допустимую границу."""

    def __init__(self, segment_index: int, error_estimate: float, bound: float):
        self.segment_index = segment_index
        self.error_estimate = error_estimate
        self.bound = bound
        super().__init__(
            f"Transport step on segment {segment_index} has local error estimate "
            f"{error_estimate:.3e} above bound {bound:.3e}; reduce max_step"
        )
