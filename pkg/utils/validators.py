#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Модуль с функциями валидации для численной лаборатории.
Содержит функции для проверки чисел, массивов и списков параметров,
используемых моделями и сервисами. Все функции возвращают bool и не бросают
исключений: решение о том, какую ошибку поднять, принимает вызывающий код.
"""

import math
from typing import Any, Sequence

import numpy as np

# Минимальное число точек сетки
MIN_GRID_POINTS = 8


def validate_power_of_two(n: Any) -> bool:
    """
    Проверяет, что n - целое число, степень двойки, не меньше MIN_GRID_POINTS.

    Args:
        n: Проверяемое значение.

    Returns:
        bool: True, если n подходит как размер сетки, иначе False.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        return False
    n = int(n)
    if n < MIN_GRID_POINTS:
        return False
    return (n & (n - 1)) == 0


def validate_finite_number(value: Any) -> bool:
    """
    Проверяет, что значение - конечное действительное число (не bool, не NaN/Inf).
    """
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        return False
    return math.isfinite(float(value))


def validate_positive(value: Any) -> bool:
    """
    Проверяет, что значение - конечное число строго больше нуля.
    """
    return validate_finite_number(value) and float(value) > 0.0


def validate_non_negative(value: Any) -> bool:
    """
    Проверяет, что значение - конечное число не меньше нуля.
    """
    return validate_finite_number(value) and float(value) >= 0.0


def validate_finite_array(values: Any) -> bool:
    """
    Проверяет, что массив (или скаляр) не содержит NaN/Inf.

    Args:
        values: Массив numpy, последовательность или скаляр (в т.ч. комплексный).

    Returns:
        bool: True, если все элементы конечны.
    """
    try:
        arr = np.asarray(values)
    except (TypeError, ValueError):
        return False
    if arr.dtype == object:
        return False
    return bool(np.all(np.isfinite(arr)))


def validate_zeta_list(zetas: Sequence[Any]) -> bool:
    """
    Проверяет список значений спектрального параметра zeta:
    не менее двух различных конечных действительных чисел.
    """
    if not isinstance(zetas, (list, tuple)):
        return False
    if not all(validate_finite_number(z) for z in zetas):
        return False
    return len({float(z) for z in zetas}) >= 2


if __name__ == '__main__':
    # Пример использования функций валидации
    print("--- Проверка validate_power_of_two ---")
    print(f"1024: {validate_power_of_two(1024)}")
    print(f"4 (слишком мало): {validate_power_of_two(4)}")
    print(f"1000 (не степень двойки): {validate_power_of_two(1000)}")

    print("\n--- Проверка validate_zeta_list ---")
    print(f"[-1, 0, 0.7, 2]: {validate_zeta_list([-1, 0, 0.7, 2])}")
    print(f"[1.0] (один элемент): {validate_zeta_list([1.0])}")
    print(f"[1, 1] (одинаковые): {validate_zeta_list([1, 1])}")
