"""
Tests for the vectorized modular helpers
"""
from fractions import Fraction

import numpy as np

from utils.modular import (
    ceil_frac,
    count_progression,
    count_progression_int,
    floor_frac,
    modinv_array,
    ragged_ranges,
)


def test_rational_rounding():
    assert floor_frac(Fraction(-7, 2)) == -4
    assert ceil_frac(Fraction(-7, 2)) == -3
    assert floor_frac(Fraction(7, 2)) == 3
    assert ceil_frac(Fraction(6, 2)) == 3


def test_modinv_array():
    inverse, gcd = modinv_array(np.array([3, 4, 0, 6, 10]), np.array([7, 8, 5, 9, 7]))
    assert list(gcd) == [1, 4, 5, 3, 1]
    assert inverse[0] == 5
    assert (10 * inverse[4]) % 7 == 1


def test_modinv_array_matches_pow():
    moduli = np.arange(2, 60, dtype=np.int64)
    values = (moduli * 7 + 3) % 97
    inverse, gcd = modinv_array(values, moduli)
    for v, m, inv, g in zip(values, moduli, inverse, gcd):
        if g == 1:
            assert inv == pow(int(v), -1, int(m))


def test_count_progression():
    assert count_progression_int(0, 10, 1, 3) == 4
    assert count_progression_int(5, 4, 0, 1) == 0
    assert count_progression_int(-5, 5, 0, 5) == 3
    counts = count_progression(np.array([0, 5, -5]), np.array([10, 4, 5]), np.array([1, 0, 0]), np.array([3, 1, 5]))
    assert list(counts) == [4, 0, 3]


def test_ragged_ranges():
    owner, values = ragged_ranges(np.array([10, 0, 4]), np.array([3, 2, -1]))
    assert list(owner) == [0, 0, 0, 1, 1]
    assert list(values) == [10, 11, 12, 0, 1]
