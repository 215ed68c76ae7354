"""
Modular Arithmetic Utilities for ECFCensus
Vectorized modular inverses, arithmetic-progression counting and exact
rational rounding helpers shared by the counting engines
"""
from fractions import Fraction
from typing import Tuple

import numpy as np


def floor_frac(x: Fraction) -> int:
    x = Fraction(x)
    return x.numerator // x.denominator


def ceil_frac(x: Fraction) -> int:
    x = Fraction(x)
    return -((-x.numerator) // x.denominator)


def modinv_array(values: np.ndarray, moduli: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Extended Euclid on int64 arrays

    Args:
        values: Array of integers a
        moduli: Array of moduli m > 0, same shape

    Returns:
        (inverse, gcd) arrays; inverse[i] * values[i] = gcd[i] mod moduli[i]
        and inverse[i] is the modular inverse wherever gcd[i] == 1
    """
    moduli = np.asarray(moduli, dtype=np.int64)
    r0 = moduli.copy()
    r1 = np.mod(np.asarray(values, dtype=np.int64), moduli)
    s0 = np.zeros_like(r0)
    s1 = np.ones_like(r0)

    active = np.nonzero(r1)[0]
    while active.size:
        quotient = r0[active] // r1[active]
        r0[active], r1[active] = r1[active], r0[active] - quotient * r1[active]
        s0[active], s1[active] = s1[active], s0[active] - quotient * s1[active]
        active = active[r1[active] != 0]

    # a = 0 mod m leaves r0 = m, which is the gcd as well
    return np.mod(s0, moduli), r0


def count_progression(lo: np.ndarray, hi: np.ndarray, residue: np.ndarray, modulus: np.ndarray) -> np.ndarray:
    """Number of integers u in [lo, hi] with u = residue mod modulus (zero for empty ranges)"""
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    residue = np.asarray(residue, dtype=np.int64)
    modulus = np.asarray(modulus, dtype=np.int64)
    counts = np.floor_divide(hi - residue, modulus) - np.floor_divide(lo - 1 - residue, modulus)
    return np.where(hi >= lo, counts, 0)


def count_progression_int(lo: int, hi: int, residue: int, modulus: int) -> int:
    """Scalar count of u in [lo, hi] with u = residue mod modulus"""
    if hi < lo:
        return 0
    return (hi - residue) // modulus - (lo - 1 - residue) // modulus


def ragged_ranges(starts: np.ndarray, lengths: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Flatten the ranges [starts[i], starts[i] + lengths[i]) into one array

    Returns:
        (owner, values) where owner[j] is the index i that produced values[j]
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    lengths = np.where(lengths > 0, lengths, 0)
    total = int(lengths.sum())
    owner = np.repeat(np.arange(lengths.size, dtype=np.int64), lengths)
    offsets = np.cumsum(lengths) - lengths
    values = np.arange(total, dtype=np.int64) - np.repeat(offsets, lengths) + np.repeat(
        np.asarray(starts, dtype=np.int64), lengths
    )
    return owner, values
