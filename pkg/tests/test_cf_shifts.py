"""
Tests for Gauss shifts, expansions, convergents and period lengths
"""
import math
import random

import pytest

from core.cf_shifts import (
    bcf_step,
    convergent_sign_holds,
    convergents,
    digit_of,
    ecf_pair_as_rcf,
    ecf_step,
    expand,
    galois_dual,
    galois_dual_holds,
    natural_extension_step,
    omega_tilde,
    periodic_orbit,
    periodic_value,
    reduced_period,
    rho_length,
    shift,
    shift_product_holds,
    spectral_radius,
    unit_interval_map,
    word_family,
)
from core.errors import DegenerateWord, NonHyperbolic, NotReduced, OutOfDomain
from core.qi_core import qi_conjugate, qi_from_poly, qi_negate, qi_to_float
from models.matrix import Mat2Z
from models.words import BCF, ECF, RCF, CfWord, ConvergentPair, EcfDigit


def test_golden_ecf_period(golden):
    expansion = expand(golden, ECF)
    assert expansion.is_purely_periodic
    assert expansion.period.raw() == [(2, -1), (2, 1)]


def test_sqrt2_has_ecf_preperiod(sqrt2):
    expansion = expand(sqrt2, ECF)
    assert expansion.preperiod.raw() == [(2, -1)]
    assert expansion.period.raw() == [(2, -1), (4, -1)]


def test_bcf_periods(three_plus_sqrt7_half):
    assert expand(three_plus_sqrt7_half, BCF).period.raw() == [3, 6]
    assert expand(qi_from_poly(1, -3, 1, 1), BCF).period.raw() == [3]


def test_ecf_step_values(golden, two_plus_sqrt3):
    assert digit_of(golden, ECF) == EcfDigit(2, -1)
    assert ecf_step(golden) == qi_from_poly(1, -3, 1, 1)
    assert ecf_step(two_plus_sqrt3) == two_plus_sqrt3


def test_bcf_step_cycle(three_plus_sqrt7_half):
    image = bcf_step(three_plus_sqrt7_half)
    assert qi_to_float(image) == pytest.approx(3 + math.sqrt(7))
    assert bcf_step(image) == three_plus_sqrt7_half


def test_shift_requires_value_above_one(golden):
    with pytest.raises(OutOfDomain):
        shift(qi_conjugate(golden), ECF)
    with pytest.raises(OutOfDomain):
        expand(golden, "XCF")


def test_periodic_orbit_of_sqrt2(sqrt2):
    orbit = periodic_orbit(sqrt2, ECF)
    assert len(orbit) == 2
    assert qi_from_poly(1, -4, 2, 1) in orbit


def test_convergents(golden_period):
    pairs = convergents(golden_period)
    assert pairs == [ConvergentPair(1, 0), ConvergentPair(2, 1), ConvergentPair(3, 2)]
    with pytest.raises(DegenerateWord):
        convergents(CfWord(ECF, ()))


def test_period_matrices(golden_period):
    assert golden_period.matrix() == Mat2Z(3, 2, 2, 1)
    assert omega_tilde(golden_period) == Mat2Z(13, 8, 8, 5)
    assert spectral_radius(Mat2Z(13, 8, 8, 5)) == qi_from_poly(1, -18, 1, 1)


def test_spectral_radius_rejects_parabolic():
    with pytest.raises(NonHyperbolic):
        spectral_radius(Mat2Z(1, 1, 0, 1))


def test_periodic_value(golden, golden_period):
    assert periodic_value(golden_period) == golden
    with pytest.raises(DegenerateWord):
        periodic_value(CfWord.of(ECF, [(2, -1)]))


def test_rho_lengths(golden, three_plus_sqrt7_half):
    ecf = rho_length(golden, ECF)
    assert ecf.rho == pytest.approx(4 * math.log(2 + math.sqrt(5)))
    assert ecf.rho_squared == pytest.approx(4 * math.log(2 + math.sqrt(5)))
    bcf = rho_length(three_plus_sqrt7_half, BCF)
    assert bcf.rho == pytest.approx(2 * math.log(8 + 3 * math.sqrt(7)))
    assert bcf.rho == pytest.approx(5.53732, abs=1e-5)


def test_single_digit_family_uses_squared_convention(two_plus_sqrt3):
    length = rho_length(two_plus_sqrt3, ECF)
    assert length.rho == pytest.approx(2 * math.log(2 + math.sqrt(3)))
    assert length.rho_squared == pytest.approx(4 * math.log(2 + math.sqrt(3)))


def test_rho_requires_reduced(sqrt2):
    with pytest.raises(NotReduced):
        reduced_period(sqrt2, ECF)


def test_galois_dual(golden_period, golden):
    assert galois_dual(golden_period) == qi_negate(qi_conjugate(golden))
    assert galois_dual_holds(CfWord.of(ECF, [(4, 1), (2, -1), (6, 1)]))


def test_shift_product_and_sign_rules(golden, sqrt2, three_plus_sqrt7_half):
    for u in (golden, sqrt2, three_plus_sqrt7_half):
        for k in (1, 3, 6):
            assert shift_product_holds(u, k, ECF)
            assert shift_product_holds(u, k, BCF)
            assert convergent_sign_holds(u, k)


def test_shift_drops_first_digit_on_random_values():
    rng = random.Random(11)
    checked = 0
    while checked < 20:
        A, B, C = rng.randint(1, 6), rng.randint(-20, 20), rng.randint(-20, 20)
        disc = B * B - 4 * A * C
        if disc <= 0 or math.isqrt(disc) ** 2 == disc:
            continue
        u = qi_from_poly(A, B, C, 1)
        if qi_to_float(u) <= 1:
            continue
        checked += 1
        for kind in (ECF, BCF):
            full = expand(u, kind)
            tail = expand(shift(u, kind), kind)
            digits = list(full.preperiod) + list(full.period) * 3
            tail_digits = list(tail.preperiod) + list(tail.period) * 3
            n = min(len(digits) - 1, len(tail_digits), 8)
            assert digits[1:n + 1] == tail_digits[:n]


def test_word_families_match_minimal_polynomials():
    for family in ("single", "plus_minus", "minus_plus", "minus_minus"):
        for k1, k2 in ((1, 1), (2, 1), (2, 3)):
            if family == "single" and k1 == 1:
                continue
            word, (A, B, C) = word_family(family, k1, k2)
            if word.is_degenerate():
                continue
            assert periodic_value(word) == qi_from_poly(A, B, C, 1)


def test_plus_minus_family_discriminant():
    word, (A, B, C) = word_family("plus_minus", 1, 1)
    assert B * B - 4 * A * C == 5


def test_bcf_tail_family_is_not_reduced():
    word, (A, B, C) = word_family("bcf_tail", 3, 5)
    omega = qi_from_poly(A, B, C, 1)
    expansion = expand(omega, BCF)
    assert expansion.preperiod.raw() == [3]
    assert expansion.period.raw() == [5]


def test_ecf_pair_as_rcf():
    word = CfWord.of(ECF, [(4, -1), (6, 1)])
    assert ecf_pair_as_rcf(word).matrix() == word.matrix()
    assert ecf_pair_as_rcf(word).raw() == [3, 1, 5]


def test_unit_interval_maps():
    assert unit_interval_map(0.618034, ECF) == pytest.approx(0.381966, abs=1e-5)
    assert unit_interval_map(0.381966, ECF) == pytest.approx(0.618034, abs=1e-5)
    assert unit_interval_map(0.5, BCF) == pytest.approx(0.0)
    assert unit_interval_map(0.4, RCF) == pytest.approx(0.5)
    with pytest.raises(OutOfDomain):
        unit_interval_map(1.5, ECF)


def test_natural_extension_step():
    u, v = natural_extension_step((1.618034, 0.0), ECF)
    assert u == pytest.approx(2.618034, abs=1e-5)
    assert v == pytest.approx(-0.5)
    u, v = natural_extension_step((2.5, 0.5), BCF)
    assert u == pytest.approx(2.0)
    assert v == pytest.approx(1 / 2.5)
