"""
Tests for exact quadratic-irrational arithmetic
"""
import math
from fractions import Fraction

import pytest

from core.errors import DiscriminantNotPositive, DiscriminantSquare, NonUnimodular, ZeroLeadingCoefficient
from core.qi_core import (
    B_REDUCED,
    E_REDUCED,
    RCF_REDUCED,
    ExactOrdering,
    QuadraticNumber,
    classify,
    qi_apply_mobius,
    qi_compare_rational,
    qi_conjugate,
    qi_discriminant,
    qi_floor,
    qi_from_poly,
    qi_gt,
    qi_linear,
    qi_log,
    qi_lt,
    qi_negate,
    qi_to_float,
)
from models.matrix import Mat2Z


def test_golden_ratio_construction(golden):
    assert (golden.a_coef, golden.b_coef, golden.c_coef, golden.root_sign) == (1, -1, -1, 1)
    assert qi_to_float(golden) == pytest.approx((1 + math.sqrt(5)) / 2)
    assert golden.spec() == "1,-1,-1,+"


def test_normalization_is_canonical():
    assert qi_from_poly(-2, 2, 2, -1) == qi_from_poly(1, -1, -1, 1)
    assert qi_from_poly(3, -3, -3, 1) == qi_from_poly(1, -1, -1, 1)


def test_construction_errors():
    with pytest.raises(DiscriminantNotPositive):
        qi_from_poly(1, 0, 4, 1)
    with pytest.raises(DiscriminantSquare):
        qi_from_poly(1, -3, 2, 1)
    with pytest.raises(ZeroLeadingCoefficient):
        qi_from_poly(0, 1, 1, 1)


def test_conjugate_and_discriminant(golden, two_plus_sqrt3, three_plus_sqrt7_half):
    assert qi_to_float(qi_conjugate(golden)) == pytest.approx((1 - math.sqrt(5)) / 2)
    assert qi_conjugate(qi_conjugate(golden)) == golden
    assert qi_to_float(qi_conjugate(two_plus_sqrt3)) == pytest.approx(2 - math.sqrt(3))
    assert qi_to_float(qi_conjugate(three_plus_sqrt7_half)) == pytest.approx((3 - math.sqrt(7)) / 2)
    assert qi_discriminant(golden) == 5
    assert qi_discriminant(two_plus_sqrt3) == 12


def test_floor(golden, two_plus_sqrt3, three_plus_sqrt7_half):
    assert qi_floor(golden) == 1
    assert qi_floor(two_plus_sqrt3) == 3
    assert qi_floor(three_plus_sqrt7_half) == 2
    assert qi_floor(qi_conjugate(golden)) == -1


def test_compare_rational(golden, two_plus_sqrt3):
    assert qi_compare_rational(golden, 1) is ExactOrdering.GREATER
    assert qi_compare_rational(golden, Fraction(13, 8)) is ExactOrdering.LESS
    assert qi_compare_rational(qi_conjugate(two_plus_sqrt3), Fraction(1, 3)) is ExactOrdering.LESS
    assert qi_gt(golden, Fraction(8, 5))
    assert qi_lt(qi_negate(golden), -1)


def test_mobius_preserves_discriminant(golden):
    image = qi_apply_mobius(Mat2Z(2, 1, 1, 1), golden)
    assert image.discriminant == 5
    assert qi_to_float(image) == pytest.approx((2 * float(golden) + 1) / (float(golden) + 1))
    assert qi_apply_mobius(Mat2Z(1, 0, 0, 1), golden) == golden


def test_mobius_rejects_non_unimodular(golden):
    with pytest.raises(NonUnimodular):
        qi_apply_mobius(Mat2Z(2, 0, 0, 1), golden)


def test_linear_image(golden):
    assert qi_linear(golden, 2, 1) == qi_from_poly(1, -4, -1, 1)


def test_classify(golden, two_plus_sqrt3, sqrt2):
    assert classify(golden) == frozenset({E_REDUCED, RCF_REDUCED})
    assert classify(two_plus_sqrt3) == frozenset({E_REDUCED, B_REDUCED})
    assert classify(sqrt2) == frozenset()
    assert classify(qi_conjugate(golden)) == frozenset()


def test_log_of_large_value():
    omega = qi_from_poly(1, -(10 ** 40), -1, 1)
    assert qi_log(omega) == pytest.approx(40 * math.log(10))


def test_quadratic_number_field_operations(golden):
    x = QuadraticNumber.from_qi(golden)
    assert x * x == x + 1
    assert x.norm() == -1
    assert x.trace() == 1
    assert x * x.inverse() == 1
    assert (x ** 3).to_qi() == qi_from_poly(1, -4, -1, 1)
    assert (x - 2).sign() == -1


def test_quadratic_number_same_field_representations():
    # sqrt(20) = 2 sqrt(5) and sqrt(320) = 8 sqrt(5)
    a = QuadraticNumber(Fraction(0), Fraction(1), 20)
    b = QuadraticNumber(Fraction(0), Fraction(1, 4), 320)
    assert a == b
    assert hash(a) == hash(b)
    assert a * QuadraticNumber(Fraction(0), Fraction(1), 5) == 10
    assert (a - b).is_rational()


def test_quadratic_number_rejects_other_fields():
    a = QuadraticNumber(Fraction(0), Fraction(1), 2)
    b = QuadraticNumber(Fraction(0), Fraction(1), 3)
    assert a != b
    with pytest.raises(ValueError):
        a * b
