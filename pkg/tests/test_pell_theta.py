"""
Tests for stabilizers, eigenvalues and Pell-equation units
"""
import pytest

from core.cf_shifts import reduced_period
from core.errors import (
    BadDiscriminant,
    NotEReduced,
    NotStabilizer,
    UnitNotApplicable,
    WrongDiscriminantClass,
)
from core.pell_theta import (
    PellUnit,
    fundamental_eps,
    lambda_eval,
    pell_oracle,
    power_decompose,
    stabilizer_from_unit,
)
from core.qi_core import QuadraticNumber, qi_from_poly
from models.matrix import Mat2Z
from models.words import ECF


def test_fundamental_eps(golden, two_plus_sqrt3):
    assert fundamental_eps(golden) == PellUnit(2, 1, 5, -1)
    assert fundamental_eps(two_plus_sqrt3) == PellUnit(2, 1, 3, 1)


def test_fundamental_eps_needs_e_reduced(sqrt2):
    with pytest.raises(NotEReduced):
        fundamental_eps(sqrt2)


def test_pell_oracle_small_discriminants():
    five = pell_oracle(5)
    assert (five.fundamental.t, five.fundamental.u, five.fundamental.norm) == (2, 1, -1)
    assert (five.fundamental_plus.t, five.fundamental_plus.u) == (9, 4)
    assert five.method == "bruteforce"
    assert (pell_oracle(3).fundamental.t, pell_oracle(3).fundamental.u) == (2, 1)
    assert (pell_oracle(8).fundamental.t, pell_oracle(8).fundamental.u) == (3, 1)


def test_pell_oracle_falls_back_to_rcf():
    result = pell_oracle(61, limit=10)
    assert result.method == "rcf"
    assert result.fundamental == PellUnit(29718, 3805, 61, -1)
    assert (result.fundamental_plus.t, result.fundamental_plus.u) == (1766319049, 226153980)


def test_pell_oracle_rejects_squares():
    for disc in (0, 4, 9, -5):
        with pytest.raises(BadDiscriminant):
            pell_oracle(disc)


def test_pell_unit_arithmetic():
    unit = PellUnit(2, 1, 5, -1)
    assert unit.power(2) == PellUnit(9, 4, 5, 1)
    assert PellUnit.of(9, 4, 5).norm == 1
    assert unit.as_qi() == qi_from_poly(1, -4, -1, 1)
    with pytest.raises(UnitNotApplicable):
        PellUnit(2, 1, 5, 1)
    with pytest.raises(WrongDiscriminantClass):
        unit * PellUnit(2, 1, 3, 1)


def test_stabilizer_from_unit(golden, two_plus_sqrt3):
    sigma = stabilizer_from_unit(golden, PellUnit(2, 1, 5, -1))
    assert sigma == Mat2Z(3, 2, 2, 1)
    assert sigma.is_identity_mod2()
    swap = stabilizer_from_unit(two_plus_sqrt3, PellUnit(2, 1, 3, 1))
    assert swap == Mat2Z(4, -1, 1, 0)
    assert swap.is_swap_mod2()


def test_stabilizer_rejects_foreign_unit(golden):
    with pytest.raises(WrongDiscriminantClass):
        stabilizer_from_unit(golden, PellUnit(2, 1, 3, 1))


def test_lambda_eval(golden):
    assert lambda_eval(Mat2Z(3, 2, 2, 1), golden) == qi_from_poly(1, -4, -1, 1)
    assert lambda_eval(Mat2Z(1, 0, 0, 1), golden) == 1
    with pytest.raises(NotStabilizer):
        lambda_eval(Mat2Z(1, 1, 0, 1), golden)


def test_lambda_eval_is_multiplicative_on_period_powers():
    omega = qi_from_poly(1, -3, 1, 1)
    base = reduced_period(omega, ECF).matrix()
    single = QuadraticNumber.from_qi(lambda_eval(base, omega))
    squared = QuadraticNumber.from_qi(lambda_eval(base.power(2), omega))
    cubed = QuadraticNumber.from_qi(lambda_eval(base.power(3), omega))
    assert squared == single * single
    assert cubed == squared * single
    assert single != 1


def test_power_decompose(golden, two_plus_sqrt3):
    assert power_decompose(Mat2Z(13, 8, 8, 5), golden) == (Mat2Z(3, 2, 2, 1), 2)
    assert power_decompose(Mat2Z(56, -15, 15, -4), two_plus_sqrt3) == (Mat2Z(4, -1, 1, 0), 3)


def test_power_decompose_rejects_non_stabilizers(golden):
    with pytest.raises(NotStabilizer):
        power_decompose(Mat2Z(2, 1, 1, 1), golden)


def test_unit_from_period_matches_oracle():
    assert fundamental_eps(qi_from_poly(1, -3, 1, 1)) == pell_oracle(5).fundamental
    assert fundamental_eps(qi_from_poly(1, -6, 1, 1)) == pell_oracle(8).fundamental
