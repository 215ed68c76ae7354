"""
Tests for the word/matrix correspondence and the counted matrix sets
"""
import pytest

from core.cf_shifts import omega_tilde
from core.errors import NotInS, NotInSPlus, NotPlusWord
from core.word_matrix import (
    S,
    S_B,
    S_MINUS,
    S_PLUS,
    THETA,
    THETA_TILDE,
    bcf_matrix_to_word,
    in_S,
    in_S_B,
    in_S_sign,
    in_theta,
    is_consecutive_convergents,
    j_E,
    matrix_to_word,
    membership,
    phi_branch_holds,
    phi_bijection,
    phi_inverse,
    word_to_matrix,
)
from models.matrix import Mat2Z
from models.words import BCF, ECF, CfWord


def test_matrix_to_word_golden_period():
    assert matrix_to_word(Mat2Z(3, 2, 2, 1)).raw() == [(2, -1), (2, 1)]


def test_matrix_to_word_round_trips_longer_word():
    word = CfWord.of(ECF, [(4, 1), (2, -1), (6, 1), (2, 1)])
    assert matrix_to_word(word_to_matrix(word)) == word


def test_matrix_to_word_rejects_non_word_matrices():
    with pytest.raises(NotInS):
        matrix_to_word(Mat2Z(2, 1, 1, 1))
    with pytest.raises(NotInS):
        matrix_to_word(Mat2Z(1, 0, 0, 1))


def test_bcf_matrix_to_word(bcf_word):
    assert bcf_matrix_to_word(Mat2Z(17, -3, 6, -1)).raw() == [3, 6]
    assert bcf_matrix_to_word(bcf_word.matrix()) == bcf_word
    assert bcf_matrix_to_word(Mat2Z(5, -1, 1, 0)).raw() == [5]
    with pytest.raises(NotInS):
        bcf_matrix_to_word(Mat2Z(3, 2, 2, 1))


def test_theta_membership():
    assert in_theta(Mat2Z(13, 8, 8, 5))
    assert in_theta(Mat2Z(4, -1, 1, 0))
    assert not in_theta(Mat2Z(3, 2, 2, 1))
    assert not in_theta(Mat2Z(2, 1, 1, 1))


def test_membership_flags(golden_period):
    flags = membership(omega_tilde(golden_period), 1, 1, 18)
    for flag in (THETA, THETA_TILDE, S, S_PLUS):
        assert flag in flags
    assert S_MINUS not in flags
    assert S_B not in flags

    period_flags = membership(Mat2Z(3, 2, 2, 1), 1, 1, 18)
    assert THETA_TILDE in period_flags
    assert THETA not in period_flags
    assert S in period_flags


def test_in_S_sign_trace_bound():
    sigma = Mat2Z(13, 8, 8, 5)
    assert in_S_sign(sigma, 1, 1, 18, 1)
    assert not in_S_sign(sigma, 1, 1, 17, 1)
    assert not in_S_sign(sigma, 1, 1, 18, -1)
    assert not in_S_sign(sigma, 1, None, 18, 1)
    assert not in_S_sign(sigma, 2, 1, 18, 1)


def test_in_S_B_trace_bound():
    sigma = Mat2Z(17, -3, 6, -1)
    assert in_S_B(sigma, 2, 1, 16)
    assert not in_S_B(sigma, 2, 1, 15)
    assert not in_S_B(sigma, 4, 1, 16)


def test_in_S_requires_ordering():
    assert in_S(Mat2Z(5, 2, 2, 1))
    assert not in_S(Mat2Z(5, 2, 7, 3))


def test_phi_bijection_branch(golden_period):
    sigma = omega_tilde(golden_period)
    m, u, v, branch = phi_bijection(sigma)
    assert (m, u, v, branch) == (8, 13, 5, "A2")
    assert phi_branch_holds(m, u, v, branch)
    assert phi_inverse(m, u, v) == sigma


def test_phi_bijection_odd_branch():
    sigma = CfWord.of(ECF, [(2, -1), (2, 1), (2, 1)]).matrix()
    assert sigma == Mat2Z(8, 3, 5, 2)
    assert phi_bijection(sigma) == (3, 8, 2, "A1")
    assert phi_branch_holds(3, 8, 2, "A1")
    assert phi_inverse(3, 8, 2) == sigma


def test_phi_rejects_outside_S_plus():
    with pytest.raises(NotInSPlus):
        phi_bijection(Mat2Z(3, 2, 2, 1))
    with pytest.raises(NotInSPlus):
        phi_inverse(8, 13, 6)


def test_j_E(golden, golden_period):
    doubled = CfWord.of(ECF, golden_period.raw() * 2)
    result = j_E(doubled)
    assert result.omega == golden
    assert result.k == 1
    assert result.block == golden_period
    with pytest.raises(NotPlusWord):
        j_E(golden_period)
    with pytest.raises(NotPlusWord):
        j_E(CfWord.of(BCF, [3, 6]))


def test_j_E_counts_effective_periods(two_plus_sqrt3):
    result = j_E(CfWord.of(ECF, [(4, -1)] * 3))
    assert result.omega == two_plus_sqrt3
    assert result.k == 3


def test_consecutive_convergents(three_plus_sqrt7_half):
    sigma = Mat2Z(17, -3, 6, -1)
    assert is_consecutive_convergents(sigma, three_plus_sqrt7_half)
    assert not is_consecutive_convergents(Mat2Z(3, 2, 2, 1), three_plus_sqrt7_half)
