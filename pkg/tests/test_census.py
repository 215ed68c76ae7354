"""
Tests for the congruence, word-walk, exact-radius and brute-force censuses
"""
import math
from fractions import Fraction

import pytest

from core.census import (
    BRUTEFORCE,
    CONGRUENCE,
    REDUCED_DFS,
    WORD_DFS,
    CensusEngine,
    census_engine,
    constant_B,
    constant_E,
    integral_constant,
    main_term_S_B,
)
from core.errors import BadDiscriminant, InvalidQuery
from core.qi_core import qi_from_poly
from models.census import CensusQuery


@pytest.fixture
def engine():
    return CensusEngine()


def test_hand_counted_sets(engine):
    assert engine.s_b_total(2, 1, 3) == 3
    assert engine.s_pm_total(1, 1, 6, 1) == 1
    assert engine.s_pm_total(1, None, 50, -1) == 0


def test_reduced_counts_at_small_radius(engine):
    assert engine.reduced_count("E", 1, 1, 1, 3) == 0
    assert engine.reduced_count("E", 1, 1, 1, 4) == 1
    assert engine.reduced_count("B", 1, 1, 1, 3) == 1
    assert engine.reduced_count("B", 1, 1, 1, 4) == 4


def test_unpruned_counts_at_small_radius(engine):
    assert engine.reduced_count_unpruned("B", 1, 1, 1, 3) == 1
    assert engine.reduced_count_unpruned("E", 1, 1, 1, 4) == 1


@pytest.mark.parametrize("kind,alpha,beta1,beta2,M", [
    ("E", 1, 1, 1, 5),
    ("E", 2, None, 1, 5),
    ("E", 1, 2, 1, Fraction(9, 2)),
    ("B", 1, 1, 1, 5),
    ("B", 2, 1, 1, 5),
])
def test_pruned_walk_matches_unpruned_enumeration(engine, kind, alpha, beta1, beta2, M):
    assert engine.reduced_count(kind, alpha, beta1, beta2, M) == \
        engine.reduced_count_unpruned(kind, alpha, beta1, beta2, M)


@pytest.mark.parametrize("alpha,beta", [(2, 1), (1, 2), (Fraction(3, 2), 1)])
def test_congruence_matches_brute_force_S_minus(engine, alpha, beta):
    assert engine.s_pm_total(alpha, beta, 40, -1) == engine.brute_force_S_pm(alpha, beta, 40, -1)


@pytest.mark.parametrize("alpha,beta", [(1, 1), (2, 1), (1, Fraction(5, 3))])
def test_congruence_matches_brute_force_S_plus(engine, alpha, beta):
    assert engine.s_pm_total(alpha, beta, 40, 1) == engine.brute_force_S_pm(alpha, beta, 40, 1)


@pytest.mark.parametrize("alpha,beta", [(2, 1), (1, 2), (Fraction(3, 2), Fraction(3, 2))])
def test_congruence_matches_brute_force_S_B(engine, alpha, beta):
    assert engine.s_b_total(alpha, beta, 40) == engine.brute_force_S_B(alpha, beta, 40)


def test_word_walks_match_congruence(engine):
    words = engine.ecf_word_census(2, 1, 1, 50)
    exact = engine.theorem1_experiment(2, 1, 1, 50)
    assert words.total == exact.exact_count
    assert words.by_sign[-1] == exact.extra["S_minus"]
    assert words.by_sign[1] == exact.extra["S_plus"]
    assert engine.bcf_word_census(2, 1, 50).total == engine.s_b_total(2, 1, 50)


def test_cross_check_attaches_ledger(engine):
    result = engine.theorem1_experiment(2, 1, 1, 60, cross_check=True)
    assert result.extra["methods_agree"]
    ledger = result.extra["ledger"]
    assert ledger["power_bound_holds"]
    assert ledger["T_1"] + ledger["power_tail"] == result.exact_count
    assert result.extra["reduced_count"] > 0


def test_infinite_beta1_counts_only_S_plus(engine):
    result = engine.theorem1_experiment(1, None, 1, 40)
    assert result.extra["S_minus"] == 0
    assert result.exact_count == engine.s_pm_total(1, 1, 40, 1)
    assert result.beta1 == "inf"


def test_kloosterman_identity_matches_congruence(engine):
    identity = engine.kloosterman_identity(2, 1, 30)
    assert identity["corrected"] == identity["congruence"]
    assert identity["raw"] >= identity["corrected"]


def test_relaxed_B_census_needs_entry_bound(engine):
    with pytest.raises(InvalidQuery):
        engine.bcf_word_census(1, 1, 12)
    relaxed = engine.bcf_word_census(1, 1, 12, entry_bound=10)
    assert relaxed.total == engine.brute_force_S_B(1, 1, 12, entry_bound=10)


def test_excluded_parameters(engine):
    with pytest.raises(InvalidQuery):
        engine.s_b_total(1, 1, 10)
    with pytest.raises(InvalidQuery):
        engine.theorem1_experiment(1, 1, 1, 10)
    with pytest.raises(InvalidQuery):
        engine.reduced_count("B", 1, None, 1, 10)
    with pytest.raises(InvalidQuery):
        engine.s_b_total(2, 1, 0)


def test_query_validation():
    with pytest.raises(InvalidQuery):
        CensusQuery(kind="B", alpha=1, beta1=1, radius_bound=10)
    with pytest.raises(InvalidQuery):
        CensusQuery(kind="E", alpha="1.5", beta1=1, radius_bound=10)
    query = CensusQuery(kind="E", alpha="3/2", beta1="inf", radius_bound="21/2")
    assert query.beta1 is None
    assert query.N == 10
    assert query.describe()["beta1"] == "inf"


def test_enumerate_reduced_by_disc():
    golden = qi_from_poly(1, -1, -1, 1)
    shifted = qi_from_poly(1, -3, 1, 1)
    assert set(census_engine.enumerate_reduced_by_disc(5, "E")) == {golden, shifted}
    assert census_engine.enumerate_reduced_by_disc(5, "B") == [shifted]
    for disc in (4, 7, -3):
        with pytest.raises(BadDiscriminant):
            census_engine.enumerate_reduced_by_disc(disc)


def test_integral_constants_match_closed_forms():
    assert integral_constant("E", 2, 1, 1) == pytest.approx(math.log(3) / math.pi ** 2, rel=1e-3)
    assert integral_constant("E", 1, None, 1) == pytest.approx(math.log(2) / math.pi ** 2, rel=1e-3)
    assert integral_constant("B", 2, 1) == pytest.approx(constant_B(2, 1), rel=1e-3)
    assert constant_E(2, 1, 1) == pytest.approx(math.log(3) / math.pi ** 2)
    assert constant_B(2, 1) == pytest.approx(math.log(2) / (math.pi ** 2 / 3))
    assert main_term_S_B(2, 1, 10) == pytest.approx(100 * math.log(2) / (math.pi ** 2 / 3))


def test_run_query_methods_agree(engine):
    query = CensusQuery(kind="E", alpha=2, beta1=1, beta2=1, radius_bound=40)
    rows = engine.run_query(query, [CONGRUENCE, WORD_DFS, BRUTEFORCE])
    assert [row.method for row in rows] == [CONGRUENCE, WORD_DFS, BRUTEFORCE]
    assert len({row.exact_count for row in rows}) == 1
    assert all(row.passed is None for row in rows)

    b_query = CensusQuery(kind="B", alpha=2, beta1=1, radius_bound=40)
    b_rows = engine.run_query(b_query, [CONGRUENCE, WORD_DFS, BRUTEFORCE, REDUCED_DFS])
    assert b_rows[0].exact_count == b_rows[1].exact_count == b_rows[2].exact_count
    assert b_rows[3].method == REDUCED_DFS
    with pytest.raises(InvalidQuery):
        engine.run_query(b_query, ["sampling"])


def test_parallel_blocks_match_serial():
    engine = CensusEngine()
    engine.block_size = 64
    serial = engine.s_b_total(2, 1, 300, threads=1)
    assert engine.s_b_total(2, 1, 300, threads=2) == serial


@pytest.mark.slow
def test_theorem_census_within_band():
    N = 2000
    result = census_engine.theorem1_experiment(2, 1, 1, N)
    predicted = N * N * math.log(3) / math.pi ** 2
    assert abs(result.exact_count - predicted) / predicted <= 0.12
    assert result.passed is True


@pytest.mark.slow
def test_S_B_census_within_band():
    N = 3000
    result = census_engine.count_S_B_congruence(2, 1, N)
    predicted = N * N * math.log(2) / (math.pi ** 2 / 3)
    assert abs(result.exact_count - predicted) / predicted <= 0.05
