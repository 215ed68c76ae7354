"""
Tests for the totient sieve, the summatory functions and their main terms
"""
import math
from fractions import Fraction

import pytest

from config.settings import settings
from core.totient import AsymptoticConstants, PhiSieve, TotientEngine, calibration_points, totient_engine


@pytest.fixture
def engine():
    return TotientEngine()


def test_phi_sieve_values():
    sieve = PhiSieve.build(30)
    expected = [0, 1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4, 12, 6, 8, 8]
    assert list(sieve.phi_values[:17]) == expected
    assert sieve[30] == 8
    assert sieve[29] == 28


def test_sums_at_ten(engine):
    s = engine.sums(10)
    assert s.exact
    assert s.s0 == 32
    assert s.s0_odd == 19
    assert s.s0_even == 26


def test_exact_weighted_sums(engine):
    s = engine.sums(4)
    assert s.s1 == Fraction(8, 3)
    assert s.s2 == Fraction(115, 72)
    assert s.s1_odd == Fraction(5, 3)


def test_float_sums_match_exact(engine):
    exact = engine.sums(300, exact=True)
    approx = engine.sums(300, exact=False)
    assert not approx.exact
    assert float(exact.s2_odd) == pytest.approx(approx.s2_odd, rel=1e-12)
    assert float(exact.s1_even) == pytest.approx(approx.s1_even, rel=1e-12)


def test_sums_reject_non_positive(engine):
    with pytest.raises(ValueError):
        engine.sums(0)
    with pytest.raises(ValueError):
        engine.main_terms(100, Fraction(1, 2))


def test_phi_4a_sum_equals_even_sum(engine):
    for N in (10, 37, 200):
        assert engine.phi_4a_sum(N) == engine.sums(N).s0_even


def test_constants():
    c = AsymptoticConstants.compute()
    assert c.zeta2 == pytest.approx(math.pi ** 2 / 6, rel=1e-12)
    assert c.euler_gamma == pytest.approx(0.5772156649015329, rel=1e-10)
    assert c.zeta_prime_over_zeta_at_2 == pytest.approx(-0.5699609930945, rel=1e-6)


def test_identity_rows_gated_forms_hold(engine):
    rows = engine.identity_rows(150)
    gated = [row for row in rows if row.gated]
    assert len(gated) == 3
    assert all(row.passed for row in gated)
    assert not any(row.failed for row in rows)


def test_verify_in_regime(engine):
    rows = {row.label: row for row in engine.verify(2000)}
    # 2000 is one of the calibration points
    main_rows = [row for label, row in rows.items() if not label.startswith("identity")]
    assert len(main_rows) == 13
    assert all(row.passed is True for row in main_rows)
    assert "identity_odd_expanded" in rows


def test_verify_below_regime_is_unchecked(engine):
    rows = engine.verify(200)
    main_rows = [row for row in rows if not row.label.startswith("identity")]
    assert all(row.passed is None for row in main_rows)


def test_verify_skips_identities_above_exact_limit(engine):
    rows = engine.verify(5000)
    assert not any(row.label.startswith("identity") for row in rows)


def test_global_engine_caches_sieve():
    totient_engine.phi(50)
    limit = totient_engine.sieve.limit
    totient_engine.phi(10)
    assert totient_engine.sieve.limit == limit


def test_calibration_points():
    assert calibration_points(1000, 100000) == [1000, 2000, 5000, 10000, 20000, 50000, 100000]
    assert calibration_points(1000, 1500) == [1000, 1500]


def test_calibration_is_scaled_profile_maximum(engine, monkeypatch):
    monkeypatch.setattr(settings, "totient_calibration_n", 5000)
    constant = engine.calibrate()
    profile = engine.normalized_error_profile([1000, 2000, 5000])
    assert constant == pytest.approx(settings.totient_calibration * max(profile.values()))
    assert constant > 0

    rows = [row for row in engine.verify(5000) if not row.label.startswith("identity")]
    assert all(row.payload["calibration"] == constant for row in rows)
    assert all(row.passed is True for row in rows)


def test_verify_calibration_override(engine):
    rows = {row.label: row for row in engine.verify(2000, calibration=0.0)}
    assert rows["s0"].passed is False
    assert rows["s0"].tolerance == 0.0
