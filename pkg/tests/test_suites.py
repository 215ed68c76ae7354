"""
Tests for the verification suite registry at quick scale
"""
import pytest

from core.suites import FULL, QUICK, SCALES, VerificationSuites, verification_suites

SUITE_NAMES = ["totient", "kloosterman", "pell", "galois", "bijection", "oracle", "reduced", "radius_trace", "shifts",
               "census"]


def test_registry_names():
    assert verification_suites.names == SUITE_NAMES
    assert set(SCALES) == {QUICK, FULL}


def test_unknown_suite():
    with pytest.raises(KeyError):
        verification_suites.run("spectral")


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_quick_suite_has_no_failures(name):
    rows = VerificationSuites().run(name, QUICK)
    assert rows
    assert all(row.suite == name for row in rows)
    failed = [row.label for row in rows if row.failed]
    assert failed == []


def test_suites_check_something():
    rows = verification_suites.run("galois", QUICK)
    assert rows[0].payload["checked"] > 0
    assert rows[0].passed is True


def test_reduced_suite_labels_sampled_directions():
    rows = {row.label: row for row in VerificationSuites().run("reduced", QUICK)}
    trace = SCALES[QUICK].word_trace
    for kind in ("E", "B"):
        enumerated = rows[f"{kind}_periodic_values_enumerated_sampled[Tr<={trace}]"]
        assert "trace" in enumerated.payload["scope"]
        window = rows[f"{kind}_nonreduced_have_preperiod_sampled[A<=12]"]
        assert window.payload["scope"].endswith("A <= 12")
        assert window.payload["checked"] > 0
