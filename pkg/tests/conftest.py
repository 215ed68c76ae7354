"""
Shared fixtures for the ECFCensus test suite
"""
import os
import sys

import pytest

# Add the project root and src directory to the Python path
project_root = os.path.join(os.path.dirname(__file__), '..')
src_dir = os.path.join(project_root, 'src')
sys.path.insert(0, project_root)
sys.path.insert(0, src_dir)

from core.qi_core import qi_from_poly
from models.words import BCF, ECF, CfWord


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running census and exhaustive checks")


@pytest.fixture
def golden():
    """(1 + sqrt 5) / 2"""
    return qi_from_poly(1, -1, -1, 1)


@pytest.fixture
def two_plus_sqrt3():
    return qi_from_poly(1, -4, 1, 1)


@pytest.fixture
def sqrt2():
    return qi_from_poly(1, 0, -2, 1)


@pytest.fixture
def three_plus_sqrt7_half():
    """(3 + sqrt 7) / 2, BCF period [3, 6]"""
    return qi_from_poly(2, -6, 1, 1)


@pytest.fixture
def golden_period():
    return CfWord.of(ECF, [(2, -1), (2, 1)])


@pytest.fixture
def bcf_word():
    return CfWord.of(BCF, [3, 6])
