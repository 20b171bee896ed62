# tests/conftest.py
"""
Shared pytest fixtures
"""
import numpy as np
import pytest

from src.utils.error_handler import get_error_handler
from tests.fixtures.test_data import TestDataFactory


@pytest.fixture
def rng():
    """Seeded generator so sampled property tests are reproducible"""
    return np.random.default_rng(20240611)


@pytest.fixture
def factory():
    return TestDataFactory


@pytest.fixture
def case_a_params():
    return TestDataFactory.case_a_params()


@pytest.fixture
def case_b_params():
    return TestDataFactory.case_b_params()


@pytest.fixture
def nmr_system():
    return TestDataFactory.nmr_system()


@pytest.fixture(autouse=True)
def clean_error_history():
    get_error_handler().clear()
    yield
    get_error_handler().clear()
