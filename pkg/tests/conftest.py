"""Pytest configuration and fixtures."""
import random

import pytest

from pdelaunay.core.polytopes import Normalization, construct_G, construct_P


@pytest.fixture
def rng():
    """Seeded random source for property tests."""
    return random.Random(20240611)


@pytest.fixture(scope="session")
def c7_half():
    """P(7,1,2) in half normalization (the 56-vertex Gosset polytope)."""
    return construct_P(7, 1, 2, Normalization.HALF)


@pytest.fixture(scope="session")
def c7_integral():
    """P(7,1,2) in integral normalization."""
    return construct_P(7, 1, 2, Normalization.INTEGRAL)


@pytest.fixture(scope="session")
def g6():
    """The 6-dimensional G-tope."""
    return construct_G(6)


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """Run from an empty directory with no PDELAUNAY_* variables set."""
    for name in ("PDELAUNAY_CONFIG_PATH", "PDELAUNAY_JOBS", "PDELAUNAY_NODE_BUDGET", "PDELAUNAY_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path
