"""Shared fixtures built on the oracle helpers in oracles.py."""
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import cached_basis  # noqa: E402


@pytest.fixture
def basis10():
    return cached_basis(10)


@pytest.fixture
def basis14():
    return cached_basis(14)
