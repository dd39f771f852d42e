"""Shared fixtures."""

from __future__ import annotations

import numpy as np
import pytest

from tests.helpers import UNIT_PM


@pytest.fixture()
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture()
def unit_pm():
    return UNIT_PM
