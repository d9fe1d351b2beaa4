from __future__ import annotations

import pytest
from hypothesis import settings

from setmatrix.logic import enum_universe

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def u_small():
    """rank 0, depth 1, three shapes: 4 values, 25 in the encoded model."""
    return enum_universe(0, ["1x2", "2x1", "2x2"], 1)


@pytest.fixture(scope="session")
def u_1x2():
    """rank 1, depth 1, one shape."""
    return enum_universe(1, ["1x2"], 1)


@pytest.fixture(scope="session")
def u_rank2():
    return enum_universe(2, [], 0)
