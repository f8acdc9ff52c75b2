from functools import lru_cache

import pytest

from symembed.catalog import get
from symembed.satake import spherical_lattice

SEMISIMPLE_SPACES = ["AI.sl.2", "AI.sl.3", "AI.ad.1", "AI.ad.2", "AII.sl.4", "AIII.sl.2", "group.A1"]


@lru_cache(maxsize=None)
def _lattice(name):
    return spherical_lattice(get(name))


@pytest.fixture(scope="session")
def lattice():
    """Spherical lattice of a catalog entry, built once per session."""
    return _lattice
