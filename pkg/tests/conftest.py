import pytest

from sodhh.catalog import CATALOG
from sodhh.linalg import QQ


@pytest.fixture(scope="session")
def algebras():
    """One built instance of every catalog algebra over Q."""
    return {name: entry.algebra(QQ) for name, entry in CATALOG.items()}
