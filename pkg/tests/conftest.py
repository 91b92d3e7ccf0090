import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nuzeta.acceptance import Artifacts
from nuzeta.coeffs import build_table


@pytest.fixture(scope="session")
def artifacts():
    """Shared heavy state (tables, census, first-kind window) for the whole run."""
    return Artifacts(jobs=1)


@pytest.fixture(scope="session")
def table5(artifacts):
    return artifacts.table5()


@pytest.fixture(scope="session")
def table1k():
    return build_table(1000)


@pytest.fixture(scope="session")
def census200(artifacts):
    return artifacts.census200()
