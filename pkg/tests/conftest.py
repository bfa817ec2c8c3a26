import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import TAGGER, VOCAB, random_store


@pytest.fixture(scope="session")
def tagger():
    return TAGGER


@pytest.fixture(scope="session")
def store():
    return random_store(VOCAB, dim=10, seed=7)


@pytest.fixture()
def data_dir():
    return Path(__file__).parent / "data"
