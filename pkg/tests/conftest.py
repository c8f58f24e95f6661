from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from chaoshash.bitcore import BitString, Configuration

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def golden_dir():
    return GOLDEN


def bits(text: str) -> BitString:
    return BitString(text)


def config(text: str) -> Configuration:
    return Configuration(text)
