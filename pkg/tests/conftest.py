import random

import pytest

from qrsmem.gf import field


@pytest.fixture(scope="session")
def f2048():
    return field(11)


@pytest.fixture(scope="session")
def f8():
    return field(3)


@pytest.fixture(scope="session")
def f16():
    return field(4)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
