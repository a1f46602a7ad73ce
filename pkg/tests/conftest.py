import support
import pytest


@pytest.fixture
def I1():
    return support.I1


@pytest.fixture
def I2():
    return support.I2


@pytest.fixture
def I3():
    return support.I3


@pytest.fixture
def I4():
    return support.i4(4)
