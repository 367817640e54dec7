import pytest

from taylorpade.fields import PRIMES_62, PrimeField, Rationals


@pytest.fixture
def gf():
    return PrimeField(PRIMES_62[0])


@pytest.fixture
def qq():
    return Rationals()
