import pytest
from mpmath import mp

DIGITS = 40


@pytest.fixture(autouse=True)
def precision():
    with mp.workdps(DIGITS):
        yield DIGITS
