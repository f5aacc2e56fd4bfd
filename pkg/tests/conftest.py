import pytest

from hvn.ellcurve import CurveOverK
from hvn.quadfield import make_field


@pytest.fixture(scope="session")
def Q6():
    return make_field(6)


@pytest.fixture(scope="session")
def Q5():
    return make_field(5)


@pytest.fixture(scope="session")
def E0(Q6):
    # a = sqrt 6: y^2 + a xy + (a+1) y = x^3 + (a+1) x^2 + (2a-1) x + (a-1)
    return CurveOverK(Q6, [(0, 1), (1, 1), (1, 1), (-1, 2), (-1, 1)])
