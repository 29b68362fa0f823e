import math

import pytest

from nliouville import Dimension


@pytest.fixture(params=[2, 3, 4], ids=lambda n: f"n{n}")
def dim(request):
    return Dimension(request.param)


@pytest.fixture
def d2():
    return Dimension(2)


def rel(a, b):
    return abs(a - b) / abs(b)


EIGHT_PI = 8 * math.pi
