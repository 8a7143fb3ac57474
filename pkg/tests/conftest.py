import random

import pytest

from thicket.barcode import (CLOSED, OPEN, Bar, GradedBarcode, closed,
                             full_line, half_open, half_open_r, open_iv,
                             ray_left, ray_right, singleton)


def gb(*bars, char=2):
    return GradedBarcode(list(bars), char)


def bar(iv, d=0):
    return Bar(iv, d)


# one representative per interval shape class
SHAPE_REPRESENTATIVES = [
    closed(0, 2),
    open_iv(0, 2),
    half_open(0, 2),
    half_open_r(0, 2),
    singleton(1),
    ray_right(0, CLOSED),
    ray_right(0, OPEN),
    ray_left(0, CLOSED),
    ray_left(0, OPEN),
    full_line(),
]


@pytest.fixture
def rng():
    return random.Random(20260811)
