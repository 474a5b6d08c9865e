from __future__ import annotations

import random

import pytest
from hypothesis import settings

from multicurves.dvr import QQ, GF, Scalar

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def small_scalar(rng: random.Random, field=QQ, unit=False) -> Scalar:
    c0 = rng.choice([1, -1, 2, 3]) if unit else rng.randint(-3, 3)
    num = [c0] + [rng.randint(-3, 3) for _ in range(rng.randint(0, 2))]
    den = [1] + [rng.randint(-2, 2) for _ in range(rng.randint(0, 1))]
    return Scalar(num, den, field)


@pytest.fixture(params=[QQ, GF(101)], ids=["QQ", "F101"])
def field(request):
    return request.param
