import os
from fractions import Fraction as Q

import pytest
from hypothesis import HealthCheck, settings

from l1faces import analyze
from l1faces.polytope import SignPartition

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

EXAMPLE_A = ((1, 0, 2), (0, 2, -2))
V1, V2, V3, V4 = (Q(1), Q(1, 2)), (Q(0), Q(-1, 2)), (Q(-1), Q(-1, 2)), (Q(0), Q(1, 2))
# columns of the generator matrix: (0, A2), (0, A3), (0, -A2), (0, -A3), (1, Vk)
U = {1: (0, 0, 2), 2: (0, 2, -2), 3: (0, 0, -2), 4: (0, -2, 2),
     5: (1,) + V1, 6: (1,) + V2, 7: (1,) + V3, 8: (1,) + V4}


def part(plus, zero, minus):
    """Sign partition from 1-based index lists."""
    return SignPartition({i - 1 for i in plus}, {i - 1 for i in zero}, {i - 1 for i in minus})


# reference rows: partition, extreme points, extreme directions, closed form (or None)
TABLE = {
    1: (part([1, 2, 3], [], []), {V1}, {1, 2, 5}, None),
    2: (part([], [], [1, 2, 3]), {V3}, {3, 4, 7}, None),
    3: (part([2], [1, 3], []), {V1, V4}, {1, 5, 8}, lambda l, b1, b2: (0, -l / 4 + b2 / 2, 0)),
    4: (part([], [1, 3], [2]), {V3, V2}, {3, 6, 7}, lambda l, b1, b2: (0, l / 4 + b2 / 2, 0)),
    5: (part([3], [1, 2], []), {V1, V2}, {2, 5, 6}, lambda l, b1, b2: (0, 0, b1 / 4 - b2 / 4 - l / 8)),
    6: (part([], [1, 2], [3]), {V3, V4}, {4, 7, 8}, lambda l, b1, b2: (0, 0, b1 / 4 - b2 / 4 + l / 8)),
    7: (part([2], [1], [3]), {V4}, {1, 4, 8}, lambda l, b1, b2: (0, b1 / 2 + b2 / 2 - l / 4, b1 / 2)),
    8: (part([3], [1], [2]), {V2}, {2, 3, 6}, lambda l, b1, b2: (0, b1 / 2 + b2 / 2 + l / 4, b1 / 2)),
    9: (part([], [1, 2, 3], []), {V1, V2, V3, V4}, {5, 6, 7, 8}, lambda l, b1, b2: (0, 0, 0)),
}


def row_cell(dec, row):
    """Cell of the example decomposition carrying reference row ``row``."""
    return dec.cell_by_partition(TABLE[row][0])


def ray(g):
    """Canonical representative of the ray through g (positive scaling)."""
    g = tuple(Q(a) for a in g)
    s = next(abs(a) for a in g if a != 0)
    return tuple(a / s for a in g)


@pytest.fixture(scope="session")
def example():
    return analyze(EXAMPLE_A)
