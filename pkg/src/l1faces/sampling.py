"""Random instances and parameter points with exact rational coordinates."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exact import rank

DEN = 12


def random_rational(rng: np.random.Generator, lo, hi, den: int = DEN) -> Fraction:
    """Uniform on the grid ``{k/den}`` inside ``[lo, hi]``."""
    a, b = int(np.ceil(lo * den)), int(np.floor(hi * den))
    return Fraction(int(rng.integers(a, b + 1)), den)


def random_matrix(rng: np.random.Generator, m: int, n: int, bound: int = 5,
                  max_tries: int = 1000) -> tuple:
    """Integer m x n matrix with entries in [-bound, bound] and full row rank."""
    for _ in range(max_tries):
        A = tuple(tuple(Fraction(int(v)) for v in row)
                  for row in rng.integers(-bound, bound + 1, size=(m, n)))
        if rank(A) == m:
            return A
    raise RuntimeError("could not draw a full-row-rank matrix")


def random_parameter(rng: np.random.Generator, m: int, lam_max=5, b_max=5,
                     lam_min=0) -> tuple:
    """``(lambda, b_1..b_m)`` with rational entries; lambda in [lam_min, lam_max]."""
    lam = random_rational(rng, lam_min, lam_max)
    if lam_min > 0 and lam == 0:
        lam = Fraction(1, DEN)
    return (lam,) + tuple(random_rational(rng, -b_max, b_max) for _ in range(m))


def random_positive_parameter(rng: np.random.Generator, m: int, **kw) -> tuple:
    kw.setdefault("lam_min", Fraction(1, DEN))
    return random_parameter(rng, m, **kw)


def cell_point_sample(cell, rng: np.random.Generator, max_weight: int = 6) -> tuple:
    """A point of int D_F: strictly positive rational combination of generators.

    The generators of D_F span its linear hull, so a strictly positive
    combination lies in the relative interior (the interior when D_F is full
    dimensional).
    """
    gens = cell.d_generators
    dim = len(gens[0])
    out = [Fraction(0)] * dim
    for g in gens:
        w = Fraction(int(rng.integers(1, max_weight + 1)), int(rng.integers(1, max_weight + 1)))
        out = [a + w * c for a, c in zip(out, g)]
    return tuple(out)
