"""Data for 3-D pictures of the cells D_F when m = 2 (no plotting here)."""
from __future__ import annotations

import math
from fractions import Fraction

from .decomposition import Decomposition, locate
from .io import _part_json


class FigureDimensionError(ValueError):
    pass


def unit(v) -> list:
    f = [float(a) for a in v]
    nrm = math.sqrt(sum(a * a for a in f))
    return [a / nrm for a in f]


def hemisphere_grid(n_polar: int = 12, n_azimuth: int = 24) -> list:
    """Rational points close to the unit sphere with lambda >= 0."""
    pts = [(Fraction(1), Fraction(0), Fraction(0))]
    for i in range(1, n_polar + 1):
        th = 0.5 * math.pi * i / n_polar
        for j in range(n_azimuth):
            ph = 2.0 * math.pi * j / n_azimuth
            v = (math.cos(th), math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph))
            pts.append(tuple(Fraction(a).limit_denominator(10_000) for a in v))
    return pts


def figure_data(dec: Decomposition, n_polar: int = 12, n_azimuth: int = 24) -> dict:
    """Unit extreme directions per cell plus the grid points of D_F on the unit sphere."""
    if dec.m != 2:
        raise FigureDimensionError(f"figure export needs m = 2, got m = {dec.m}")
    members = {c.id: [] for c in dec.cells}
    for p in hemisphere_grid(n_polar, n_azimuth):
        for cid in locate(dec, p[0], p[1:]):
            members[cid].append(unit(p))
    return {
        "axes": ["lambda", "b1", "b2"],
        "cells": [dict(id=c.id, **_part_json(c.partition),
                       directions=[unit(g) for g in c.d_generators],
                       sphere_points=members[c.id])
                  for c in dec.cells],
    }
