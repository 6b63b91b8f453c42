"""Print the face/cell table of the 2x3 example with closed-form solutions.

Run: python3 scripts/reproduce_cell_table.py
"""
from dataclasses import dataclass
from fractions import Fraction
import time

from l1faces import analyze, solve
from l1faces.cli import summary_table
from l1faces.sampling import cell_point_sample

import numpy as np


@dataclass
class Config:
    A: tuple = ((1, 0, 2), (0, 2, -2))
    seed: int = 0


def main(cfg: Config = Config()):
    t0 = time.perf_counter()
    dec = analyze(cfg.A)
    elapsed = time.perf_counter() - t0
    print(summary_table(dec), end="")
    print(f"built in {elapsed:.3f} s\n")
    rng = np.random.default_rng(cfg.seed)
    for cell in dec.cells:
        p = cell_point_sample(cell, rng)
        S = solve(dec, p[0], p[1:])
        shown = [tuple(str(a) for a in v) for v in S.vertices]
        print(f"cell {cell.id} {cell.partition}: S({p[0]}, {tuple(map(str, p[1:]))}) "
              f"= {S.kind} {shown}")


if __name__ == "__main__":
    main()
