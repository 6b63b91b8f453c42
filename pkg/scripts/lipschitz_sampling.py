"""Sampled Hausdorff ratios against the per-cell Lipschitz constants.

Run: python3 scripts/lipschitz_sampling.py [pairs] [seed]
"""
import sys
from collections import defaultdict
from dataclasses import dataclass

from l1faces import analyze
from l1faces.solution import lipschitz_bound, lipschitz_samples


@dataclass
class Config:
    A: tuple = ((1, 0, 2), (0, 2, -2))
    pairs: int = 500
    seed: int = 7


def main(cfg: Config):
    dec = analyze(cfg.A)
    samples = lipschitz_samples(dec, cfg.pairs, cfg.seed)
    by_kind = defaultdict(float)
    for s in samples:
        by_kind[s["kind"]] = max(by_kind[s["kind"]], s["ratio"])
    print(f"{'cell':>4} {'closed form':>12} {'edge bound':>11} {'sampled max':>12}")
    for c in dec.cells:
        cf = "-" if c.lipschitz is None else f"{c.lipschitz:.6f}"
        print(f"{c.id:>4} {cf:>12} {lipschitz_bound(dec, c):>11.6f} "
              f"{by_kind.get(f'within:{c.id}', float('nan')):>12.6f}")
    print(f"mixed pairs: max ratio {by_kind['mixed']:.6f}")
    print(f"overall estimate: {max(by_kind.values()):.6f} over {len(samples)} pairs")


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]]
    main(Config(*((Config.A,) + tuple(args))) if args else Config())
