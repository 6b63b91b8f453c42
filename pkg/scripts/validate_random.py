"""Randomized oracle/structure agreement over many small instances.

Run: L1S_THREADS=4 python3 scripts/validate_random.py [trials] [seed]
"""
import sys
import time

from l1faces.validate import ValidationConfig, run_validation

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 200
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 42
cfg = ValidationConfig.from_env(seed=seed, trials=trials)
t0 = time.perf_counter()
rep = run_validation(cfg)
dist = max(q.get("oracle_distance", 0.0) for t in rep["trials"] for q in t["queries"])
kkt = max(q.get("vertex_kkt", 0.0) for t in rep["trials"] for q in t["queries"])
print(f"{trials} trials in {time.perf_counter() - t0:.1f} s: "
      f"{'pass' if rep['passed'] else 'FAIL ' + str(rep['failed_trials'])}; "
      f"max oracle distance {dist:.2e}, max vertex KKT {kkt:.2e}")
