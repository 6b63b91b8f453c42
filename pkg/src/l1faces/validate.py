"""Randomized end-to-end checks of the exact machinery against the oracles."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import analyze
from .decomposition import Decomposition, in_interior_DF, locate, member_DF
from .io import qs, qvec
from .oracle import bp_lp, kkt_residual, prox_grad_lasso
from .sampling import (cell_point_sample, random_matrix, random_parameter,
                       random_positive_parameter)
from .solution import (hausdorff_distance, kkt_holds, point_to_hull_distance,
                       solve)


@dataclass
class ValidationConfig:
    seed: int = 42
    trials: int = 200
    max_m: int = 3
    max_n: int = 6
    oracle_tol: float = 1e-6
    kkt_tol: float = 1e-10
    lipschitz_slack: float = 1e-9
    threads: int = 1

    @classmethod
    def from_env(cls, **kw) -> "ValidationConfig":
        kw.setdefault("threads", max(1, int(os.environ.get("L1S_THREADS", "1"))))
        return cls(**kw)


def _dims(rng, cfg: ValidationConfig) -> tuple:
    m = int(rng.integers(2, cfg.max_m + 1)) if cfg.max_m >= 2 else 1
    lo = max(m + 1, 3) if cfg.max_n >= max(m + 1, 3) else m
    n = int(rng.integers(lo, cfg.max_n + 1))
    return m, n


def check_query(dec: Decomposition, lam, b, cfg: ValidationConfig, rng) -> dict:
    """All per-query properties; returns a JSON-ready record with a 'pass' flag."""
    A = np.array([[float(a) for a in row] for row in dec.A])
    rec = {"lambda": qs(lam), "b": qvec(b), "failures": []}
    fail = rec["failures"]
    try:
        ids = locate(dec, lam, b)
    except AssertionError as exc:
        fail.append(f"coverage: {exc}")
        rec["pass"] = False
        return rec
    rec["cells"] = ids
    interior = [i for i in ids if in_interior_DF(dec, dec.cell(i), lam, b)]
    if len(interior) > 1:
        fail.append(f"interiors overlap: {interior}")
    S = solve(dec, lam, b)
    verts = S.vertices
    if not verts:
        fail.append("empty solution set")
        rec["pass"] = False
        return rec
    res = max(kkt_residual(A, np.array([float(v) for v in b]), float(lam),
                           np.array([float(a) for a in x])) for x in verts)
    rec["vertex_kkt"] = res
    if res > cfg.kkt_tol:
        fail.append(f"vertex KKT residual {res:.3e}")
    if not all(kkt_holds(dec.A, lam, b, x) for x in verts):
        fail.append("exact KKT violated")
    norms = {sum(abs(a) for a in x) for x in verts}
    if len(norms) != 1:
        fail.append("l1 norm not shared across vertices")
    if lam > 0:
        orc = prox_grad_lasso(A, np.array([float(v) for v in b]), float(lam),
                              tol=1e-11, max_iter=200_000)
        dist = point_to_hull_distance(orc.x, S.float_vertices())
        rec["oracle_distance"] = dist
        if dist > cfg.oracle_tol:
            fail.append(f"oracle distance {dist:.3e}")
    # positive homogeneity
    t = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10)))
    St = solve(dec, t * lam, tuple(t * v for v in b))
    if sorted(St.vertices) != sorted(tuple(t * a for a in x) for x in verts):
        fail.append(f"homogeneity fails for t = {t}")
    rec["pass"] = not fail
    return rec


def check_instance(dec: Decomposition, cfg: ValidationConfig, rng, queries: int = 1) -> dict:
    """Structural checks on one decomposition plus ``queries`` random queries."""
    rec = {"m": dec.m, "n": dec.n, "cells": len(dec.cells), "queries": [], "failures": []}
    fail = rec["failures"]
    for cell in dec.cells:
        for g in cell.d_generators:
            if not member_DF(dec, cell, g[0], g[1:]):
                fail.append(f"generator {qvec(g)} not in D_F of cell {cell.id}")
    # basis pursuit agreement at lambda = 0
    b0 = random_parameter(rng, dec.m)[1:]
    try:
        S0 = solve(dec, 0, b0)
        bp = bp_lp(dec.A, b0)
        if sum(abs(a) for a in bp) != sum(abs(a) for a in S0.vertices[0]):
            fail.append("basis pursuit value differs")
    except AssertionError as exc:
        fail.append(f"coverage at lambda = 0: {exc}")
    for _ in range(queries):
        p = random_positive_parameter(rng, dec.m)
        q = check_query(dec, p[0], p[1:], cfg, rng)
        rec["queries"].append(q)
        if not q["pass"]:
            fail.append("query failed")
    # Lipschitz certificate inside one single-valued cell
    f0 = [c for c in dec.cells if c.face.in_F0 and c.lipschitz is not None]
    if f0:
        cell = f0[int(rng.integers(len(f0)))]
        p, p2 = cell_point_sample(cell, rng), cell_point_sample(cell, rng)
        dist = float(np.linalg.norm([float(a - c) for a, c in zip(p, p2)]))
        try:
            h = hausdorff_distance(solve(dec, p[0], p[1:]), solve(dec, p2[0], p2[1:]))
            if dist > 0 and h > cell.lipschitz * dist + cfg.lipschitz_slack:
                fail.append(f"Lipschitz bound of cell {cell.id} exceeded")
        except AssertionError as exc:
            fail.append(f"coverage: {exc}")
    rec["pass"] = not fail
    return rec


def _random_trial(args) -> dict:
    cfg, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    m, n = _dims(rng, cfg)
    A = random_matrix(rng, m, n)
    rec = check_instance(analyze(A), cfg, rng)
    rec["A"] = [qvec(r) for r in A]
    return rec


def run_validation(cfg: ValidationConfig, dec: Decomposition | None = None) -> dict:
    """Run ``cfg.trials`` trials; on random instances, or queries on ``dec`` if given."""
    if cfg.trials <= 0:
        raise ValueError("trials must be positive")
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    if dec is None:
        jobs = [(cfg, s) for s in children]
        if cfg.threads > 1:
            with ProcessPoolExecutor(cfg.threads) as ex:
                trials = list(ex.map(_random_trial, jobs))
        else:
            trials = [_random_trial(j) for j in jobs]
    else:
        rng = np.random.default_rng(children[0])
        trials = [check_instance(dec, cfg, rng, queries=cfg.trials)]
    for k, t in enumerate(trials):
        t["trial"] = k
    config = {k: v for k, v in asdict(cfg).items() if k != "threads"}
    return {"config": config, "passed": all(t["pass"] for t in trials),
            "failed_trials": [t["trial"] for t in trials if not t["pass"]],
            "trials": trials}
