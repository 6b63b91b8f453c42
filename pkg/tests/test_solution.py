import math
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1faces import analyze
from l1faces.decomposition import NegativeLambda, locate
from l1faces.exact import dot
from l1faces.sampling import cell_point_sample, random_matrix, random_positive_parameter
from l1faces.solution import (POLYTOPE, UNIQUE, FaceNotInF0, SolutionSet,
                              check_conditions, dual_solve, hausdorff_distance,
                              kkt_holds, lipschitz_bound, lipschitz_constant,
                              lipschitz_estimate, lipschitz_samples,
                              min_norm_point, solve, solve_in_cell, trace_path,
                              unique_solve)

from conftest import TABLE, V1, row_cell

seeds = st.integers(0, 10**6)


def random_dec(seed, m=None, n=None):
    rng = np.random.default_rng(seed)
    m = m or int(rng.integers(2, 4))
    n = n or int(rng.integers(m + 1, 6))
    return analyze(random_matrix(rng, m, n)), rng


# ---------------------------------------------------------------- examples

def test_solve_examples(example):
    S = solve(example, 1, (Q(1, 2), 2))
    assert S.kind == UNIQUE and S.point == (0, Q(3, 4), 0)
    S = solve(example, 1, (4, 2))
    assert S.kind == POLYTOPE
    assert set(S.vertices) == {(3, Q(3, 4), 0), (0, Q(9, 4), Q(3, 2))}
    assert solve(example, 10, (1, 1)).point == (0, 0, 0)
    assert set(solve(example, 0, (1, 0)).vertices) == {(1, 0, 0), (0, Q(1, 2), Q(1, 2))}
    with pytest.raises(NegativeLambda):
        solve(example, -1, (0, 0))


def test_unique_solve_rejects_multivalued_cell(example):
    with pytest.raises(FaceNotInF0):
        unique_solve(example, row_cell(example, 1), 1, (4, 2))


def test_unique_solve_formulas(example):
    rng = np.random.default_rng(3)
    for row in range(3, 10):
        cell = row_cell(example, row)
        for _ in range(3):
            lam, b1, b2 = cell_point_sample(cell, rng)
            assert unique_solve(example, cell, lam, (b1, b2)) == tuple(
                Q(v) for v in TABLE[row][3](lam, b1, b2))


def test_segment_formulas(example):
    """Multi-valued cells reproduce the parametrised segments in closed form."""
    rng = np.random.default_rng(4)
    for _ in range(5):
        lam, b1, b2 = cell_point_sample(row_cell(example, 1), rng)
        lo, hi = max(lam / 4 - b2 / 2, 0), (b1 - lam) / 2
        ends = {(b1 - lam - 2 * t, b2 / 2 - lam / 4 + t, t) for t in (lo, hi)}
        assert set(solve(example, lam, (b1, b2)).vertices) == ends
        lam, b1, b2 = cell_point_sample(row_cell(example, 2), rng)
        lo, hi = (b1 + lam) / 2, -max(lam / 4 + b2 / 2, 0)
        ends = {(b1 + lam - 2 * t, b2 / 2 + lam / 4 + t, t) for t in (lo, hi)}
        assert set(solve(example, lam, (b1, b2)).vertices) == ends


def test_check_conditions_examples(example):
    r = check_conditions(example, 1, (Q(1, 2), 2))
    assert r.cond31 and r.cond32 and r.cond33 and r.active_J == {1}
    r = check_conditions(example, 1, (4, 2))
    assert not (r.cond31 or r.cond32 or r.cond33)
    scalar = analyze([[1]])
    r = check_conditions(scalar, 1, (3,))
    assert r.cond31 and r.cond32 and r.cond33
    assert r.witness_x == (2,) and r.active_J == {0}


def test_lipschitz_constants(example):
    assert lipschitz_constant(row_cell(example, 3)) == pytest.approx(math.sqrt(5) / 4, abs=1e-12)
    assert lipschitz_constant(row_cell(example, 9)) == 0
    assert lipschitz_constant(row_cell(example, 1)) is None
    assert lipschitz_constant(row_cell(example, 2)) is None


def test_edge_bound_equals_closed_form_on_single_valued_cells(example):
    for c in example.cells:
        if c.face.in_F0:
            assert lipschitz_bound(example, c) == pytest.approx(c.lipschitz, abs=1e-12)


def test_hausdorff_examples(example):
    S = solve(example, 1, (4, 2))
    assert hausdorff_distance(S, S) == 0
    assert hausdorff_distance([[0, 0]], [[3, 4]]) == pytest.approx(5.0)
    S2 = solve(example, 1, (Q(9, 2), 2))
    h = hausdorff_distance(S, S2)
    # dense grid over the closed-form segments
    def seg(b1, t):
        return np.array([b1 - 1 - 2 * t, 0.75 + t, t])
    P1 = np.array([seg(4, t) for t in np.linspace(0, 1.5, 10_000)])
    P2 = np.array([seg(4.5, t) for t in np.linspace(0, 1.75, 10_000)])
    d = np.sqrt(((P1[:, None, :] - P2[None, ::50, :]) ** 2).sum(-1))
    grid = max(d.min(axis=1).max(), np.sqrt(((P2[::50, None, :] - P1[None, :, :]) ** 2).sum(-1)).min(axis=1).max())
    assert h == pytest.approx(grid, abs=1e-3)
    disp = max(np.linalg.norm(np.array(v, float) - np.array(w, float))
               for v, w in zip(sorted(S.vertices), sorted(S2.vertices)))
    assert h <= disp + 1e-12


def test_min_norm_point():
    P = np.array([[1.0, -1.0], [1.0, 1.0]])
    assert np.allclose(min_norm_point(P), [1.0, 0.0])
    P = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    assert np.allclose(min_norm_point(P), [1 / 3] * 3)


def test_dual_solve_examples(example):
    assert dual_solve(example, 1, (4, 2)) == (V1, V1)
    assert dual_solve(example, 10, (1, 1)) == ((1, 1), (Q(1, 10), Q(1, 10)))
    scaled, dual = dual_solve(example, 0, (3, 2))  # b = A(3, 1, 0)
    assert scaled == (0, 0) and dual is None


def test_trace_examples(example):
    segs = trace_path(example, (1, 4, 2), (1, Q(1, 2), 2))
    assert segs[0].cell_id == row_cell(example, 1).id
    assert segs[-1].cell_id == row_cell(example, 3).id
    assert segs[0].theta_in == 0 and segs[-1].theta_out == 1
    single = trace_path(example, (1, 4, 2), (1, 4, 2))
    assert [(s.theta_in, s.theta_out) for s in single] == [(0, 1)]
    ray = trace_path(example, (10, 1, 1), (20, 2, 2))
    assert [(s.theta_in, s.theta_out, s.cell_id) for s in ray] == [(0, 1, row_cell(example, 9).id)]
    with pytest.raises(NegativeLambda):
        trace_path(example, (-1, 0, 0), (1, 0, 0))


def test_lipschitz_estimate_within_single_valued_cell(example):
    cell = row_cell(example, 3)
    rng = np.random.default_rng(5)
    for _ in range(100):
        p, p2 = cell_point_sample(cell, rng), cell_point_sample(cell, rng)
        d = np.linalg.norm([float(a - b) for a, b in zip(p, p2)])
        h = hausdorff_distance(solve(example, p[0], p[1:]), solve(example, p2[0], p2[1:]))
        assert h <= math.sqrt(5) / 4 * d + 1e-9


def test_lipschitz_estimate_running_max(example):
    samples = lipschitz_samples(example, 60, 1)
    assert lipschitz_estimate(example, 60, 1) == max(s["ratio"] for s in samples)
    assert all(s["distance"] > 0 for s in samples)
    with pytest.raises(ValueError):
        lipschitz_samples(example, 0, 1)


# ---------------------------------------------------------------- properties

@given(seeds)
def test_kkt_and_shared_values(seed):
    dec, rng = random_dec(seed)
    p = random_positive_parameter(rng, dec.m)
    S = solve(dec, p[0], p[1:])
    assert S.vertices
    assert all(kkt_holds(dec.A, p[0], p[1:], x) for x in S.vertices)
    assert len({tuple(dot(r, x) for r in dec.A) for x in S.vertices}) == 1
    assert len({sum(abs(a) for a in x) for x in S.vertices}) == 1


@given(seeds)
def test_solver_consistency_on_boundaries(seed):
    dec, rng = random_dec(seed, m=2)
    cell = dec.cells[int(rng.integers(len(dec.cells)))]
    gs = cell.d_generators
    p = tuple(a + b for a, b in zip(gs[0], gs[-1]))
    sets = [solve_in_cell(dec, dec.cell(i), p[0], p[1:]) for i in locate(dec, p[0], p[1:])]
    for S in sets:
        for T in sets:
            assert all(T.contains(v) for v in S.vertices)


@settings(max_examples=20)
@given(seeds)
def test_uniqueness_equivalence(seed):
    dec, rng = random_dec(seed)
    for cell in dec.cells:
        p = cell_point_sample(cell, rng)
        S = solve(dec, p[0], p[1:])
        assert (S.kind == UNIQUE) == cell.face.in_F0
        assert (len(S.vertices) == 1) == cell.face.in_F0


@settings(max_examples=20)
@given(seeds, st.integers(1, 9), st.integers(1, 9))
def test_linearity_and_dual_affinity(seed, num, den):
    dec, rng = random_dec(seed)
    theta = Q(num, num + den)
    for cell in dec.cells:
        p0, p1 = cell_point_sample(cell, rng), cell_point_sample(cell, rng)
        pm = tuple((1 - theta) * a + theta * b for a, b in zip(p0, p1))
        r0, r1, rm = (dual_solve(dec, p[0], p[1:])[0] for p in (p0, p1, pm))
        assert rm == tuple((1 - theta) * a + theta * b for a, b in zip(r0, r1))
        if cell.face.in_F0:
            x0, x1, xm = (unique_solve(dec, cell, p[0], p[1:]) for p in (p0, p1, pm))
            assert xm == tuple((1 - theta) * a + theta * b for a, b in zip(x0, x1))


@given(seeds, st.integers(1, 12), st.integers(1, 12))
def test_positive_homogeneity(seed, num, den):
    dec, rng = random_dec(seed)
    t = Q(num, den)
    p = random_positive_parameter(rng, dec.m)
    S = solve(dec, p[0], p[1:])
    St = solve(dec, t * p[0], tuple(t * v for v in p[1:]))
    assert sorted(St.vertices) == sorted(tuple(t * a for a in x) for x in S.vertices)


@given(seeds, st.integers(1, 9), st.integers(1, 9))
def test_convex_restriction(seed, num, den):
    dec, rng = random_dec(seed)
    theta = Q(num, num + den)
    cell = dec.cells[int(rng.integers(len(dec.cells)))]
    p0, p1 = cell_point_sample(cell, rng), cell_point_sample(cell, rng)
    pm = tuple(theta * a + (1 - theta) * b for a, b in zip(p0, p1))
    Sm = solve(dec, pm[0], pm[1:])
    for x in solve(dec, p0[0], p0[1:]).vertices:
        for y in solve(dec, p1[0], p1[1:]).vertices:
            assert Sm.contains(tuple(theta * a + (1 - theta) * b for a, b in zip(x, y)))


@given(seeds)
def test_condition_chain(seed):
    dec, rng = random_dec(seed)
    p = random_positive_parameter(rng, dec.m)
    r = check_conditions(dec, p[0], p[1:])
    assert (not r.cond33) or r.cond32
    assert (not r.cond32) or r.cond31
    assert r.cond31 == (solve(dec, p[0], p[1:]).kind == UNIQUE)


@given(seeds)
def test_trace_covers_and_agrees(seed):
    dec, rng = random_dec(seed, m=2)
    p0, p1 = random_positive_parameter(rng, 2), random_positive_parameter(rng, 2)
    segs = trace_path(dec, p0, p1)
    assert segs[0].theta_in == 0
    reach = Q(0)
    for s in segs:
        assert s.theta_in <= reach
        reach = max(reach, s.theta_out)
    assert reach == 1


@settings(max_examples=20)
@given(seeds)
def test_within_cell_lipschitz_certificate(seed):
    dec, rng = random_dec(seed)
    for cell in dec.cells:
        p, p2 = cell_point_sample(cell, rng), cell_point_sample(cell, rng)
        d = np.linalg.norm([float(a - b) for a, b in zip(p, p2)])
        h = hausdorff_distance(solve_in_cell(dec, cell, p[0], p[1:]),
                               solve_in_cell(dec, cell, p2[0], p2[1:]))
        bound = cell.lipschitz if cell.face.in_F0 else lipschitz_bound(dec, cell)
        assert h <= bound * d + 1e-9


def test_solution_set_contains():
    S = SolutionSet(UNIQUE, point=(Q(1), Q(2)))
    assert S.contains((1, 2)) and not S.contains((1, 3))
    assert S.vertices == [(1, 2)]
