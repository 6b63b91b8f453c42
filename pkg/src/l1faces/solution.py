"""Exact evaluation of the solution map S(lambda, b) and its properties."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

import numpy as np

from .decomposition import (Decomposition, DecompositionCell, _check_lambda,
                            locate, solution_system)
from .exact import (Mat, Vec, add, columns_independent, dot, identity, matmul,
                    q, scale, select_columns, shape, solve_linear, sub,
                    transpose, vec)
from .lp import OPTIMAL, LinearSystem, lp_solve, strict_interior_point
from .oracle import largest_eigenvalue
from .polytope import Face

UNIQUE = "unique"
POLYTOPE = "polytope"
ZERO = Fraction(0)
ONE = Fraction(1)


class FaceNotInF0(ValueError):
    pass


@dataclass(frozen=True)
class SolutionSet:
    kind: str
    point: Vec | None = None
    hrep: LinearSystem | None = None
    cell_id: int | None = None

    @cached_property
    def vertices(self) -> list:
        if self.kind == UNIQUE:
            return [self.point]
        return polytope_vertices(self.hrep)

    def contains(self, x) -> bool:
        x = vec(x)
        if self.kind == UNIQUE:
            return x == self.point
        return self.hrep.contains(x)

    def float_vertices(self) -> np.ndarray:
        return np.array([[float(a) for a in v] for v in self.vertices], dtype=float)


@dataclass(frozen=True)
class ConditionReport:
    cond31: bool
    cond32: bool
    cond33: bool
    witness_x: Vec
    witness_y: Vec | None
    active_J: frozenset


@dataclass(frozen=True)
class PathSegment:
    theta_in: Fraction
    theta_out: Fraction
    cell_id: int
    start: SolutionSet
    end: SolutionSet


# --------------------------------------------------------------------------
# vertex enumeration


def polytope_vertices(system: LinearSystem) -> list:
    """All vertices of a bounded polyhedron given in H-form (brute force).

    The equalities are solved first; vertices are then the feasible unique
    solutions of every choice of ``d`` tight inequalities, where ``d`` is
    the dimension of the affine hull of the equalities.
    """
    n = system.dim
    if system.equalities:
        E = tuple(c for c, _ in system.equalities)
        sol = solve_linear(E, [r for _, r in system.equalities])
        if sol is None:
            return []
        p, N = sol
    else:
        p, N = (ZERO,) * n, [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    d = len(N)
    rows = []
    for c, r in system.inequalities:
        coef = tuple(dot(c, k) for k in N)
        rhs = r - dot(c, p)
        if any(coef):
            rows.append((coef, rhs))
        elif rhs < 0:
            return []
    if d == 0:
        return [p]

    def lift(z):
        x = list(p)
        for zk, k in zip(z, N):
            if zk:
                x = [a + zk * b for a, b in zip(x, k)]
        return tuple(x)

    found = set()
    for combo in combinations(range(len(rows)), d):
        M = tuple(rows[i][0] for i in combo)
        sol = solve_linear(M, [rows[i][1] for i in combo])
        if sol is None or sol[1]:
            continue
        z = sol[0]
        if all(dot(c, z) <= r for c, r in rows):
            found.add(lift(z))
    return sorted(found)


def solution_vertices(S: SolutionSet) -> list:
    return S.vertices


# --------------------------------------------------------------------------
# evaluation


def unique_solve(dec: Decomposition, cell: DecompositionCell, lam, b) -> Vec:
    """The single solution on a cell whose active columns are independent."""
    if not cell.face.in_F0:
        raise FaceNotInF0(f"cell {cell.id} {cell.partition} is not single-valued")
    lam = _check_lambda(lam)
    eqs, _ = solution_system(dec.A, cell.partition, lam, b)
    sol = solve_linear(tuple(c for c, _ in eqs), [r for _, r in eqs])
    if sol is None:
        raise ValueError(f"({lam}, {tuple(b)}) is not in D_F of cell {cell.id}")
    x, kernel = sol
    if kernel:
        raise AssertionError("normal equations of an F0 cell are singular")
    return x


def solve_in_cell(dec: Decomposition, cell: DecompositionCell, lam, b) -> SolutionSet:
    """S(lambda, b) through one cell known to contain (lambda, b)."""
    lam = _check_lambda(lam)
    if cell.face.in_F0:
        return SolutionSet(UNIQUE, point=unique_solve(dec, cell, lam, b), cell_id=cell.id)
    eqs, ineqs = solution_system(dec.A, cell.partition, lam, b)
    return SolutionSet(POLYTOPE, hrep=LinearSystem(dec.n, eqs, ineqs), cell_id=cell.id)


def solve(dec: Decomposition, lam, b) -> SolutionSet:
    """Exact solution set; prefers a single-valued cell when several contain the point."""
    lam = _check_lambda(lam)
    cells = [dec.cell(i) for i in locate(dec, lam, b)]
    single = [c for c in cells if c.face.in_F0]
    return solve_in_cell(dec, (single or cells)[0], lam, b)


def residual(A: Mat, b, x) -> Vec:
    return tuple(bi - dot(row, x) for bi, row in zip(vec(b), A))


def dual_solve(dec: Decomposition, lam, b):
    """``(b - A x, (b - A x)/lambda)``; the second part is None at lambda = 0."""
    lam = _check_lambda(lam)
    S = solve(dec, lam, b)
    r = residual(dec.A, b, S.vertices[0])
    return r, (tuple(ri / lam for ri in r) if lam > 0 else None)


def kkt_holds(A: Mat, lam, b, x) -> bool:
    """Exact optimality: A^T(b - Ax) in lam * subdifferential of ||.||_1 at x,
    and Ax = b when lam = 0."""
    lam = q(lam)
    r = residual(A, b, x)
    if lam == 0 and any(r):
        return False
    for col, xi in zip(transpose(A), x):
        g = dot(col, r)
        if xi > 0 and g != lam:
            return False
        if xi < 0 and g != -lam:
            return False
        if xi == 0 and abs(g) > lam:
            return False
    if lam == 0:
        # 0 in subdifferential + rge A^T: needs a dual certificate y
        sup = [i for i, xi in enumerate(x) if xi != 0]
        At = transpose(A)
        eqs = [(At[i], ONE if x[i] > 0 else -ONE) for i in sup]
        ineqs = []
        for i in range(len(x)):
            if i not in sup:
                ineqs += [(At[i], ONE), (scale(-1, At[i]), ONE)]
        out = lp_solve((0,) * len(A), "min", LinearSystem(len(A), eqs, ineqs))
        return out.status == OPTIMAL
    return True


# --------------------------------------------------------------------------
# uniqueness / linearity conditions


def check_conditions(dec: Decomposition, lam, b) -> ConditionReport:
    lam = _check_lambda(lam)
    A = dec.A
    At = transpose(A)
    S = solve(dec, lam, b)
    verts = S.vertices
    witness = verts[0]
    r = residual(A, b, witness)
    J = frozenset(i for i, col in enumerate(At) if abs(dot(col, r)) == lam)
    cond32 = columns_independent(A, J)

    cond31, cond33, witness_y = False, False, None
    for x in verts:
        supp = [i for i, xi in enumerate(x) if xi != 0]
        if not columns_independent(A, supp):
            continue
        eqs = [(At[i], ONE if x[i] > 0 else -ONE) for i in supp]
        strict = []
        for i in range(dec.n):
            if x[i] == 0:
                strict += [(At[i], ONE), (scale(-1, At[i]), ONE)]
        y = strict_interior_point(eqs, strict, dec.m)
        if y is not None and not cond31:
            cond31, witness, witness_y = True, x, y
        rx = residual(A, b, x)
        if all(abs(dot(At[i], rx)) < lam for i in range(dec.n) if x[i] == 0):
            cond33 = True
    return ConditionReport(cond31, cond32, cond33, witness, witness_y, J)


# --------------------------------------------------------------------------
# Lipschitz constants


def _pinv_exact(M: Mat) -> Mat:
    """(M^T M)^{-1} M^T for a matrix with independent columns."""
    Mt = transpose(M)
    G = matmul(Mt, M)
    k = len(G)
    cols = []
    for j in range(k):
        e = [ONE if i == j else ZERO for i in range(k)]
        cols.append(solve_linear(G, e)[0])
    Ginv = transpose(tuple(cols))
    return matmul(Ginv, Mt)


def spectral_norm(M: Mat) -> float:
    """Largest singular value via power iteration on the exact Gram matrix."""
    if not M or not M[0]:
        return 0.0
    G = matmul(M, transpose(M))
    Gf = np.array([[float(a) for a in row] for row in G])
    return float(np.sqrt(max(largest_eigenvalue(Gf), 0.0)))


def lipschitz_matrix(A: Mat, face: Face) -> Mat:
    """Linear map (lambda, b) -> x restricted to the active coordinates."""
    act = face.partition.active
    At_ = select_columns(A, act)
    m = shape(A)[0]
    y = face.ri_point
    rhs = tuple((-y[i],) + tuple(ONE if i == j else ZERO for j in range(m)) for i in range(m))
    return matmul(_pinv_exact(At_), rhs)


def lipschitz_constant_for_face(A: Mat, face: Face) -> float | None:
    if face.is_whole:
        return 0.0
    if not face.in_F0:
        return None
    return spectral_norm(lipschitz_matrix(A, face))


def lipschitz_constant(cell: DecompositionCell) -> float | None:
    """0 on Y0's cell, the closed-form constant on other F0 cells, else None."""
    return cell.lipschitz


def lipschitz_bound(dec: Decomposition, cell: DecompositionCell) -> float:
    """Upper bound on the Lipschitz modulus of S restricted to D_F.

    Along a segment inside D_F the graph of S is a polytope whose edges
    have x-velocity ``pinv(A_B) Q d`` for an independent set B of active
    columns and a direction d with ``Q d`` in range(A_B); here
    ``Q = Proj_range(A_act) [-y, I]`` maps (lambda, b) to the shared value
    Ax.  The bound is the largest such velocity per unit ``||d||``.  It
    reproduces the closed-form constant on single-valued cells.
    """
    face = cell.face
    act = face.partition.active
    if not act:
        return 0.0
    A = dec.A
    m = dec.m
    Aa = select_columns(A, act)
    # projector onto range(A_act) from an independent column subset
    basis_cols = []
    for j in range(len(act)):
        if columns_independent(Aa, basis_cols + [j]):
            basis_cols.append(j)
    Ab = select_columns(Aa, basis_cols)
    Pi = matmul(Ab, _pinv_exact(Ab))
    y = face.ri_point
    base = tuple((-y[i],) + tuple(ONE if i == j else ZERO for j in range(m)) for i in range(m))
    Q = matmul(Pi, base)
    best = 0.0
    for size in range(1, len(act) + 1):
        for B in combinations(range(len(act)), size):
            if not columns_independent(Aa, B):
                continue
            AB = select_columns(Aa, B)
            PB = _pinv_exact(AB)
            PiB = matmul(AB, PB)
            R = tuple(sub(rq, rp) for rq, rp in zip(Q, matmul(PiB, Q)))
            kernel = solve_linear(R, (ZERO,) * m)[1]
            if not kernel:
                continue
            V = matmul(matmul(PB, Q), transpose(tuple(kernel)))
            Vf = np.array([[float(a) for a in row] for row in V])
            K = np.array([[float(a) for a in k] for k in kernel]).T
            Qk, Rk = np.linalg.qr(K)
            # V = W K with K = Qk Rk  =>  W Qk = V Rk^{-1}
            W = np.linalg.solve(Rk.T, Vf.T).T
            best = max(best, float(np.linalg.norm(W, 2)))
    return best


# --------------------------------------------------------------------------
# Hausdorff distance between polytopes given by vertices


def min_norm_point(P: np.ndarray, tol: float = 1e-12, max_iter: int = 10_000) -> np.ndarray:
    """Wolfe's algorithm: the point of conv(rows of P) nearest the origin."""
    P = np.asarray(P, dtype=float)
    k = P.shape[0]
    if k == 1:
        return P[0].copy()
    scale_ = max(float(np.max(np.sum(P * P, axis=1))), 1e-300)
    S = [int(np.argmin(np.sum(P * P, axis=1)))]
    w = np.array([1.0])
    x = P[S[0]].copy()
    for _ in range(max_iter):
        j = int(np.argmin(P @ x))
        if x @ x - P[j] @ x <= tol * scale_ or j in S:
            break
        S.append(j)
        w = np.append(w, 0.0)
        while True:
            Q = P[S]
            ks = len(S)
            M = np.zeros((ks + 1, ks + 1))
            M[:ks, :ks] = Q @ Q.T
            M[:ks, ks] = 1.0
            M[ks, :ks] = 1.0
            rhs = np.zeros(ks + 1)
            rhs[ks] = 1.0
            v = np.linalg.lstsq(M, rhs, rcond=None)[0][:ks]
            if np.all(v > 1e-14):
                w = v
                break
            mask = (v <= 1e-14) & (w - v > 0)
            theta = min(1.0, float(np.min(w[mask] / (w[mask] - v[mask])))) if mask.any() else 1.0
            w = theta * v + (1 - theta) * w
            keep = w > 1e-14
            if keep.sum() == 0:
                keep[int(np.argmax(w))] = True
            S = [s for s, kp in zip(S, keep) if kp]
            w = w[keep]
            w = w / w.sum()
        x = w @ P[S]
    return x


def point_to_hull_distance(p: np.ndarray, V: np.ndarray) -> float:
    V = np.atleast_2d(np.asarray(V, dtype=float))
    return float(np.linalg.norm(min_norm_point(V - np.asarray(p, dtype=float))))


def _as_vertex_array(S) -> np.ndarray:
    if isinstance(S, SolutionSet):
        return S.float_vertices()
    return np.atleast_2d(np.asarray(S, dtype=float))


def hausdorff_distance(S1, S2) -> float:
    """Hausdorff distance of two polytopes (SolutionSets or vertex arrays)."""
    V1, V2 = _as_vertex_array(S1), _as_vertex_array(S2)
    d12 = max(point_to_hull_distance(v, V2) for v in V1)
    d21 = max(point_to_hull_distance(v, V1) for v in V2)
    return max(d12, d21)


def lipschitz_samples(dec: Decomposition, sample_count: int, seed: int,
                      within_fraction: float = 0.5) -> list:
    """Random parameter pairs with their Hausdorff ratio.

    A share ``within_fraction`` of pairs is drawn inside a single cell (both
    points strictly positive combinations of its generators); the rest are
    drawn independently over the whole parameter space.
    """
    from .sampling import cell_point_sample, random_parameter

    if sample_count <= 0:
        raise ValueError("sample_count must be positive")
    rng = np.random.default_rng(seed)
    out = []
    for k in range(sample_count):
        if rng.random() < within_fraction:
            cell = dec.cells[int(rng.integers(len(dec.cells)))]
            p, p2 = cell_point_sample(cell, rng), cell_point_sample(cell, rng)
            kind = f"within:{cell.id}"
        else:
            p, p2 = random_parameter(rng, dec.m), random_parameter(rng, dec.m)
            kind = "mixed"
        dist = float(np.linalg.norm([float(a - c) for a, c in zip(p, p2)]))
        if dist == 0.0:
            continue
        h = hausdorff_distance(solve(dec, p[0], p[1:]), solve(dec, p2[0], p2[1:]))
        out.append({"p": p, "p2": p2, "kind": kind, "hausdorff": h,
                    "distance": dist, "ratio": h / dist})
    return out


def cell_lipschitz_estimate(dec: Decomposition, cell: DecompositionCell,
                            sample_count: int, seed: int) -> float:
    """Largest sampled Hausdorff ratio over pairs drawn inside one D_F."""
    from .sampling import cell_point_sample

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(sample_count):
        p, p2 = cell_point_sample(cell, rng), cell_point_sample(cell, rng)
        dist = float(np.linalg.norm([float(a - c) for a, c in zip(p, p2)]))
        if dist == 0.0:
            continue
        h = hausdorff_distance(solve_in_cell(dec, cell, p[0], p[1:]),
                               solve_in_cell(dec, cell, p2[0], p2[1:]))
        best = max(best, h / dist)
    return best


def lipschitz_estimate(dec: Decomposition, sample_count: int, seed: int, **kw) -> float:
    """Largest sampled ratio Hausdorff(S(p), S(p')) / ||p - p'||."""
    samples = lipschitz_samples(dec, sample_count, seed, **kw)
    return max((s["ratio"] for s in samples), default=0.0)


# --------------------------------------------------------------------------
# path tracing


def trace_path(dec: Decomposition, p0: Sequence, p1: Sequence) -> list:
    """Cells met by the segment p(theta) = p0 + theta (p1 - p0), theta in [0, 1].

    ``p0``/``p1`` are ``(lambda, b_1, ..., b_m)``.  Each segment is the
    closed theta-interval on which the segment lies in that cell's D_F.
    """
    p0, p1 = vec(p0), vec(p1)
    _check_lambda(p0[0])
    _check_lambda(p1[0])
    m, n = dec.m, dec.n
    direction = sub(p1, p0)
    # z = (lambda, b, x) = M (theta, x) + offset
    M = []
    for k in range(1 + m):
        M.append((direction[k],) + (ZERO,) * n)
    for i in range(n):
        M.append((ZERO,) + tuple(ONE if j == i else ZERO for j in range(n)))
    offset = p0 + (ZERO,) * n
    bounds = LinearSystem(1 + n, (), [((-ONE,) + (ZERO,) * n, ZERO),
                                      ((ONE,) + (ZERO,) * n, ONE)])
    segments = []
    for cell in dec.cells:
        sys_ = cell.s_cone.pullback(M, offset).conjoin(bounds)
        obj = (ONE,) + (ZERO,) * n
        lo = lp_solve(obj, "min", sys_)
        if lo.status != OPTIMAL:
            continue
        hi = lp_solve(obj, "max", sys_)
        t0, t1 = lo.optimum, hi.optimum
        pa = add(p0, scale(t0, direction))
        pb = add(p0, scale(t1, direction))
        segments.append(PathSegment(t0, t1, cell.id,
                                    solve_in_cell(dec, cell, pa[0], pa[1:]),
                                    solve_in_cell(dec, cell, pb[0], pb[1:])))
    segments.sort(key=lambda s: (s.theta_in, s.theta_out, s.cell_id))
    return segments
