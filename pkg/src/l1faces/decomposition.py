"""Cone decomposition of the graph of the solution map.

Each face F of Y0 gives a polyhedral cone S_F in (lambda, b, x)-space and
its projection D_F onto the parameters (lambda, b).  All membership queries
are exact LPs over S_F; no H-representation of D_F is ever formed.
Variables of S_F are ordered ``(lambda, b_1..b_m, x_1..x_n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import Mat, Vec, dot, matmul, q, scale, shape, transpose, vec
from .lp import LinearSystem, feasible_point, strict_interior_point
from .polytope import DualPolytope, Face, partition_of_point

ONE = Fraction(1)
ZERO = Fraction(0)


class NegativeLambda(ValueError):
    pass


def _check_lambda(lam) -> Fraction:
    lam = q(lam)
    if lam < 0:
        raise NegativeLambda(f"lambda must be nonnegative, got {lam}")
    return lam


@dataclass(frozen=True)
class DecompositionCell:
    face: Face
    s_cone: LinearSystem
    d_generators: tuple
    lipschitz: float | None = None

    @property
    def id(self) -> int:
        return self.face.id

    @property
    def partition(self):
        return self.face.partition


@dataclass(frozen=True)
class Decomposition:
    polytope: DualPolytope
    cells: tuple

    @property
    def A(self) -> Mat:
        return self.polytope.A

    @property
    def m(self) -> int:
        return self.polytope.m

    @property
    def n(self) -> int:
        return self.polytope.n

    def cell(self, cell_id: int) -> DecompositionCell:
        return self.cells[cell_id - 1]

    def cell_by_partition(self, part) -> DecompositionCell | None:
        return next((c for c in self.cells if c.partition == part), None)


def cone_hrep(A: Mat, part) -> LinearSystem:
    """H-representation of S_F; every inequality is strict on ri S_F."""
    m, n = shape(A)
    At = transpose(A)
    G = matmul(At, A)
    dim = 1 + m + n

    def unit(k, s=ONE):
        return tuple(s if j == k else ZERO for j in range(dim))

    def residual_row(i, lam_coef):
        # lam_coef*lambda + A_i^T b - (A^T A)_i x
        return (lam_coef,) + At[i] + tuple(-g for g in G[i])

    eqs, ineqs = [], [(unit(0, -ONE), ZERO)]
    for i in range(n):
        xi = 1 + m + i
        if i in part.plus:
            eqs.append((residual_row(i, -ONE), ZERO))
            ineqs.append((unit(xi, -ONE), ZERO))
        elif i in part.minus:
            eqs.append((residual_row(i, ONE), ZERO))
            ineqs.append((unit(xi, ONE), ZERO))
        else:
            eqs.append((unit(xi), ZERO))
            ineqs.append((residual_row(i, -ONE), ZERO))
            ineqs.append((scale(-1, residual_row(i, ONE)), ZERO))
    return LinearSystem(dim, eqs, ineqs)


@lru_cache(maxsize=64)
def _gram(A: Mat) -> tuple:
    At = transpose(A)
    return At, matmul(At, A)


def solution_system(A: Mat, part, lam, b) -> tuple:
    """The x-system of S_F at fixed (lambda, b).

    Returns ``(equalities, inequalities)`` in x; on D_F its solution set is
    S(lambda, b).
    """
    lam = q(lam)
    b = vec(b)
    m, n = shape(A)
    At, G = _gram(A)
    Atb = [dot(col, b) for col in At]
    e_ = [tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)]
    eqs, ineqs = [], []
    for i in range(n):
        if i in part.plus:
            eqs.append((G[i], Atb[i] - lam))
            ineqs.append((scale(-1, e_[i]), ZERO))
        elif i in part.minus:
            eqs.append((G[i], Atb[i] + lam))
            ineqs.append((e_[i], ZERO))
        else:
            eqs.append((e_[i], ZERO))
            # -lam <= A_i^T b - G_i x <= lam
            ineqs.append((scale(-1, G[i]), lam - Atb[i]))
            ineqs.append((G[i], lam + Atb[i]))
    return eqs, ineqs


def _cone_contains(gens: Sequence[Vec], target: Vec) -> bool:
    k = len(gens)
    if k == 0:
        return all(t == 0 for t in target)
    dim = len(target)
    eqs = [(tuple(g[r] for g in gens), target[r]) for r in range(dim)]
    ineqs = [(tuple(-ONE if j == i else ZERO for j in range(k)), ZERO) for i in range(k)]
    return feasible_point(LinearSystem(k, eqs, ineqs)) is not None


def d_generators(A: Mat, face: Face) -> tuple:
    """Generators of D_F with redundant ones removed (one LP each)."""
    At = transpose(A)
    gens = [(ZERO,) + At[i] for i in sorted(face.partition.plus)]
    gens += [(ZERO,) + scale(-1, At[j]) for j in sorted(face.partition.minus)]
    gens += [(ONE,) + v for v in face.vertices]
    kept = list(gens)
    for g in gens:
        rest = list(kept)
        rest.remove(g)
        if _cone_contains(rest, g):
            kept = rest
    return tuple(kept)


def build_decomposition(P: DualPolytope) -> Decomposition:
    from .solution import lipschitz_constant_for_face

    cells = []
    for face in P.faces:
        cells.append(DecompositionCell(
            face=face,
            s_cone=cone_hrep(P.A, face.partition),
            d_generators=d_generators(P.A, face),
            lipschitz=lipschitz_constant_for_face(P.A, face),
        ))
    return Decomposition(P, tuple(cells))


def cell_point(dec: Decomposition, cell: DecompositionCell, lam, b) -> Vec | None:
    """Some x with (lambda, b, x) in S_F, or None."""
    lam = _check_lambda(lam)
    eqs, ineqs = solution_system(dec.A, cell.partition, lam, b)
    return feasible_point(LinearSystem(dec.n, eqs, ineqs))


def member_DF(dec: Decomposition, cell: DecompositionCell, lam, b) -> bool:
    return cell_point(dec, cell, lam, b) is not None


def in_interior_DF(dec: Decomposition, cell: DecompositionCell, lam, b) -> bool:
    """(lambda, b) in int D_F, decided through the strict system of ri S_F."""
    lam = _check_lambda(lam)
    eqs, ineqs = solution_system(dec.A, cell.partition, lam, b)
    strict = ineqs + [((ZERO,) * dec.n, lam)]  # 0 < lambda
    return strict_interior_point(eqs, strict, dec.n) is not None


def _guess_partition(dec: Decomposition, lam: Fraction, b: Vec):
    """Float estimate of the dual point's face, used only to order exact LPs."""
    import numpy as np

    from .oracle import prox_grad_lasso

    A = np.array([[float(a) for a in row] for row in dec.A])
    bf = np.array([float(x) for x in b])
    res = prox_grad_lasso(A, bf, float(lam), tol=1e-8, max_iter=500)
    y = (bf - A @ res.x) / float(lam)
    g = A.T @ y
    tol = 1e-6
    return tuple(1 if v > 1 - tol else -1 if v < -1 + tol else 0 for v in g)


def locate(dec: Decomposition, lam, b, exhaustive: bool = False) -> list:
    """Ids of every cell whose D_F contains (lambda, b).

    The default path finds one containing cell, recovers the exact dual
    point (b - A x)/lambda, and tests only the faces containing it; every
    other D_F is excluded by that exact necessary condition.
    ``exhaustive=True`` runs one LP per cell instead.
    """
    lam = _check_lambda(lam)
    b = vec(b)
    if len(b) != dec.m:
        raise ValueError(f"b has length {len(b)}, expected {dec.m}")
    if exhaustive or lam == 0:
        found = [c.id for c in dec.cells if member_DF(dec, c, lam, b)]
    else:
        found = _locate_fast(dec, lam, b)
    if not found:
        raise AssertionError(f"no cell contains ({lam}, {b}); decomposition is not a cover")
    return found


def _conformal_exists(A: Mat, part, r: Vec) -> bool:
    """Is ``r = A x`` for some x supported on the active set with the face's signs?"""
    act = part.active
    if not act:
        return all(v == 0 for v in r)
    At, _ = _gram(A)
    cols = [At[i] if i in part.plus else scale(-1, At[i]) for i in act]
    k = len(cols)
    eqs = [(tuple(c[row] for c in cols), r[row]) for row in range(len(r))]
    ineqs = [(tuple(-ONE if j == i else ZERO for j in range(k)), ZERO) for i in range(k)]
    return feasible_point(LinearSystem(k, eqs, ineqs)) is not None


def _locate_fast(dec: Decomposition, lam: Fraction, b: Vec) -> list:
    from .polytope import SignPartition

    first, x = None, None
    guess = dec.cell_by_partition(SignPartition.from_signs(_guess_partition(dec, lam, b)))
    order = ([guess] if guess is not None else []) + [c for c in dec.cells if c is not guess]
    for c in order:
        x = cell_point(dec, c, lam, b)
        if x is not None:
            first = c
            break
    if first is None:
        return []
    # Ax is the same for every solution, so y* = (b - Ax)/lambda is shared.
    # A cell contains (lambda, b) iff y* lies in its face and b - lambda y*
    # is a sign-conformal combination of the face's active columns.
    Ax = tuple(dot(row, x) for row in dec.A)
    y = tuple((bi - v) / lam for bi, v in zip(b, Ax))
    G = partition_of_point(dec.A, y)
    found = []
    for c in dec.cells:
        p = c.partition
        if not (p.plus <= G.plus and p.minus <= G.minus):
            continue
        if c is first or _conformal_exists(dec.A, p, Ax):
            found.append(c.id)
    return found


def ri_intersects(dec: Decomposition, c1: DecompositionCell, c2: DecompositionCell) -> bool:
    """Does ri S_F1 meet S_F2?  Distinct cells of a valid decomposition never do."""
    s1, s2 = c1.s_cone, c2.s_cone
    point = strict_interior_point(s1.equalities + s2.equalities, s1.inequalities,
                                  s1.dim, s2.inequalities)
    return point is not None
