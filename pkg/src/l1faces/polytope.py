"""The dual feasible polytope ``Y0 = {y : ||A^T y||_inf <= 1}`` and its faces.

Column indices are 0-based internally; text and JSON output is 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .exact import (Mat, Vec, columns_independent, dot, mat, rank, scale,
                    select_columns, shape, solve_linear, transpose, vec)
from .lp import OPTIMAL, LinearSystem, lp_solve, strict_interior_point

ONE = Fraction(1)


class RankDeficient(ValueError):
    """A does not have full row rank, so Y0 is not a polytope."""


class PointOutsidePolytope(ValueError):
    pass


@dataclass(frozen=True)
class SignPartition:
    plus: frozenset
    zero: frozenset
    minus: frozenset

    def __post_init__(self):
        for name in ("plus", "zero", "minus"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.plus & self.zero or self.plus & self.minus or self.zero & self.minus:
            raise ValueError("sign partition blocks overlap")
        n = self.n
        if self.plus | self.zero | self.minus != frozenset(range(n)):
            raise ValueError("sign partition does not cover 0..n-1")

    @property
    def n(self) -> int:
        return len(self.plus) + len(self.zero) + len(self.minus)

    @classmethod
    def from_signs(cls, signs: Sequence[int]) -> "SignPartition":
        return cls({i for i, s in enumerate(signs) if s > 0},
                   {i for i, s in enumerate(signs) if s == 0},
                   {i for i, s in enumerate(signs) if s < 0})

    @property
    def signs(self) -> tuple:
        return tuple(1 if i in self.plus else -1 if i in self.minus else 0
                     for i in range(self.n))

    @property
    def active(self) -> list:
        """Indices in plus or minus, sorted."""
        return sorted(self.plus | self.minus)

    def sort_key(self):
        code = {1: 0, -1: 1, 0: 2}
        return (-len(self.active), tuple(code[s] for s in self.signs))

    def one_based(self) -> tuple:
        return tuple(sorted(i + 1 for i in blk) for blk in (self.plus, self.zero, self.minus))

    def __str__(self):
        def fmt(blk):
            return "{" + ",".join(str(i + 1) for i in sorted(blk)) + "}" if blk else "∅"
        return f"({fmt(self.plus)},{fmt(self.zero)},{fmt(self.minus)})"


@dataclass(frozen=True)
class Face:
    id: int
    partition: SignPartition
    vertices: tuple
    dim: int
    ri_point: Vec
    in_F0: bool

    @property
    def is_whole(self) -> bool:
        """True for Y0 itself (no active constraints)."""
        return not self.partition.active


@dataclass(frozen=True)
class DualPolytope:
    A: Mat
    faces: tuple
    vertex_list: tuple

    @property
    def m(self) -> int:
        return shape(self.A)[0]

    @property
    def n(self) -> int:
        return shape(self.A)[1]

    def face(self, face_id: int) -> Face:
        return self.faces[face_id - 1]

    def face_by_partition(self, part: SignPartition) -> Face | None:
        return next((f for f in self.faces if f.partition == part), None)


def face_system(A: Mat, part: SignPartition):
    """Equalities and strict inequalities describing ri F in ``y``."""
    At = transpose(A)
    eqs = [(At[i], ONE) for i in sorted(part.plus)]
    eqs += [(At[i], -ONE) for i in sorted(part.minus)]
    strict = []
    for i in sorted(part.zero):
        strict.append((At[i], ONE))
        strict.append((scale(-1, At[i]), ONE))
    return eqs, strict


def y0_system(A: Mat) -> LinearSystem:
    At = transpose(A)
    m = shape(A)[0]
    ineqs = [(r, ONE) for r in At] + [(scale(-1, r), ONE) for r in At]
    return LinearSystem(m, (), ineqs)


def partition_of_point(A: Mat, y: Sequence) -> SignPartition:
    y = vec(y)
    vals = [dot(col, y) for col in transpose(A)]
    if any(abs(v) > 1 for v in vals):
        raise PointOutsidePolytope(f"||A^T y||_inf = {max(abs(v) for v in vals)} > 1")
    return SignPartition.from_signs([1 if v == 1 else -1 if v == -1 else 0 for v in vals])


def _check_bounded(A: Mat) -> None:
    sys_ = y0_system(A)
    m = shape(A)[0]
    for k in range(m):
        for s in (1, -1):
            obj = tuple(Fraction(s if j == k else 0) for j in range(m))
            if lp_solve(obj, "max", sys_).status != OPTIMAL:
                raise RankDeficient("Y0 is unbounded; A must have full row rank")


def enumerate_vertices(A: Mat) -> list:
    """Extreme points of Y0 from sign-assigned m-subsets of columns."""
    m, n = shape(A)
    At = transpose(A)
    found = set()
    for S in combinations(range(n), m):
        sub = tuple(At[i] for i in S)
        if rank(sub) < m:
            continue
        for signs in product((1, -1), repeat=m):
            sol = solve_linear(sub, signs)
            y = sol[0]
            if all(abs(dot(col, y)) <= 1 for col in At):
                found.add(y)
    return sorted(found)


def _active(At, y) -> frozenset:
    out = set()
    for i, col in enumerate(At):
        v = dot(col, y)
        if v == 1:
            out.add((i, 1))
        elif v == -1:
            out.add((i, -1))
    return frozenset(out)


def _make_face(A: Mat, part: SignPartition, vertices, ri_point) -> Face:
    act = part.active
    dim = shape(A)[0] - (rank(select_columns(A, act)) if act else 0)
    return Face(0, part, tuple(vertices), dim, ri_point, columns_independent(A, act))


def enumerate_faces(A: Mat, vertices: Iterable | None = None) -> list:
    """All nonempty faces of Y0 in canonical order (ids from 1).

    Candidate faces are the intersection-closure of the vertices' signed
    active sets; each is confirmed by a strict-feasibility LP that also
    provides a relative-interior point.
    """
    At = transpose(A)
    vertices = list(vertices) if vertices is not None else enumerate_vertices(A)
    acts = [_active(At, v) for v in vertices]
    family = set(acts)
    frontier = list(family)
    while frontier:
        new = []
        for K in frontier:
            for a in acts:
                J = K & a
                if J not in family:
                    family.add(J)
                    new.append(J)
        frontier = new
    n = shape(A)[1]
    faces = []
    for K in family:
        signs = [0] * n
        for i, s in K:
            signs[i] = s
        part = SignPartition.from_signs(signs)
        eqs, strict = face_system(A, part)
        y = strict_interior_point(eqs, strict, shape(A)[0])
        if y is None:
            raise AssertionError(f"candidate face {part} has empty relative interior")
        if partition_of_point(A, y) != part:
            raise AssertionError(f"relative-interior point of {part} has another partition")
        verts = [v for v, a in zip(vertices, acts) if K <= a]
        faces.append(_make_face(A, part, verts, y))
    faces.sort(key=lambda f: f.partition.sort_key())
    return [Face(k + 1, f.partition, f.vertices, f.dim, f.ri_point, f.in_F0)
            for k, f in enumerate(faces)]


def brute_force_partitions(A: Mat) -> set:
    """Test oracle: every sign pattern in {+,0,-}^n whose ri-system is feasible."""
    m, n = shape(A)
    out = set()
    for signs in product((1, 0, -1), repeat=n):
        part = SignPartition.from_signs(signs)
        eqs, strict = face_system(A, part)
        if strict_interior_point(eqs, strict, m) is not None:
            out.add(part)
    return out


def build_dual_polytope(A) -> DualPolytope:
    A = mat(A)
    m, n = shape(A)
    if m == 0 or n == 0:
        raise RankDeficient("A must be a nonempty matrix")
    if rank(A) < m:
        raise RankDeficient(f"rank(A) = {rank(A)} < m = {m}: A must have full row rank")
    _check_bounded(A)
    vertices = enumerate_vertices(A)
    faces = enumerate_faces(A, vertices)
    return DualPolytope(A, tuple(faces), tuple(vertices))
