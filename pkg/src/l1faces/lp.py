"""Exact linear programming over the rationals.

The simplex tableau is kept in integer form (every entry multiplied by the
current basis determinant), so pivots use exact integer division in the
Bareiss style and no Fraction arithmetic happens inside the main loop.
Bland's rule is used for both the entering and the leaving variable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exact import Vec, dot, q, vec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Row = tuple  # (coeff: Vec, rhs: Fraction)


def _row(coeff, rhs, dim: int) -> Row:
    c = vec(coeff)
    if len(c) != dim:
        raise ValueError(f"constraint has {len(c)} coefficients, expected {dim}")
    return c, q(rhs)


@dataclass(frozen=True)
class LinearSystem:
    """``{z : E z = e, G z <= g}`` in ``dim`` variables."""

    dim: int
    equalities: tuple = ()
    inequalities: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "equalities",
                           tuple(_row(c, r, self.dim) for c, r in self.equalities))
        object.__setattr__(self, "inequalities",
                           tuple(_row(c, r, self.dim) for c, r in self.inequalities))

    def conjoin(self, other: "LinearSystem") -> "LinearSystem":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return LinearSystem(self.dim, self.equalities + other.equalities,
                            self.inequalities + other.inequalities)

    def contains(self, z: Sequence) -> bool:
        z = vec(z)
        return (all(dot(c, z) == r for c, r in self.equalities)
                and all(dot(c, z) <= r for c, r in self.inequalities))

    def pullback(self, M: Sequence[Sequence], offset: Sequence) -> "LinearSystem":
        """Substitute ``z = M w + offset``; returns the system in ``w``.

        ``M`` is ``dim x k``; the result lives in ``k`` variables.
        """
        M = [vec(r) for r in M]
        offset = vec(offset)
        k = len(M[0]) if M else 0
        cols = list(zip(*M)) if M else [()] * k

        def pull(rows):
            out = []
            for c, r in rows:
                out.append((tuple(dot(c, col) for col in cols), r - dot(c, offset)))
            return tuple(out)

        return LinearSystem(k, pull(self.equalities), pull(self.inequalities))


@dataclass(frozen=True)
class LpOutcome:
    status: str
    optimum: Fraction | None = None
    point: Vec | None = None


# --------------------------------------------------------------------------
# integer tableau simplex


def _pivot(T: list[list[int]], r: int, c: int, d: int) -> int:
    prow = T[r]
    p = prow[c]
    width = len(prow)
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            T[i] = [(p * row[j] - f * prow[j]) // d for j in range(width)]
        else:
            T[i] = [(p * x) // d for x in row]
    return p


def _run(T, basis, d, ncols_allowed, obj):
    """Bland-rule simplex on tableau rows ``T[:obj]`` with objective row ``obj``.

    Returns ``(status, d)``.  Minimisation: a negative reduced cost enters.
    """
    rhs = len(T[0]) - 1
    nrows = obj
    while True:
        orow = T[obj]
        c = next((j for j in range(ncols_allowed) if orow[j] < 0), None)
        if c is None:
            return OPTIMAL, d
        best = None
        for i in range(nrows):
            a = T[i][c]
            if a > 0:
                b = T[i][rhs]
                if best is None:
                    best = i
                    continue
                bb, ba = T[best][rhs], T[best][c]
                lhs, rhs_ = b * ba, bb * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                    best = i
        if best is None:
            return UNBOUNDED, d
        d = _pivot(T, best, c, d)
        basis[best] = c


def _standard_form(system: LinearSystem):
    """Split variables by sign and strip bound-only rows.

    Returns ``(columns, eq_rows, le_rows)`` where ``columns`` maps each
    standard-form column to ``(var, sign)`` and the row lists hold
    ``(coeffs over standard columns, rhs)``.
    """
    n = system.dim
    lower0 = [False] * n  # z_j >= 0
    upper0 = [False] * n  # z_j <= 0
    eqs, les = [], []
    for c, r in system.equalities:
        nz = [j for j, a in enumerate(c) if a]
        if len(nz) == 1 and r == 0:
            lower0[nz[0]] = upper0[nz[0]] = True
        else:
            eqs.append((c, r))
    for c, r in system.inequalities:
        nz = [j for j, a in enumerate(c) if a]
        if len(nz) == 1 and r == 0:
            if c[nz[0]] < 0:
                lower0[nz[0]] = True
            else:
                upper0[nz[0]] = True
        else:
            les.append((c, r))
    columns = []
    for j in range(n):
        if lower0[j] and upper0[j]:
            continue
        if lower0[j]:
            columns.append((j, 1))
        elif upper0[j]:
            columns.append((j, -1))
        else:
            columns.append((j, 1))
            columns.append((j, -1))

    def convert(rows):
        return [([s * c[j] for j, s in columns], r) for c, r in rows]

    return columns, convert(eqs), convert(les)


def lp_solve(objective: Sequence, sense: str, system: LinearSystem) -> LpOutcome:
    """Exact LP: optimise ``objective . z`` over ``system``.

    ``sense`` is ``"min"`` or ``"max"``.  An optimal point is a basic
    feasible solution of the standard-form problem.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    cvec = vec(objective)
    if len(cvec) != system.dim:
        raise ValueError("objective dimension mismatch")
    sgn = 1 if sense == "min" else -1

    columns, eqs, les = _standard_form(system)
    nstruct = len(columns)
    rows = []  # (coeffs, rhs, kind)
    for c, r in eqs:
        rows.append((c, r, "eq"))
    for c, r in les:
        rows.append((c, r, "le"))
    m = len(rows)
    nslack = sum(1 for *_, k in rows if k == "le")
    # artificial for equalities and for <= rows with negative rhs
    need_art = [k == "eq" or r < 0 for _, r, k in rows]
    nart = sum(need_art)
    width = nstruct + nslack + nart + 1
    T = []
    basis = []
    s_idx, a_idx = nstruct, nstruct + nslack
    for (c, r, kind), art in zip(rows, need_art):
        scale_ = lcm(*(x.denominator for x in c), r.denominator)
        ints = [int(x * scale_) for x in c]
        rhs = int(r * scale_)
        row = ints + [0] * (nslack + nart) + [rhs]
        if kind == "le":
            row[s_idx] = 1
            slack_col = s_idx
            s_idx += 1
        if rhs < 0:
            row = [-x for x in row]
        if art:
            row[a_idx] = 1
            basis.append(a_idx)
            a_idx += 1
        else:
            basis.append(slack_col)
        T.append(row)
    d = 1
    art_start = nstruct + nslack

    if nart:
        orow = [0] * width
        for i, row in enumerate(T):
            if basis[i] >= art_start:
                for j in range(width):
                    orow[j] -= row[j]
        for j in range(art_start, width - 1):
            orow[j] = 0
        T.append(orow)
        _, d = _run(T, basis, d, width - 1, m)
        if T[m][-1] != 0:
            return LpOutcome(INFEASIBLE)
        T.pop()
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(T):
            if basis[i] >= art_start:
                c = next((j for j in range(art_start) if T[i][j] != 0), None)
                if c is None:
                    del T[i]
                    del basis[i]
                    continue
                d = _pivot(T, i, c, d)
                basis[i] = c
                if d < 0:
                    for k in range(len(T)):
                        T[k] = [-x for x in T[k]]
                    d = -d
            i += 1
        T = [row[:art_start] + [row[-1]] for row in T]
        width = art_start + 1

    # phase 2 objective over standard columns
    cstd = [sgn * s * cvec[j] for j, s in columns] + [Fraction(0)] * nslack
    cden = lcm(*(x.denominator for x in cstd)) if cstd else 1
    cint = [int(x * cden) for x in cstd]
    orow = [d * cj for cj in cint] + [0]
    for i, row in enumerate(T):
        cb = cint[basis[i]]
        if cb:
            for j in range(width):
                orow[j] -= cb * row[j]
    T.append(orow)
    status, d = _run(T, basis, d, width - 1, len(T) - 1)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED)
    values = [Fraction(0)] * (width - 1)
    for i, b in enumerate(basis):
        values[b] = Fraction(T[i][-1], d)
    z = [Fraction(0)] * system.dim
    for col, (j, s) in enumerate(columns):
        if values[col]:
            z[j] += s * values[col]
    z = tuple(z)
    return LpOutcome(OPTIMAL, dot(cvec, z), z)


def feasible_point(system: LinearSystem) -> Vec | None:
    out = lp_solve((0,) * system.dim, "min", system)
    return out.point if out.status == OPTIMAL else None


def strict_interior_point(equalities: Iterable, strict: Iterable, dim: int,
                          inequalities: Iterable = ()) -> Vec | None:
    """A point with ``E z = e``, ``G z <= g`` and ``H z < h`` (strictly).

    A single slack ``t`` (capped at 1) is maximised over
    ``H z + t <= h``; a point is returned iff the optimum is positive, or the
    strict set is empty and the rest is feasible.
    """
    eqs = [_row(c, r, dim) for c, r in equalities]
    les = [_row(c, r, dim) for c, r in inequalities]
    strict = [_row(c, r, dim) for c, r in strict]
    if not strict:
        return feasible_point(LinearSystem(dim, eqs, les))
    one = Fraction(1)
    sys_ = LinearSystem(
        dim + 1,
        [(c + (0,), r) for c, r in eqs],
        [(c + (0,), r) for c, r in les]
        + [(c + (one,), r) for c, r in strict]
        + [((0,) * dim + (one,), one)],
    )
    out = lp_solve((0,) * dim + (1,), "max", sys_)
    if out.status != OPTIMAL or out.optimum <= 0:
        return None
    return out.point[:dim]
