"""JSON/CSV encodings. Rationals are always written as strings like "3/4";
column indices are written 1-based."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .decomposition import Decomposition, DecompositionCell, cone_hrep
from .exact import mat, rank, shape
from .lp import LinearSystem
from .polytope import DualPolytope, Face, RankDeficient, SignPartition
from .solution import UNIQUE, SolutionSet


class InputError(ValueError):
    """Malformed problem, decomposition or query input."""


def parse_q(s) -> Fraction:
    if isinstance(s, float):
        raise InputError(f"rational entries must be strings or integers, got float {s!r}")
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse rational {s!r}") from exc


def parse_qlist(text: str) -> tuple:
    return tuple(parse_q(t) for t in text.split(",") if t.strip() != "")


def qs(x) -> str:
    return str(Fraction(x))


def qvec(v) -> list:
    return [qs(a) for a in v]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# problem files


def parse_matrix(rows) -> tuple:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("A must be a nonempty list of rows")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise InputError("A must be rectangular with at least one column")
    return mat([[parse_q(a) for a in r] for r in rows])


def problem_from_json(d: dict) -> tuple:
    if not isinstance(d, dict) or "A" not in d:
        raise InputError("problem file needs an 'A' entry")
    return parse_matrix(d["A"]), d.get("label")


# --------------------------------------------------------------------------
# polytope / decomposition


def _part_json(part: SignPartition) -> dict:
    plus, zero, minus = part.one_based()
    return {"plus": plus, "zero": zero, "minus": minus}


def polytope_to_json(P: DualPolytope) -> dict:
    return {
        "A": [qvec(r) for r in P.A],
        "vertices": [qvec(v) for v in P.vertex_list],
        "faces": [dict(id=f.id, **_part_json(f.partition),
                       vertices=[qvec(v) for v in f.vertices], dim=f.dim,
                       in_F0=f.in_F0, ri_point=qvec(f.ri_point))
                  for f in P.faces],
    }


def decomposition_to_json(dec: Decomposition, label=None) -> dict:
    out = polytope_to_json(dec.polytope)
    if label is not None:
        out = {"label": label, **out}
    for fj, cell in zip(out["faces"], dec.cells):
        fj["generators"] = [qvec(g) for g in cell.d_generators]
        fj["lipschitz"] = cell.lipschitz
    return out


def decomposition_from_json(d: dict) -> Decomposition:
    """Rebuild a Decomposition from its JSON form without re-enumeration.

    The cone H-representations are re-derived from A and each partition;
    everything else is taken from the file as is.
    """
    try:
        A = parse_matrix(d["A"])
        m, n = shape(A)
        if rank(A) < m:
            raise RankDeficient(f"rank(A) < m = {m}: A must have full row rank")
        vertices = tuple(tuple(parse_q(a) for a in v) for v in d["vertices"])
        faces, cells = [], []
        for fj in d["faces"]:
            signs = [0] * n
            for i in fj["plus"]:
                signs[i - 1] = 1
            for i in fj["minus"]:
                signs[i - 1] = -1
            part = SignPartition.from_signs(signs)
            face = Face(int(fj["id"]), part,
                        tuple(tuple(parse_q(a) for a in v) for v in fj["vertices"]),
                        int(fj["dim"]), tuple(parse_q(a) for a in fj["ri_point"]),
                        bool(fj["in_F0"]))
            faces.append(face)
            gens = tuple(tuple(parse_q(a) for a in g) for g in fj["generators"])
            cells.append(DecompositionCell(face, cone_hrep(A, part), gens, fj.get("lipschitz")))
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed decomposition file: {exc!r}") from exc
    return Decomposition(DualPolytope(A, tuple(faces), vertices), tuple(cells))


def load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


# --------------------------------------------------------------------------
# solutions, traces


def _system_json(system: LinearSystem) -> dict:
    return {
        "equalities": [{"coeff": qvec(c), "rhs": qs(r)} for c, r in system.equalities],
        "inequalities": [{"coeff": qvec(c), "rhs": qs(r)} for c, r in system.inequalities],
    }


def solution_to_json(S: SolutionSet) -> dict:
    if S.kind == UNIQUE:
        return {"kind": "unique", "cell": S.cell_id, "x": qvec(S.point)}
    return {"kind": "polytope", "cell": S.cell_id,
            "vertices": [qvec(v) for v in S.vertices], **_system_json(S.hrep)}


def _vertex_field(S: SolutionSet) -> str:
    return "|".join(";".join(qvec(v)) for v in S.vertices)


def trace_to_csv(segments) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta_in", "theta_out", "cell_id", "start_vertices", "end_vertices"])
    for s in segments:
        w.writerow([qs(s.theta_in), qs(s.theta_out), s.cell_id,
                    _vertex_field(s.start), _vertex_field(s.end)])
    return buf.getvalue()
