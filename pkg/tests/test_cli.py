import json
from pathlib import Path

import pytest

from l1faces.cli import main

ROOT = Path(__file__).resolve().parent.parent
EX = str(ROOT / "data" / "two_by_three.json")
CORRUPT = str(Path(__file__).parent / "fixtures" / "corrupted_two_by_three.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_analyze(tmp_path, capsys):
    out = tmp_path / "dec.json"
    code, stdout, _ = run(capsys, "analyze", "-i", EX, "-o", str(out))
    assert code == 0
    d = json.loads(out.read_text())
    assert len(d["faces"]) == 9
    assert len(stdout.strip().splitlines()) == 10  # header + 9 rows
    code, stdout, _ = run(capsys, "analyze", "-i", write(tmp_path, "s.json", {"A": [["1"]]}))
    assert code == 0 and len(json.loads(stdout)["faces"]) == 3


def test_analyze_errors(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", "-i", str(ROOT / "data" / "rank_deficient.json"))
    assert code == 3 and "full row rank" in err
    code, _, _ = run(capsys, "analyze", "-i", write(tmp_path, "bad.json", {"A": [["1", "x"]]}))
    assert code == 2
    code, _, _ = run(capsys, "analyze", "-i", write(tmp_path, "ragged.json", {"A": [["1"], ["1", "2"]]}))
    assert code == 2
    code, _, _ = run(capsys, "analyze", "-i", str(tmp_path / "missing.json"))
    assert code == 2


def test_queries(capsys):
    code, out, _ = run(capsys, "eval", "-i", EX, "--lambda", "1", "--b", "4,2")
    d = json.loads(out)
    assert code == 0 and d["kind"] == "polytope"
    assert sorted(d["vertices"]) == [["0", "9/4", "3/2"], ["3", "3/4", "0"]]
    code, out, _ = run(capsys, "locate", "-i", EX, "--lambda", "10", "--b", "1,1")
    assert json.loads(out)["cells"] == [9]
    code, out, _ = run(capsys, "check", "-i", EX, "--lambda", "1", "--b", "1/2,2")
    d = json.loads(out)
    assert d["cond31"] and d["cond32"] and d["cond33"] and d["active_J"] == [2]
    code, out, _ = run(capsys, "eval", "-i", EX, "--lambda", "1", "--b=-1,2")
    assert code == 0 and json.loads(out)["x"] == ["0", "1/4", "-1/2"]


def test_query_errors(capsys):
    assert run(capsys, "eval", "-i", EX, "--lambda=-1", "--b", "1,2")[0] == 4
    assert run(capsys, "eval", "-i", EX, "--lambda", "1", "--b", "1,2,3")[0] == 2
    assert run(capsys, "eval", "-i", EX, "--lambda", "1")[0] == 2
    assert run(capsys, "trace", "-i", EX, "--from=-1,0,0", "--to", "1,0,0")[0] == 4
    with pytest.raises(SystemExit) as e:
        main(["eval"])
    assert e.value.code == 2


def test_trace_csv(capsys):
    code, out, _ = run(capsys, "trace", "-i", EX, "--from", "1,4,2", "--to", "1,1/2,2")
    lines = out.strip().splitlines()
    assert lines[0] == "theta_in,theta_out,cell_id,start_vertices,end_vertices"
    assert lines[1].startswith("0,6/7,1,") and lines[-1].startswith("6/7,1,5,")


def test_lipschitz_command(capsys):
    code, out, _ = run(capsys, "lipschitz", "-i", EX, "--trials", "20", "--seed", "3")
    d = json.loads(out)
    assert code == 0 and len(d["samples"]) <= 20
    kappa = {c["partition"]: c["closed_form"] for c in d["cells"]}
    assert kappa["({2},{1,3},∅)"] == pytest.approx(5 ** 0.5 / 4, abs=1e-12)


def test_deterministic_and_cached_roundtrip(tmp_path, capsys):
    outs = []
    for k in range(2):
        p = tmp_path / f"dec{k}.json"
        run(capsys, "analyze", "-i", EX, "-o", str(p))
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    cached = str(tmp_path / "dec0.json")
    for args in (["eval", "--lambda", "1", "--b", "4,2"], ["locate", "--lambda", "0", "--b", "1,0"],
                 ["check", "--lambda", "2/3", "--b=-3,1"]):
        fresh = run(capsys, args[0], "-i", EX, *args[1:])[1]
        again = run(capsys, args[0], "-i", cached, *args[1:])[1]
        assert fresh == again


def test_export_fig(tmp_path, capsys):
    code, out, _ = run(capsys, "export-fig", "-i", EX)
    d = json.loads(out)
    assert code == 0 and len(d["cells"]) == 9
    for c in d["cells"]:
        for v in c["directions"] + c["sphere_points"]:
            assert sum(a * a for a in v) == pytest.approx(1.0)
    code, out, _ = run(capsys, "export-fig", "-i", str(ROOT / "data" / "identity2.json"))
    assert code == 0 and len(json.loads(out)["cells"]) == 9
    assert run(capsys, "export-fig", "-i", str(ROOT / "data" / "m3.json"))[0] == 5


def test_validate(tmp_path, capsys):
    assert run(capsys, "validate", "--trials", "0")[0] == 2
    rep = tmp_path / "r.json"
    code, _, _ = run(capsys, "validate", "--seed", "1", "--trials", "5", "--dims", "3,5", "-o", str(rep))
    assert code == 0 and json.loads(rep.read_text())["passed"]
    assert run(capsys, "validate", "-i", EX, "--trials", "10", "-o", str(rep))[0] == 0


def test_validate_rejects_corrupted_decomposition(tmp_path, capsys):
    rep = tmp_path / "r.json"
    code, _, err = run(capsys, "validate", "-i", CORRUPT, "--trials", "10", "-o", str(rep))
    assert code == 1 and "FAILED" in err
    assert not json.loads(rep.read_text())["passed"]
