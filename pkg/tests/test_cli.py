import json
import math
import subprocess
import sys

import pytest

from canalgeo import cli, geom3d, serialize
from canalgeo.cli import EXIT_ALARM, EXIT_DEGENERATE, EXIT_INPUT, EXIT_OK

SQUARE_T = 1 / (2 + math.sqrt(math.pi))


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)


def test_cheeger_unit_square(capsys):
    code, out, _ = run(capsys, "cheeger", "--body", "builtin:unit-square", "--format", "json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["t_star"] == pytest.approx(SQUARE_T, abs=1e-12)
    assert d["set"]["type"] == "rounded"


def test_cheeger_disc_polygon(capsys):
    code, out, _ = run(capsys, "cheeger", "--body", "builtin:disc", "--m", "64")
    assert code == EXIT_OK
    assert abs(float(kv(out)["t_star"]) - 0.5) <= 1e-3


def test_cheeger_exact_disc(capsys):
    code, out, _ = run(capsys, "cheeger", "--body", "builtin:disc", "--format", "csv")
    assert code == EXIT_OK
    header, row = out.splitlines()
    assert header == "t_star,ratio,residual" and float(row.split(",")[0]) == pytest.approx(0.5)


def test_cheeger_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "cheeger", "--body", str(bad))
    assert code == EXIT_INPUT and "error" in err


def test_cheeger_missing_body(capsys):
    assert run(capsys, "cheeger")[0] == EXIT_INPUT
    assert run(capsys, "cheeger", "--body", "builtin:nonagon")[0] == EXIT_INPUT


def test_degenerate_body_exits_3(capsys, tmp_path):
    p = tmp_path / "flat.json"
    p.write_text('{"type": "polygon", "vertices": [[0, 0], [1, 0], [2, 0]]}')
    code, _, err = run(capsys, "cheeger", "--body", str(p))
    assert code == EXIT_DEGENERATE and "degenerate" in err


def test_argument_errors_exit_2(capsys):
    assert run(capsys, "reproduce", "nothing")[0] == EXIT_INPUT
    assert run(capsys, "search", "--check", "ghp", "--trials", "-1")[0] == EXIT_INPUT
    assert run(capsys, "reproduce", "prop-AH", "--h-range", "5:1")[0] == EXIT_INPUT
    assert run(capsys, "reproduce", "lemma-dilation", "--lambdas", "2,1")[0] == EXIT_INPUT
    assert run(capsys, "cheeger", "--body", "builtin:unit-square", "--tol", "0")[0] == EXIT_INPUT
    assert run(capsys)[0] == EXIT_INPUT


def test_canal_bounds_unit_square(capsys):
    code, out, _ = run(capsys, "canal-bounds", "--projection", "builtin:unit-square", "--format", "json")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["cylinder_limit"] == 0.25
    assert d["cheeger_upper"] == pytest.approx(SQUARE_T, abs=1e-12)
    assert 0.25 < d["lower_bound"] <= d["cheeger_upper"]
    assert d["verdict_q1"] == "no"


def test_canal_bounds_disc_polygon(capsys):
    code, out, _ = run(capsys, "canal-bounds", "--projection", "builtin:disc-64")
    assert code == EXIT_OK and kv(out)["verdict_q1"] == "yes"


def test_canal_bounds_with_witness(capsys, tmp_path):
    p = tmp_path / "cube.json"
    serialize.save_body(geom3d.cube(), p)
    code, out, _ = run(capsys, "canal-bounds", "--projection", "builtin:unit-square",
                       "--witness", str(p), "--format", "json")
    assert code == EXIT_OK
    names = [w["name"] for w in json.loads(out)["witnesses"]]
    assert str(p) in names
    q = tmp_path / "box.json"
    serialize.save_body(geom3d.box(2, 1, 1), q)
    code, _, err = run(capsys, "canal-bounds", "--projection", "builtin:unit-square", "--witness", str(q))
    assert code == EXIT_INPUT and "projects" in err


def test_reproduce_prop_ah(capsys):
    code, out, _ = run(capsys, "reproduce", "prop-AH", "--n", "3", "--h-range", "80:86")
    assert code == EXIT_OK
    assert out.rstrip().endswith("PASS prop-AH")
    h_star = float(kv(out)["crossover_h"])
    assert 82 < h_star < 83


@pytest.mark.parametrize("n", (4, 5, 8))
def test_reproduce_prop_ah_higher_dimensions(capsys, n):
    code, out, _ = run(capsys, "reproduce", "prop-AH", "--n", str(n), "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK and d["result"] == "PASS" and math.isfinite(d["crossover_h"])


def test_reproduce_lemma_dilation(capsys):
    code, out, _ = run(capsys, "reproduce", "lemma-dilation", "--body", "builtin:cube",
                       "--lambdas", "1,2,10,100", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "lambda,volume,surface,ratio"
    ratios = [float(line.split(",")[3]) for line in lines[1:]]
    assert ratios == sorted(ratios) and ratios[-1] == pytest.approx(0.2488, abs=1e-4)


def test_reproduce_prop_eq18(capsys):
    code, out, _ = run(capsys, "reproduce", "prop-eq18", "--h", "100")
    assert code == EXIT_OK and out.rstrip().endswith("PASS prop-eq18")


def test_reproduce_alarm_exit_4(capsys):
    # at h = 2 the equal-projection inequality still holds, contrary to the large-h claim
    code, out, err = run(capsys, "reproduce", "prop-eq18", "--h", "2")
    assert code == EXIT_ALARM and out.rstrip().endswith("FAIL prop-eq18") and "FAIL" in err


def test_reproduce_lemma_pyramid(capsys):
    code, out, _ = run(capsys, "reproduce", "lemma-pyramid", "--format", "json")
    d = json.loads(out)
    assert code == EXIT_OK and d["result"] == "PASS"
    assert all(r["ratio_C"] < 0.25 for r in d["rows"])
    code, out, _ = run(capsys, "reproduce", "lemma-pyramid", "--n", "3", "--h-range", "2:10:4")
    assert code == EXIT_OK
    assert run(capsys, "reproduce", "lemma-pyramid", "--n", "3", "--h", "1")[0] == EXIT_INPUT


def test_search_ghp(capsys):
    code, out, _ = run(capsys, "search", "--check", "ghp", "--trials", "1000", "--seed", "7")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 1001
    summary = json.loads(lines[-1])["summary"]
    assert summary["violations"] == 0 and summary["trials"] == 1000
    rec = json.loads(lines[0])
    assert rec["trial"] == 0 and rec["name"] == "ghp" and "seed" in rec


def test_search_proj_ratio_square(capsys):
    code, out, _ = run(capsys, "search", "--check", "proj-ratio", "--projection", "builtin:unit-square",
                       "--trials", "500", "--seed", "7")
    assert code == EXIT_OK
    recs = [json.loads(line) for line in out.splitlines()[:-1]]
    assert len(recs) == 500
    assert all(not r["extra"]["calibrable"] for r in recs if not r["holds"])


def test_search_table_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--check", "fgm", "--trials", "20", "--format", "table")
    assert code == EXIT_OK and kv(out)["violations"] == "0"
    target = tmp_path / "out.csv"
    code, out, _ = run(capsys, "search", "--check", "segment-sum", "--trials", "5", "--format", "csv", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text().splitlines()[0] == ",".join(cli.OUTCOME_COLUMNS)


def test_same_seed_gives_identical_bytes():
    argv = [sys.executable, "-m", "canalgeo", "search", "--check", "proj-ratio", "--trials", "50", "--seed", "3"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and len(a.splitlines()) == 51
    c = subprocess.run(argv[:-1] + ["4"], capture_output=True, check=True).stdout
    assert c != a


def test_tolerance_env_override():
    code = "import canalgeo; print(canalgeo.TAU)"
    env = {"CANALGEO_TOL": "1e-7", "PATH": ""}
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, env=env, check=True).stdout
    assert float(out) == 1e-7
