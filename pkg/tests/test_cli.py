import csv
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from segstab.cli import CSV_HEADER, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main
from segstab.instance import PlaneGraphInstance, validate

SVG = "{http://www.w3.org/2000/svg}"
CLASSES = ["general", "remote", "gabriel", "delaunay", "outerplanedelaunay", "outerplane"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate(tmp_path, capsys):
    f = tmp_path / "d.json"
    assert run(capsys, "generate", "--class", "delaunay", "--n", 100, "--seed", 7, "--out", f)[0] == EXIT_OK
    assert validate(PlaneGraphInstance.load(f), check_class=True).ok
    code, out, _ = run(capsys, "generate", "--class", "gabriel", "--n", 3, "--seed", 1)
    assert code == EXIT_OK and len(json.loads(out)["edges"]) <= 3


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "generate", "--class", "hexagonal")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "solve", tmp_path / "missing.json")[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "verify", bad, bad)[0] == EXIT_USAGE


def test_numeric_errors(tmp_path, capsys):
    f = tmp_path / "i.json"
    run(capsys, "generate", "--class", "general", "--n", 8, "--out", f)
    code, _, err = run(capsys, "solve", f, "--nu", 1000)
    assert code == EXIT_NUMERIC and "kappa" in err
    crossing = tmp_path / "x.json"
    crossing.write_text(json.dumps({"vertices": [[0, 0], [2, 2], [0, 2], [2, 0]], "edges": [[0, 1], [2, 3]], "r": 0.1, "class": "General"}))
    assert run(capsys, "solve", crossing)[0] == EXIT_NUMERIC


def test_solve_verify_and_records(tmp_path, capsys):
    f, s, c = tmp_path / "i.json", tmp_path / "s.json", tmp_path / "runs.csv"
    run(capsys, "generate", "--class", "delaunay", "--n", 40, "--seed", 3, "--out", f)
    code, out, _ = run(capsys, "solve", f, "--nu", 6, "--out", s, "--csv", c)
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    rows = list(csv.reader(c.open()))
    assert rows[0] == CSV_HEADER and len(rows) == 2
    assert rows[1][0] == "Delaunay" and rows[1][8] == "" and rows[1][9] == ""
    code, out, _ = run(capsys, "verify", f, s)
    assert code == EXIT_OK and out.strip().splitlines()[-1].startswith("PASS")
    # a broken solution fails verification
    data = json.loads(s.read_text())
    data["points"] = data["points"][:1]
    s.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", f, s)
    assert code == EXIT_VERIFY and "FAIL" in out


def test_solve_with_oracle(tmp_path, capsys):
    f, c = tmp_path / "i.json", tmp_path / "runs.csv"
    run(capsys, "generate", "--class", "general", "--n", 6, "--seed", 2, "--out", f)
    assert run(capsys, "solve", f, "--oracle", "--csv", c)[0] == EXIT_OK
    row = dict(zip(CSV_HEADER, list(csv.reader(c.open()))[1]))
    assert int(row["OPT"]) >= 1
    assert float(row["ratio"]) == pytest.approx(int(row["H"]) / int(row["OPT"]), rel=1e-6)


def test_isolated_and_gabriel_paths(tmp_path, capsys):
    iso, s = tmp_path / "iso.json", tmp_path / "s.json"
    iso.write_text(json.dumps({"vertices": [[0, 0], [1, 0], [10, 0], [11, 0]], "edges": [[0, 1], [2, 3]], "r": 1.0, "class": "General"}))
    assert run(capsys, "solve", iso, "--out", s)[0] == EXIT_OK
    assert sorted(map(tuple, json.loads(s.read_text())["points"])) == [(0.5, 0.0), (10.5, 0.0)]
    g = tmp_path / "g.json"
    run(capsys, "generate", "--class", "gabriel", "--n", 30, "--out", g)
    run(capsys, "solve", g, "--out", s)
    assert json.loads(s.read_text())["stats"]["variant"] == "Gabriel"


def test_oracle_command(tmp_path, capsys):
    f = tmp_path / "two.json"
    V = [[0, 0], [1, 0], [1, 0.5], [20, 0], [21, 0], [21, 0.5]]
    f.write_text(json.dumps({"vertices": V, "edges": [[0, 1], [1, 2], [3, 4], [4, 5]], "r": 0.3, "class": "General"}))
    code, out, _ = run(capsys, "oracle", f)
    assert code == EXIT_OK and out.strip() == "2"
    big = tmp_path / "big.json"
    run(capsys, "generate", "--class", "delaunay", "--n", 30, "--out", big)
    assert run(capsys, "oracle", big, "--oracle-max", 5)[0] == EXIT_USAGE


def test_plot_structure(tmp_path, capsys):
    f, s, svg = tmp_path / "i.json", tmp_path / "s.json", tmp_path / "p.svg"
    run(capsys, "generate", "--class", "outerplane", "--n", 15, "--out", f)
    run(capsys, "solve", f, "--out", s)
    assert run(capsys, "plot", f, "--solution", s, "--svg", svg)[0] == EXIT_OK
    root = ET.parse(svg).getroot()
    assert root.get("viewBox") == "0 0 1000 1000"
    inst = PlaneGraphInstance.load(f)
    n_points = len(json.loads(s.read_text())["points"])
    elems = list(root.iter())
    assert sum(e.tag == SVG + "path" and e.get("class") == "edge" for e in elems) == inst.n
    assert sum(e.tag == SVG + "path" and e.get("class") == "capsule" for e in elems) == inst.n
    assert sum(e.tag == SVG + "circle" and e.get("class") == "point" for e in elems) == n_points
    assert sum(e.tag == SVG + "circle" and e.get("class") == "disk" for e in elems) == n_points
    for e in elems:
        if e.get("class") == "point":
            assert 0 <= float(e.get("cx")) <= 1000 and 0 <= float(e.get("cy")) <= 1000


def test_bench_deterministic_append_only(tmp_path, capsys):
    c = tmp_path / "bench.csv"
    args = ["bench", "--class", "general,remote", "--n", "10", "--nu", "3,6", "--seeds", 2, "--csv", c]
    assert run(capsys, *args)[0] == EXIT_OK
    first = list(csv.reader(c.open()))
    assert first[0] == CSV_HEADER and len(first) == 1 + 2 * 2 * 2
    assert run(capsys, *args, "--workers", 2)[0] == EXIT_OK
    rows = list(csv.reader(c.open()))
    assert rows[: len(first)] == first  # earlier rows are untouched
    assert len(rows) == 1 + 2 * 8
    # every column but the wall time is deterministic per seed matrix
    strip = lambda r: r[:-1]
    assert [strip(r) for r in rows[1:9]] == [strip(r) for r in rows[9:]]
    c.write_text("other,header\n")
    assert run(capsys, *args)[0] == EXIT_USAGE


@pytest.mark.parametrize("cls", CLASSES)
def test_round_trip_50_seeds(tmp_path, capsys, cls):
    f, s = tmp_path / "i.json", tmp_path / "s.json"
    for seed in range(50):
        assert run(capsys, "generate", "--class", cls, "--n", 12, "--seed", seed, "--out", f)[0] == EXIT_OK
        assert run(capsys, "solve", f, "--out", s)[0] == EXIT_OK
        assert run(capsys, "verify", f, s)[0] == EXIT_OK
