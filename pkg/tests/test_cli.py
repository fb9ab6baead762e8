import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from prp3.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_kv(text):
    rows = [line.split(",") for line in text.strip().splitlines()]
    return {r[0]: [float(v) for v in r[1:]] for r in rows if r[0] not in ("leg",)}


def test_ik_central(capsys):
    code, out, _ = run(["ik", "--x", "0", "--y", "0", "--phi", "0"], capsys)
    assert code == 0
    vals = parse_kv(out)
    assert all(abs(v) < 1e-15 for leg in "abc" for v in vals[leg])
    assert vals["residual"][0] < 1e-12


def test_ik_singular(capsys):
    code, _, err = run(["ik", "--x", "0", "--y", "0", "--phi", "1.0471975512"], capsys)
    assert code == 2
    assert "singular" in err.lower()


def test_ik_usage_error(capsys):
    code, _, err = run(["ik", "--x", "abc"], capsys)
    assert code == 1
    assert "usage" in err


def test_unknown_flag_is_usage_error(capsys):
    assert run(["ik", "--bogus", "1"], capsys)[0] == 1
    assert run(["frobnicate"], capsys)[0] == 1


def test_help_exits_zero(capsys):
    for cmd in ("ik", "fk", "jacobian", "scan", "simulate"):
        with pytest.raises(SystemExit) as info:
            main([cmd, "--help"])
        assert info.value.code == 0
        assert "--geometry" in capsys.readouterr().out


def test_fk_round_trip(capsys):
    code, out, _ = run(["ik", "--x", "0.05", "--y", "0.05", "--phi", repr(math.pi / 6)], capsys)
    vals = parse_kv(out)
    lam = [vals[leg][0] for leg in "abc"]
    code, out, _ = run(["fk", "--lambda-a", repr(lam[0]), "--lambda-b", repr(lam[1]),
                        "--lambda-c", repr(lam[2])], capsys)
    assert code == 0
    pose = parse_kv(out)
    assert abs(pose["x"][0] - 0.05) < 1e-9 and abs(pose["y"][0] - 0.05) < 1e-9
    assert abs(pose["phi"][0] - math.pi / 6) < 1e-9


def test_fk_central(capsys):
    code, out, _ = run(["fk", "--lambda-a", "0", "--lambda-b", "0", "--lambda-c", "0"], capsys)
    assert code == 0
    vals = parse_kv(out)
    assert max(abs(vals[k][0]) for k in ("x", "y", "phi")) < 1e-9


def test_fk_failures(capsys):
    assert run(["fk", "--lambda-a", "1e6", "--lambda-b", "1e6", "--lambda-c", "1e6"], capsys)[0] == 2
    assert run(["fk", "--lambda-a", "0.08", "--lambda-b", "-0.09", "--lambda-c", "0.146",
                "--guess-x", "0.3", "--guess-y", "-0.3", "--guess-phi", "-1", "--max-iter", "1"],
               capsys)[0] == 2


def test_jacobian(capsys):
    code, out, _ = run(["jacobian"], capsys)
    assert code == 0
    vals = parse_kv(out)
    assert vals["det_j1"][0] == pytest.approx(-3 * math.sqrt(3) / 8, abs=1e-14)
    assert vals["det_j2"][0] == pytest.approx(-0.225, abs=1e-14)


def test_scan(capsys, tmp_path):
    code, out, err = run(["scan", "--min", "0", "--max", "3.14159", "--steps", "100"], capsys)
    assert code == 0
    assert "det_j1 root at phi = 1.047197" in err
    assert len(out.strip().splitlines()) == 101
    code, _, err = run(["scan", "--min", "2", "--max", "3", "--steps", "10"], capsys)
    assert code == 0 and "no det_j1 roots" in err
    assert run(["scan", "--steps", "1"], capsys)[0] == 1
    assert run(["scan", "--min", "2", "--max", "1"], capsys)[0] == 1


def _csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, data, lines


def test_simulate_rotation(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert run(["simulate", "--scenario", "rotation", "--samples", "301", "--out", str(out)], capsys)[0] == 0
    header, data, lines = _csv(out)
    assert len(lines) == 302
    assert header[:4] == ["t", "x", "y", "phi"]
    col = {h: data[:, i] for i, h in enumerate(header)}
    for name in ("lambda10", "v10", "gamma10"):
        a, b, c = (col[f"{name}_{leg}"] for leg in "abc")
        assert np.max(np.abs(a - b)) < 1e-12 and np.max(np.abs(a - c)) < 1e-12
    assert out.read_bytes().count(b"\r") == 0


def test_simulate_trans_y_pair(tmp_path, capsys):
    out = tmp_path / "y.csv"
    assert run(["simulate", "--scenario", "trans-y", "--out", str(out)], capsys)[0] == 0
    header, data, _ = _csv(out)
    col = {h: data[:, i] for i, h in enumerate(header)}
    cols = [col[f"lambda10_{leg}"] for leg in "abc"]
    same = [(i, j) for i, j in ((0, 1), (0, 2), (1, 2)) if np.max(np.abs(cols[i] - cols[j])) < 1e-12]
    assert same == [(1, 2)]


def test_simulate_passive_columns_and_plot(tmp_path, capsys):
    out, svg = tmp_path / "c.csv", tmp_path / "c.svg"
    code = run(["simulate", "--scenario", "combined", "--samples", "50", "--passive",
                "--out", str(out), "--plot", str(svg)], capsys)[0]
    assert code == 0
    header, _, _ = _csv(out)
    assert len(header) == len(set(header)) == 4 + 18
    assert "gamma32_c" in header
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg")
    text = svg.read_text()
    assert text.count("<polyline") == 9
    assert "href" not in text


def test_simulate_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(["simulate", "--scenario", "combined", "--out", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_singular_leaves_no_file(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code = run(["simulate", "--scenario", "rotation", "--phi-star", str(math.pi / 6),
                "--out", str(out)], capsys)[0]
    assert code == 2
    assert not out.exists()


def test_simulate_bad_scenario(capsys):
    assert run(["simulate", "--scenario", "spin"], capsys)[0] == 1
    assert run(["simulate", "--samples", "1"], capsys)[0] == 1


def test_simulate_unwritable(capsys, tmp_path):
    assert run(["simulate", "--out", str(tmp_path / "missing" / "x.csv")], capsys)[0] == 1


def test_geometry_file(tmp_path, capsys):
    cfg = tmp_path / "g.cfg"
    cfg.write_text("l0 = 0.4\n")
    code, out, _ = run(["ik", "--geometry", str(cfg)], capsys)
    assert code == 0
    vals = parse_kv(out)
    assert all(abs(v) < 1e-15 for leg in "abc" for v in vals[leg])
    cfg.write_text("alpha_a = 1.5707963267948966\n")
    code, out, _ = run(["ik", "--geometry", str(cfg)], capsys)
    # rails turned by 30 degrees: lambda10 = l0 (1 - 2/sqrt3), lambda32 = l0/sqrt3
    vals = parse_kv(out)
    for leg in "abc":
        assert abs(vals[leg][0] - 0.3 * (1 - 2 / math.sqrt(3))) < 1e-15
        assert abs(vals[leg][1] - 0.3 / math.sqrt(3)) < 1e-15
    assert run(["ik", "--geometry", str(tmp_path / "nope.cfg")], capsys)[0] == 1
    cfg.write_text("wat = 1\n")
    assert run(["jacobian", "--geometry", str(cfg)], capsys)[0] == 1
