import json
import subprocess
import sys

import numpy as np
import pytest

from ppdepth.cli import main
from ppdepth.io import load_realizations, read_depth_csv


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def hpp_file(tmp_path):
    path = tmp_path / "hpp.jsonl"
    assert main(["simulate", "--family", "hpp", "-n", "200", "--t2", "5", "--seed", "7",
                 "-o", str(path)]) == 0
    return path


def test_simulate_reproducible_and_round_trips(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        code, _, _ = run(["simulate", "--family", "hpp", "-n", 50, "--t2", 5, "--seed", 7,
                          "-o", path], capsys)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    ids, sample = load_realizations(a)
    assert len(sample) == 50 and ids[0] == "0"
    assert all(p.domain.t2 == 5.0 for p in sample)


def test_simulate_ipp_and_imi(tmp_path, capsys):
    path = tmp_path / "ipp.jsonl"
    code, _, _ = run(["simulate", "--family", "ipp", "--intensity", "cos(t)+1", "--lambda-max", 2,
                      "--t2", "2*pi", "-n", 20, "-o", path], capsys)
    assert code == 0
    assert load_realizations(path)[1][0].domain.t2 == pytest.approx(2 * np.pi)
    code, out, _ = run(["simulate", "--family", "imi", "--intensity", "sin(t)+1",
                        "--intensity-tau", "sin(tau-pi/2)+1", "--bound", 4, "--t2", "2*pi",
                        "-n", 3], capsys)
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run(["simulate", "--family", "ipp", "--intensity", "cos(4*t)+1",
                        "--lambda-max", 2, "--t2", "pi/2", "--condition-k", 2, "-n", 5], capsys)
    assert code == 0
    assert all(len(json.loads(line)["events"]) == 2 for line in out.splitlines())


def test_simulate_errors(capsys):
    assert run(["simulate", "--family", "cox"], capsys)[0] == 1
    assert run(["simulate", "--family", "ipp", "--lambda-max", 2], capsys)[0] == 1
    assert run(["simulate", "--family", "ipp", "--intensity", "t^2", "--lambda-max", 2],
               capsys)[0] == 1
    assert run(["simulate", "--family", "hpp", "--rate", 0], capsys)[0] == 1
    assert run(["simulate", "--family", "ipp", "--intensity", "3", "--lambda-max", 2],
               capsys)[0] == 3


def test_depth_modes(hpp_file, capsys):
    outputs = {}
    for mode in ("hpp", "simplified", "ipp-histogram", "imi"):
        code, out, _ = run(["depth", hpp_file, "--mode", mode], capsys)
        assert code == 0, mode
        rows = read_depth_csv(out)
        assert len(rows) == 200
        assert [r["rank"] for r in rows] == list(range(1, 201))
        assert all(0 <= r["d_cond"] <= 1 for r in rows)
        outputs[mode] = out
    assert outputs["hpp"] != outputs["simplified"]


def test_given_constant_intensity_equals_hpp(hpp_file, capsys):
    _, hpp, _ = run(["depth", hpp_file, "--mode", "hpp", "--r", 0.3], capsys)
    _, given, _ = run(["depth", hpp_file, "--mode", "given-intensity", "--intensity", "2.5",
                       "--r", 0.3], capsys)
    assert given == hpp
    _, linear, _ = run(["depth", hpp_file, "--mode", "given-intensity", "--intensity", "t+1"],
                       capsys)
    assert read_depth_csv(linear)[0]["d_cond"] <= 1


def test_given_intensity_with_hazard(hpp_file, capsys):
    code, out, _ = run(["depth", hpp_file, "--mode", "given-intensity", "--intensity", "1",
                        "--intensity-tau", "tau+1"], capsys)
    assert code == 0 and len(read_depth_csv(out)) == 200


def test_depth_center_row_is_exactly_one(tmp_path, capsys):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id": "c", "t1": 0, "t2": 3, "events": [1, 2]}\n'
                    '{"id": "o", "t1": 0, "t2": 3, "events": [0.1, 2]}\n')
    code, out, _ = run(["depth", path], capsys)
    assert code == 0
    line = out.splitlines()[1]
    assert line.startswith("c,2,") and line.split(",")[4] == "1"


def test_depth_errors(tmp_path, hpp_file, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert run(["depth", empty], capsys)[0] == 2
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "a", "t1": 0, "t2": 1, "events": [0.5]}\n{"id": 1}\n')
    code, _, err = run(["depth", bad], capsys)
    assert code == 2 and "line 2" in err
    assert run(["depth", tmp_path / "missing.jsonl"], capsys)[0] == 2
    assert run(["depth", hpp_file, "--mode", "given-intensity"], capsys)[0] == 1
    assert run(["depth", hpp_file, "--mode", "given-intensity", "--intensity", "sin("],
               capsys)[0] == 1
    assert run(["depth", hpp_file, "--mode", "given-intensity", "--intensity", "0"],
               capsys)[0] == 3
    assert run(["depth", hpp_file, "--mode", "given-intensity", "--intensity", "t-3"],
               capsys)[0] == 3
    assert run(["depth", hpp_file, "--r", 0], capsys)[0] == 1
    assert run(["depth", hpp_file, "--mode", "tukey"], capsys)[0] == 1


def test_contours(capsys, hpp_file, tmp_path):
    code, out, _ = run(["contours", "--resolution", 6], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "u1,u2,u3,ilr_x,ilr_y,depth"
    rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    assert rows.shape == (28, 6)
    center = np.all(np.isclose(rows[:, :3], 1 / 3), axis=1)
    assert rows[center, 5].tolist() == [1.0]
    code, _, err = run(["contours", "--k", 3], capsys)
    assert code == 1 and "k=2" in err
    ipp = tmp_path / "ipp.jsonl"
    main(["simulate", "--family", "ipp", "--intensity", "cos(4*t)+1", "--lambda-max", "2",
          "--t2", "pi/2", "--condition-k", "2", "-n", "100", "-o", str(ipp)])
    code, out, _ = run(["contours", "--mode", "ipp-histogram", "--input", ipp,
                        "--resolution", 9], capsys)
    assert code == 0 and len(out.splitlines()) == 56
    assert run(["contours", "--mode", "imi"], capsys)[0] == 1


def test_convergence(capsys):
    code, out, _ = run(["convergence", "--n-grid", "50", "--lambda-max", 2], capsys)
    assert code == 0
    assert len(out.splitlines()) == 2
    assert out.splitlines()[0] == "n,M,sup_error"
    assert out.splitlines()[1].startswith("50,3,")
    assert run(["convergence", "--n-grid", "a,b"], capsys)[0] == 1
    assert run(["convergence", "--intensity", "cos(", "--n-grid", "10"], capsys)[0] == 1
    assert run(["convergence", "--m-rule", "cube", "--n-grid", "10"], capsys)[0] == 1


def write_csv(path, rows, header="time,road"):
    path.write_text(header + "\n" + "\n".join(rows) + "\n")


def test_ingest_groups_by_day(tmp_path, capsys):
    src = tmp_path / "acc.csv"
    write_csv(src, ["2024-01-01T08:30:00,highway", "2024-01-01T12:00:00,local",
                    "2024-01-01T18:15:00,highway", "2024-01-03T01:00:00,local"])
    code, out, _ = run(["ingest", src], capsys)
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["id"] for r in recs] == ["2024-01-01", "2024-01-03"]
    assert recs[0]["events"] == [8.5, 12.0, 18.25]
    assert (recs[0]["t1"], recs[0]["t2"]) == (0.0, 24.0)
    code, out, _ = run(["ingest", src, "--keep-empty"], capsys)
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["id"] for r in recs] == ["2024-01-01", "2024-01-02", "2024-01-03"]
    assert recs[1]["events"] == []


def test_ingest_decimal_hours_and_week(tmp_path, capsys):
    src = tmp_path / "h.csv"
    write_csv(src, ["1.5", "30", "25.25", "0.25"], header="time")
    code, out, _ = run(["ingest", src], capsys)
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["events"] for r in recs] == [[0.25, 1.5], [1.25, 6.0]]
    src = tmp_path / "w.csv"
    write_csv(src, ["2024-01-01T00:00:00", "2024-01-03T12:00:00", "2024-01-08T06:00:00"],
              header="time")
    code, out, _ = run(["ingest", src, "--period", "week"], capsys)
    recs = [json.loads(line) for line in out.splitlines()]
    assert recs[0]["t2"] == 168.0
    assert recs[0]["events"] == [0.0, 60.0] and recs[1]["events"] == [6.0]


def test_ingest_split_by(tmp_path, capsys):
    src = tmp_path / "acc.csv"
    write_csv(src, ["2024-01-01T08:30:00,highway", "2024-01-01T12:00:00,local",
                    "2024-01-02T18:15:00,highway"])
    code, _, _ = run(["ingest", src, "--split-by", "road", "-o", tmp_path / "days.jsonl"], capsys)
    assert code == 0
    hw = load_realizations(tmp_path / "days_highway.jsonl")[1]
    loc = load_realizations(tmp_path / "days_local.jsonl")[1]
    assert [p.k for p in hw] == [1, 1] and [p.k for p in loc] == [1]
    assert run(["ingest", src, "--split-by", "road"], capsys)[0] == 1
    assert run(["ingest", src, "--split-by", "lane", "-o", tmp_path / "x.jsonl"], capsys)[0] == 2


def test_ingest_bad_rows(tmp_path, capsys):
    good = [f"2024-01-0{1 + i % 5}T0{i % 10}:00:00,a" for i in range(200)]
    src = tmp_path / "ok.csv"
    write_csv(src, good + ["garbage,a"])
    code, _, err = run(["ingest", src], capsys)
    assert code == 0 and "line 202" in err
    src = tmp_path / "bad.csv"
    write_csv(src, good[:10] + ["garbage,a"])
    code, _, err = run(["ingest", src], capsys)
    assert code == 2 and "line 12" in err
    src = tmp_path / "nocol.csv"
    write_csv(src, ["1"], header="when")
    assert run(["ingest", src], capsys)[0] == 2
    src = tmp_path / "none.csv"
    src.write_text("time\n")
    assert run(["ingest", src], capsys)[0] == 2


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "ppdepth.cli", "contours", "--resolution", "3"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.splitlines()[0] == "u1,u2,u3,ilr_x,ilr_y,depth"
    bad = subprocess.run([sys.executable, "-m", "ppdepth.cli", "nope"], capture_output=True)
    assert bad.returncode == 1
