import json

import numpy as np
import pytest

from graphphase import gen_cycle, gen_path, load_edge_list, save_edge_list
from graphphase.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_PARSE, EXIT_USAGE, main
from graphphase.graphs import save_signal


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    save_edge_list(gen_cycle(8), tmp_path / "c8.csv")
    save_edge_list(gen_path(3), tmp_path / "p3.csv")
    save_signal(np.cos(2 * np.pi * np.arange(8) / 8), tmp_path / "cos.csv")
    save_signal(np.full(8, -2.0), tmp_path / "const.csv")
    save_signal(np.array([1.0, 2.0, 3.0]), tmp_path / "x3.csv")
    return tmp_path


def _edge_rows(text):
    return [l for l in text.splitlines() if l and not l.startswith("#") and not l.startswith("src")]


@pytest.mark.parametrize(
    "argv,count",
    [
        (["gen", "cycle", "--n", "8"], 8),
        (["gen", "rosace", "--hubs", "20", "--fan", "20"], 400),
        (["gen", "grid", "--rows", "20", "--cols", "20", "--twist", "3"], 800),
    ],
)
def test_gen_counts(capsys, argv, count):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert len(_edge_rows(out)) == count


def test_gen_writes_file(capsys, tmp_path):
    code, _, _ = run(capsys, "gen", "cycle", "--n", 8, "-o", tmp_path / "c8.csv")
    assert code == EXIT_OK
    assert load_edge_list(tmp_path / "c8.csv") == gen_cycle(8)


def test_gen_invalid_params(capsys):
    code, _, err = run(capsys, "gen", "cycle", "--n", 1)
    assert code == EXIT_USAGE and "n >= 2" in err
    code, _, err = run(capsys, "gen", "grid", "--twist", 1)
    assert code == EXIT_USAGE and "collapses" in err


def test_unknown_command_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_perturb_path(capsys, files):
    rep = files / "rep.json"
    code, out, _ = run(capsys, "perturb", files / "p3.csv", "--report", rep)
    assert code == EXIT_OK
    report = json.loads(rep.read_text())
    assert report["added_edges"] == [[2, 0, 1.0]]
    assert "2,0,1.0" in out


def test_perturb_cycle_report_on_stderr(capsys, files):
    code, _, err = run(capsys, "perturb", files / "c8.csv")
    report = json.loads(err)
    assert code == EXIT_OK and report["added_edges"] == [] and report["after"]["is_diagonalizable"]


def test_perturb_failure_exit_code(capsys, files):
    code, _, err = run(capsys, "perturb", files / "p3.csv", "--max-iter", 0)
    assert code == EXIT_NUMERICAL
    assert '"trace"' in err


def test_analyze_cosine(capsys, files):
    code, out, _ = run(capsys, "analyze", files / "c8.csv", files / "cos.csv")
    assert code == EXIT_OK
    rows = [list(map(float, l.split(","))) for l in out.splitlines()[1:]]
    k = np.arange(8)
    hx = np.array([r[2] for r in rows])
    np.testing.assert_allclose(np.abs(hx), np.abs(np.sin(2 * np.pi * k / 8)), atol=1e-12)
    assert out.splitlines()[0] == "node,x,hx,amplitude,phase"


def test_analyze_constant(capsys, files):
    code, out, _ = run(capsys, "analyze", files / "c8.csv", files / "const.csv")
    rows = np.array([list(map(float, l.split(","))) for l in out.splitlines()[1:]])
    np.testing.assert_allclose(rows[:, 2], 0, atol=1e-14)
    np.testing.assert_allclose(rows[:, 3], 2.0)


def test_analyze_frequency_path(capsys, files):
    freq = files / "freq.csv"
    code, _, _ = run(capsys, "analyze", files / "c8.csv", files / "cos.csv", "-o", files / "a.csv",
                     "--path", "0,1,2,3", "--freq-output", freq)
    assert code == EXIT_OK
    lines = freq.read_text().splitlines()
    assert lines[0] == "from_node,to_node,omega" and len(lines) == 4
    assert float(lines[1].split(",")[2]) == pytest.approx(np.pi / 4)


def test_analyze_path_must_follow_edges(capsys, files):
    code, _, err = run(capsys, "analyze", files / "c8.csv", files / "cos.csv", "-o", files / "a.csv",
                       "--path", "0,2")
    assert code == EXIT_USAGE and "not an edge" in err


def test_analyze_defective_names_remedy(capsys, files):
    code, _, err = run(capsys, "analyze", files / "p3.csv", files / "x3.csv")
    assert code == EXIT_NUMERICAL and "--auto-perturb" in err
    code, out, _ = run(capsys, "analyze", files / "p3.csv", files / "x3.csv", "--auto-perturb")
    assert code == EXIT_OK and len(out.splitlines()) == 4


def test_auto_perturb_is_noop_on_valid_graph(capsys, files):
    _, plain, _ = run(capsys, "analyze", files / "c8.csv", files / "cos.csv")
    _, auto, _ = run(capsys, "analyze", files / "c8.csv", files / "cos.csv", "--auto-perturb")
    assert plain == auto


def test_analyze_json(capsys, files):
    code, out, _ = run(capsys, "analyze", files / "c8.csv", files / "cos.csv", "--format", "json",
                       "--path", "0,1,2,3,4,5,6,7", "--closed")
    doc = json.loads(out)
    assert len(doc["nodes"]) == 8 and len(doc["frequency"]) == 8
    assert doc["frequency"][-1]["to_node"] == 0


def test_cyclecover(capsys, files):
    code, out, _ = run(capsys, "cyclecover", files / "c8.csv")
    assert json.loads(out) == {"r": 0, "cycles": [list(range(8))]}
    code, out, _ = run(capsys, "cyclecover", files / "p3.csv")
    assert code == EXIT_OK and json.loads(out) == {"r": 3, "cycles": []}


def test_cyclecover_perturbed_rosace(capsys, tmp_path):
    run(capsys, "gen", "rosace", "--hubs", 3, "--fan", 3, "-o", tmp_path / "r.csv")
    run(capsys, "perturb", tmp_path / "r.csv", "-o", tmp_path / "rp.csv", "--report", tmp_path / "rep.json")
    code, out, _ = run(capsys, "cyclecover", tmp_path / "rp.csv")
    doc = json.loads(out)
    assert doc["r"] == 0 and sorted(len(c) for c in doc["cycles"]) == [3, 3, 3]


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1,1.0\n1,2,oops\n")
    code, _, err = run(capsys, "cyclecover", bad)
    assert code == EXIT_PARSE and "line 2" in err
    code, _, _ = run(capsys, "cyclecover", tmp_path / "missing.csv")
    assert code == EXIT_PARSE


def test_env_and_flag_precedence(capsys, files, monkeypatch):
    monkeypatch.setenv("GRAPHPHASE_WEIGHT", "8")
    _, _, err = run(capsys, "perturb", files / "p3.csv", "-o", files / "out.csv")
    assert json.loads(err)["added_edges"] == [[2, 0, 8.0]]
    _, _, err = run(capsys, "perturb", files / "p3.csv", "-o", files / "out.csv", "--weight", 2)
    assert json.loads(err)["added_edges"] == [[2, 0, 2.0]]
    monkeypatch.setenv("GRAPHPHASE_WEIGHT", "heavy")
    code, _, _ = run(capsys, "perturb", files / "p3.csv")
    assert code == EXIT_USAGE


def test_invalid_tolerance_flag(capsys, files):
    code, _, _ = run(capsys, "perturb", files / "p3.csv", "--tol-zero", 0)
    assert code == EXIT_USAGE


def test_outputs_are_deterministic(capsys, files):
    outs = [run(capsys, "analyze", files / "c8.csv", files / "cos.csv", "--format", "json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "signal", "noise", "--n", 5, "--seed", 3)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert run(capsys, "signal", "noise", "--n", 5, "--seed", 4)[1] != outs[0]


def test_spectrum_command(capsys, files):
    code, out, _ = run(capsys, "spectrum", files / "p3.csv")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["is_invertible"] is False


def test_experiment_grid_json(capsys, tmp_path):
    code, out, err = run(capsys, "experiment", "grid", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["added_edges"] == []
    assert json.loads(err)["added_edge_count"] == 0


def test_experiment_rosace_csv(capsys, tmp_path):
    series = tmp_path / "hubs.csv"
    code, out, err = run(capsys, "experiment", "rosace", "--hubs", 5, "--fan", 6, "--series-output", series)
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("fan,amplitude,amplitude_truth")
    assert len(out.splitlines()) == 6
    assert series.read_text().splitlines()[0] == "hub,hub_amplitude,hub_phase,hub_omega"
    assert len(json.loads(err)["added_edges"]) == 5


def test_console_script_entry_point(tmp_path):
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "graphphase.cli", "gen", "path", "--n", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "1,2,1.0"
