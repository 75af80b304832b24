import hashlib
import json
import subprocess
import sys

import pytest

from geomgraph.cli import main
from geomgraph.generators import naive_oracle, rule_for
from geomgraph.io import load_instance


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_generate_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        code, out, _ = run(["generate", "--model", "vrg", "--n", "100", "--a", "1.2", "--b", "0.5",
                            "--seed", "7", "--out", str(p)], capsys)
        assert code == 0
        assert out.startswith("n=100 m=") and out.strip().endswith("seed=7")
    assert a.read_bytes() == b.read_bytes()


def test_generate_odd_gbm_fails(tmp_path, capsys):
    code, _, err = run(["generate", "--model", "gbm", "--n", "101", "--a", "3", "--b", "1",
                        "--out", str(tmp_path / "x.json")], capsys)
    assert code == 2 and "even" in err


def test_generate_rag_round_trip(tmp_path, capsys):
    path, edges = tmp_path / "r.json", tmp_path / "r.txt"
    code, _, _ = run(["generate", "--model", "rag", "--t", "2", "--n", "50", "--a", "5", "--b", "1",
                      "--seed", "1", "--out", str(path), "--edges", str(edges)], capsys)
    assert code == 0
    inst = load_instance(path)
    assert inst.graph == naive_oracle(inst.positions, rule_for(inst))
    assert edges.read_text().splitlines()[0] == f"50 {inst.graph.edge_count}"


def test_generate_absolute_radii(tmp_path, capsys):
    path = tmp_path / "v.json"
    run(["generate", "--model", "vrg", "--n", "50", "--a", "0.2", "--b", "0.1", "--absolute-radii",
         "--out", str(path)], capsys)
    assert load_instance(path).params == {"r1": 0.1, "r2": 0.2}


def test_thresholds_table(tmp_path, capsys):
    csv_path = tmp_path / "t.csv"
    code, out, _ = run(["thresholds", "--csv", str(csv_path)], capsys)
    assert code == 0 and out == csv_path.read_text()
    rows = [line.split(",") for line in out.splitlines()]
    assert rows[0] == ["b", "t1", "t2", "min_a"]
    got = [float(r[3]) for r in rows[1:]]
    for value, expected in zip(got, (3.18, 8.96, 12.63, 15.9, 18.98, 21.93, 24.78, 27.57)):
        assert value == pytest.approx(expected, abs=0.05)
    assert rows[1][2] == ""  # no t2 for b = 0.01
    assert float(rows[2][1]) == pytest.approx(2.31, abs=0.01)
    assert float(rows[2][2]) == pytest.approx(1.62, abs=0.01)
    _, again, _ = run(["thresholds"], capsys)
    assert again == out


def test_thresholds_rejects_nonpositive_b(capsys):
    assert run(["thresholds", "--b", "1", "0"], capsys)[0] == 2
    assert run(["thresholds", "--b", "-2"], capsys)[0] == 2


def test_regime_lines(capsys):
    assert run(["regime", "vrg", "--a", "1.2", "--b", "0.5"], capsys)[1] == "InRegime margin=0.2\n"
    assert run(["regime", "rag-isolated", "--t", "2", "--a", "3", "--b", "2"], capsys)[1].startswith("OutOfRegime")
    assert run(["regime", "vrg", "--a", "1.0", "--b", "0.3"], capsys)[1].startswith("Boundary")
    assert run(["regime", "rag-connected", "--t", "1", "--a", "80", "--b", "1"], capsys)[1] == "Sufficient\n"
    assert run(["regime", "vrg-union", "--c", "0.4", "--b", "0.7", "--a", "1.0"], capsys)[1] == "Inconclusive\n"
    assert run(["regime", "gbm", "--a", "9", "--b", "1"], capsys)[1].startswith("Guaranteed")
    assert run(["regime", "vrg", "--a", "1.0"], capsys)[0] == 2


def test_regime_unknown_selector(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["regime", "sbm", "--a", "1", "--b", "0"])
    assert exc.value.code == 2


def test_recover_pipeline(tmp_path, capsys):
    inst, labels = tmp_path / "g.json", tmp_path / "labels.txt"
    run(["generate", "--model", "gbm", "--n", "1000", "--a", "12", "--b", "1", "--seed", "2",
         "--out", str(inst)], capsys)
    code, out, _ = run(["recover", "--instance", str(inst), "--out", str(labels)], capsys)
    assert code == 0
    metrics = out.splitlines()[-1]
    assert metrics.startswith("accuracy=") and " exact=" in metrics
    assert len(labels.read_text().split()) == 1000
    first = digest(labels)
    run(["recover", "--instance", str(inst), "--out", str(labels)], capsys)
    assert digest(labels) == first
    code, out, _ = run(["recover", "--instance", str(inst), "--mode", "with-locations", "--out", str(labels)], capsys)
    assert code == 0 and "exact=true" in out


def test_recover_without_truth(tmp_path, capsys):
    inst, labels = tmp_path / "g.json", tmp_path / "labels.txt"
    run(["generate", "--model", "gbm", "--n", "200", "--a", "12", "--b", "1", "--out", str(inst)], capsys)
    data = json.loads(inst.read_text())
    data["truth"] = None
    inst.write_text(json.dumps(data))
    code, out, _ = run(["recover", "--instance", str(inst), "--out", str(labels)], capsys)
    assert code == 0 and "accuracy" not in out
    assert len(labels.read_text().split()) == 200


def test_recover_model_mismatch(tmp_path, capsys):
    inst = tmp_path / "v.json"
    run(["generate", "--model", "vrg", "--n", "50", "--a", "1.2", "--b", "0.5", "--out", str(inst)], capsys)
    assert run(["recover", "--instance", str(inst), "--out", str(tmp_path / "l.txt")], capsys)[0] == 2
    gt = tmp_path / "t.json"
    run(["generate", "--model", "gbmt", "--t", "2", "--n", "50", "--a", "6", "--b", "2", "--out", str(gt)], capsys)
    assert run(["recover", "--instance", str(gt), "--mode", "with-locations",
                "--out", str(tmp_path / "l.txt")], capsys)[0] == 2


def test_analyze(tmp_path, capsys):
    inst = tmp_path / "v.json"
    run(["generate", "--model", "vrg", "--n", "300", "--a", "2", "--b", "0.2", "--seed", "3", "--out", str(inst)], capsys)
    code, out, _ = run(["analyze", "--instance", str(inst)], capsys)
    assert code == 0
    assert "components=" in out and "isolated=" in out and "degree_mean=" in out
    assert run(["analyze", "--instance", str(tmp_path / "nope.json")], capsys)[0] == 3


def test_sweep_bytes_stable_across_workers(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "vrg", "grid": {"n": [1000], "a": [1.5, 2.5], "b": [0.2, 1.2]},
                               "trials": 2, "master_seed": 5, "measure": "Connectivity"}))
    outs = []
    for k, workers in enumerate(("1", "1", "3")):
        out = tmp_path / f"s{k}.csv"
        code, _, _ = run(["sweep", str(cfg), "--out", str(out), "--workers", workers], capsys)
        assert code == 0
        outs.append((out.read_bytes(), (tmp_path / f"s{k}_summary.csv").read_bytes()))
    assert outs[0] == outs[1] == outs[2]
    assert len(outs[0][0].splitlines()) == 1 + 8


def test_sweep_invalid_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "vrg", "grid": {"n": [100]}, "trials": 1, "master_seed": 0,
                               "measure": "Connectivity"}))
    assert run(["sweep", str(cfg), "--out", str(tmp_path / "o.csv")], capsys)[0] == 2
    cfg.write_text("[1, 2")
    assert run(["sweep", str(cfg), "--out", str(tmp_path / "o.csv")], capsys)[0] == 2
    assert run(["sweep", str(tmp_path / "none.json")], capsys)[0] == 3


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "geomgraph.cli", "regime", "vrg", "--a", "1.2", "--b", "0.5"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "InRegime margin=0.2\n"
    bad = subprocess.run([sys.executable, "-m", "geomgraph.cli", "generate", "--model", "gbm", "--n", "101",
                          "--a", "3", "--b", "1", "--out", str(tmp_path / "x.json")], capture_output=True)
    assert bad.returncode == 2
