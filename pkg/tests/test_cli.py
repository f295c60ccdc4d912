import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from adaptometry.cli import main
from adaptometry.panel import TimeSeriesPanel, load_panel, write_panel


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        return main([str(a) for a in argv])

    return _run


@pytest.fixture
def panel6(run, tmp_path):
    assert run("simulate", "--option", 6, "--seed", 7, "--out", "p6.csv") == 0
    return tmp_path / "p6.csv"


def test_simulate_is_deterministic(run, tmp_path):
    assert run("simulate", "--option", 6, "--seed", 7, "--out", "a.csv") == 0
    assert run("simulate", "--option", 6, "--seed", 7, "--out", "b.csv") == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    p = load_panel(tmp_path / "a.csv")
    assert (p.n, p.T) == (200, 62)
    manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert manifest["seed"] == 7
    assert manifest["config"]["option"]["logging_volume"] == 1000
    assert manifest["config"]["sim"]["n_parameters"] == 200
    assert {"version", "timestamp", "argv", "inputs", "outputs"} <= set(manifest)


def test_simulate_overrides_and_config(run, tmp_path):
    (tmp_path / "s.cfg").write_text("id = 3\nnoise_scale = 0.1\n")
    assert run("simulate", "--config", "s.cfg", "--n", 30, "--horizon", 40, "--out", "c.csv") == 0
    p = load_panel(tmp_path / "c.csv")
    assert (p.n, p.T) == (30, 40)
    manifest = json.loads((tmp_path / "c.csv.manifest.json").read_text())
    assert manifest["config"]["option"]["id"] == 3
    assert manifest["config"]["sim"]["noise_scale"] == 0.1


def test_simulate_errors(run, tmp_path, capsys):
    assert run("simulate", "--option", 9, "--out", "x.csv") == 1
    assert run("simulate", "--option", 4, "--horizon", 10, "--out", "x.csv") == 1
    assert "horizon < products_sale_start (27)" in capsys.readouterr().err
    assert run("simulate", "--out", "x.csv") == 1
    assert run("simulate", "--option", 1, "--out", tmp_path / "missing" / "x.csv") == 2
    (tmp_path / "bad.cfg").write_text("colour = blue\n")
    assert run("simulate", "--config", "bad.cfg", "--out", "x.csv") == 1
    assert not (tmp_path / "x.csv").exists()


def test_analyze_outputs(run, tmp_path, panel6):
    assert run("analyze", "--panel", panel6, "--out", "a6", "--svg") == 0
    out = tmp_path / "a6"
    report = json.loads((out / "report.json").read_text())
    assert report["scenario_id"] == 6
    assert report["k"] == 12 and report["mode"] == "per_tick"
    assert report["threshold"] == {"mode": "significance", "value_at_k": 0.575983}
    assert report["ticks_analyzed"] == 50 and report["n"] == 200
    with open(out / "g_dynamics.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "G"]
    assert [int(r[0]) for r in rows[1:]] == list(range(13, 63))
    # cross-file check: the raw total is the sum of the dynamics column
    assert sum(float(r[1]) for r in rows[1:]) == pytest.approx(report["g_total"]["raw"], rel=1e-5)
    assert report["g_total"]["per_tick"] == pytest.approx(report["g_total"]["raw"] / 50, rel=1e-5)
    surface = (out / "gi_surface.csv").read_text().splitlines()
    assert len(surface) == 51 and surface[0].startswith("t,env.exchange_rate,")
    assert (out / "g_dynamics.svg").read_text().count("<polyline") == 1
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["window"] == 12
    assert manifest["config"]["threshold"]["alpha"] == 0.05


def test_analyze_scenario_id_falls_back_to_stem(run, tmp_path):
    rng = np.random.default_rng(0)
    write_panel(TimeSeriesPanel.from_arrays(list("abcd"), range(1, 21), rng.normal(size=(4, 20))),
                tmp_path / "plant.csv")
    assert run("analyze", "--panel", "plant.csv", "--window", 5, "--mode", "raw", "--out", "r") == 0
    report = json.loads((tmp_path / "r" / "report.json").read_text())
    assert report["scenario_id"] == "plant" and report["mode"] == "raw"


def test_analyze_errors(run, tmp_path, panel6, capsys):
    assert run("analyze", "--panel", panel6, "--alpha", 0.1, "--threshold", 0.5, "--out", "z") == 1
    assert run("analyze", "--panel", panel6, "--threshold", 1.5, "--out", "z") == 1
    assert "threshold must lie in [0,1]" in capsys.readouterr().err
    assert run("analyze", "--panel", panel6, "--window", 2, "--out", "z") == 1
    assert run("analyze", "--panel", panel6, "--mode", "weird", "--out", "z") == 1
    assert run("analyze", "--panel", "nope.csv", "--out", "z") == 2
    (tmp_path / "bad.csv").write_text("t,a,b\n1,1,2\n2,3,x\n")
    assert run("analyze", "--panel", "bad.csv", "--window", 3, "--out", "z") == 2
    assert "(row 3, column 3)" in capsys.readouterr().err


def test_graph(run, tmp_path, panel6):
    assert run("graph", "--panel", panel6, "--t", 35, "--out", "g35.dot") == 0
    assert run("graph", "--panel", panel6, "--t", 18, "--out", "g18.dot") == 0
    shocked = (tmp_path / "g35.dot").read_text()
    calm = (tmp_path / "g18.dot").read_text()
    assert shocked.startswith("graph {\n") and shocked.endswith("}\n")
    assert shocked.count(" -- ") > calm.count(" -- ")
    assert (tmp_path / "g35.dot.manifest.json").exists()


def test_graph_independent_noise_has_no_edges(run, tmp_path):
    rng = np.random.default_rng(4)
    write_panel(TimeSeriesPanel.from_arrays(list("abcde"), range(1, 31), rng.normal(size=(5, 30))),
                tmp_path / "noise.csv")
    assert run("graph", "--panel", "noise.csv", "--t", 20, "--threshold", 1.0, "--out", "n.dot") == 0
    text = (tmp_path / "n.dot").read_text()
    assert " -- " not in text
    assert text.count(";") == 5


def test_graph_errors(run, panel6):
    assert run("graph", "--panel", panel6, "--t", "abc", "--out", "g.dot") == 1
    assert run("graph", "--panel", panel6, "--t", 5, "--out", "g.dot") == 2


def _analyze_all(run, options=range(1, 7), mode="per_tick"):
    for o in options:
        assert run("simulate", "--option", o, "--seed", 3, "--n", 40, "--out", f"p{o}.csv") == 0
        assert run("analyze", "--panel", f"p{o}.csv", "--mode", mode, "--out", f"a{o}") == 0
    return [f"a{o}/report.json" for o in options]


def test_compare(run, tmp_path):
    reports = _analyze_all(run)
    assert run("compare", "--reports", *reports, "--out", "cmp.json") == 0
    doc = json.loads((tmp_path / "cmp.json").read_text())
    assert doc["objective"] == "min" and doc["mode"] == "per_tick"
    assert sorted(o["rank"] for o in doc["options"]) == [1, 2, 3, 4, 5, 6]
    assert sorted(o["id"] for o in doc["options"]) == [1, 2, 3, 4, 5, 6]
    assert all(o["regimes"] for o in doc["options"])
    assert run("compare", "--reports", reports[0], "--out", "one.json") == 0
    one = json.loads((tmp_path / "one.json").read_text())
    assert one["options"][0]["rank"] == 1 and one["options"][0]["delta"] is None


def test_compare_published_values_max(run, tmp_path):
    paths = []
    for i, g in {1: 186.6, 2: 161.7, 3: 162.0, 4: 162.8, 5: 162.5, 6: 166.5}.items():
        doc = {"scenario_id": i, "g_total": {"raw": g, "per_tick": g, "per_cell": g}, "per_tick": [],
               "mode": "per_tick"}
        (tmp_path / f"r{i}.json").write_text(json.dumps(doc))
        paths.append(f"r{i}.json")
    assert run("compare", "--reports", *paths, "--objective", "max", "--out", "c.json") == 0
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["options"][0]["id"] == 1 and doc["options"][0]["g_total"] == 186.6


def test_compare_mixed_modes(run, tmp_path):
    r1 = _analyze_all(run, [1], mode="raw")
    r2 = _analyze_all(run, [2], mode="per_cell")
    assert run("compare", "--reports", *r1, *r2, "--out", "c.json") == 1
    assert run("compare", "--reports", *r1, *r2, "--mode", "per_cell", "--out", "c.json") == 0
    assert json.loads((tmp_path / "c.json").read_text())["mode"] == "per_cell"


def test_compare_errors(run, tmp_path):
    (tmp_path / "junk.json").write_text("{not json")
    assert run("compare", "--reports", "junk.json", "--out", "c.json") == 2
    assert run("compare", "--reports", "missing.json", "--out", "c.json") == 2
    assert run("compare", "--out", "c.json") == 1


def _snapshot(root):
    files = {}
    for dirpath, _, names in os.walk(root):
        for name in names:
            path = os.path.join(dirpath, name)
            data = open(path, "rb").read()
            if name.endswith("manifest.json"):
                doc = json.loads(data)
                doc.pop("timestamp")
                data = json.dumps(doc, sort_keys=True).encode()
            files[os.path.relpath(path, root)] = data
    return files


def test_replay_reproduces_outputs(run, tmp_path, panel6):
    assert run("analyze", "--panel", panel6, "--out", "a6") == 0
    first = _snapshot(tmp_path)
    assert run("replay", "--manifest", "a6/manifest.json") == 0
    assert run("replay", "--manifest", "p6.csv.manifest.json") == 0
    assert _snapshot(tmp_path) == first
    assert run("replay", "--manifest", "p6.csv") == 2


def test_help_and_usage(run, capsys):
    for cmd in ("simulate", "analyze", "graph", "compare", "replay"):
        assert run(cmd, "--help") == 0
    assert "--window" in capsys.readouterr().out
    assert run() == 1
    assert run("frobnicate") == 1


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "adaptometry.cli", "simulate", "--option", "0",
                           "--out", str(tmp_path / "x.csv")], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "option id must be 1..6" in proc.stderr
