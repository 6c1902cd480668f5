import json
import os
import re
import subprocess
import sys

import numpy as np
import pytest

from ctpvis.bundle import MapBundle, read_bundle, write_bundle
from ctpvis.cli import main
from ctpvis.environments.terrain import format_heightmap
from ctpvis.graph import Graph, VisibilityMap


def run(*argv):
    return main([str(a) for a in argv])


def files(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_generate_is_byte_identical(tmp_path, capsys):
    assert run("generate", "--preset", "standard", "--seed", 7, "--out", tmp_path / "a") == 0
    assert run("generate", "--preset", "standard", "--seed", 7, "--out", tmp_path / "b") == 0
    assert files(tmp_path / "a") == files(tmp_path / "b")
    out = capsys.readouterr().out
    assert re.search(r"nodes=144 edges=\d+ chokepoints=\d+", out)


def test_generate_six_on_small_grid_fails(tmp_path, capsys):
    assert run("generate", "--preset", "six", "--grid", 12, "--out", tmp_path / "x") == 2
    assert "too small" in capsys.readouterr().err


def test_generate_dense_manifest(tmp_path):
    assert run("generate", "--preset", "dense", "--seed", 1, "--out", tmp_path / "d") == 0
    manifest = json.loads((tmp_path / "d" / "manifest.json").read_text())
    assert 21 <= manifest["chokepoints"] <= 24
    assert len(manifest["blockage"]["groups"]) == manifest["chokepoints"]


def test_generate_builtin_round_trip(tmp_path, plateau_map):
    assert run("generate", "--builtin", "--out", tmp_path / "p") == 0
    b = read_bundle(tmp_path / "p")
    assert b.graph == plateau_map.graph and b.vis == plateau_map.vis
    assert b.blockable == plateau_map.chokepoints and b.manifest["generator"]["version"] == "plateau-v1"


@pytest.fixture
def heightmap_file(tmp_path):
    rng = np.random.default_rng(3)
    path = tmp_path / "hm.txt"
    path.write_text(format_heightmap(rng.uniform(200, 260, (8, 8))))
    return path


def test_generate_heightmap(tmp_path, heightmap_file, capsys):
    assert run("generate", "--heightmap", heightmap_file, "--oval", "3,3,1,1", "--out", tmp_path / "t") == 0
    b = read_bundle(tmp_path / "t")
    assert b.kind == "terrain" and len(b.groups) == 1 and (tmp_path / "t" / "heightmap.txt").exists()
    assert "ovals=1" in capsys.readouterr().out
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2\n1 2 3\n")
    assert run("generate", "--heightmap", bad, "--out", tmp_path / "u") == 2


def test_usage_errors(tmp_path):
    assert run("run", "--lambdas", "", "--seeds", 2, "--out", tmp_path) == 1
    assert run("sweep", "--lambdas", "", "--ps", "0.5", "--out", tmp_path) == 1
    assert run("run", "--ps", "2", "--out", tmp_path) == 1
    cfg = tmp_path / "c.json"
    cfg.write_text('{"lamdas": [3]}')
    assert run("run", "--config", cfg) == 1
    with pytest.raises(SystemExit) as exc:
        run("run", "--no-such-flag")
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run()
    assert exc.value.code == 1


def test_run_with_config_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"lambdas": [0, 3], "n_seeds": 50, "ps": [0.5]}))
    out = tmp_path / "r"
    assert run("run", "--config", cfg, "--seeds", 4, "--out", out) == 0
    embedded = json.loads((out / "config.json").read_text())
    assert embedded["n_seeds"] == 4 and embedded["lambdas"] == [0, 3]
    assert "lambda=3" in capsys.readouterr().out


def test_sweep_cell_matches_run(tmp_path):
    common = ["--seeds", 3, "--map", "procedural", "--grid", 12, "--map-seed", 2]
    assert run("sweep", "--lambdas", "0,3", "--ps", "0.2,0.5", *common, "--out", tmp_path / "s") == 0
    assert run("run", "--lambdas", "3", "--ps", "0.5", "--no-sp", *common, "--out", tmp_path / "r") == 0
    sweep = (tmp_path / "s" / "trials.csv").read_text().splitlines()
    single = (tmp_path / "r" / "trials.csv").read_text().splitlines()
    assert single[1:] == [x for x in sweep if x.startswith("lambda=3,3.0,0.5,")]
    assert (tmp_path / "s" / "grid.txt").read_text().splitlines()[0].split() == ["p", "SP", "lambda=0", "lambda=3"]


def test_all_failed_cell_exits_3(tmp_path, capsys):
    g = Graph(3, [(0, 1, 1, 1), (1, 2, 1, 1)])
    bundle = MapBundle(g, VisibilityMap.incident_only(g), 0, 2, 1, 3, "custom", [frozenset({(1, 2)})], 1.0)
    write_bundle(bundle, tmp_path / "b")
    assert run("run", "--bundle", tmp_path / "b", "--seeds", 2, "--out", tmp_path / "r") == 3
    assert "every trial failed" in capsys.readouterr().err


def test_render(tmp_path, heightmap_file):
    b, r, svg = tmp_path / "b", tmp_path / "r", tmp_path / "svg"
    assert run("generate", "--heightmap", heightmap_file, "--oval", "4,4,1,1", "--out", b) == 0
    assert run("run", "--bundle", b, "--ps", "0,1", "--lambdas", "3", "--seeds", 1, "--out", r) == 0
    assert run("render", "--bundle", b, "--trials", r / "trials.jsonl", "--out", svg, "--utility") == 0
    blocked = (svg / "SP_p1_seed0.svg").read_text()
    assert 'class="blocked-region"' in blocked and 'class="blocked"' in blocked
    assert 'class="utility"' in blocked

    clear = (svg / "SP_p0_seed0.svg").read_text()
    assert 'class="blocked' not in clear
    lines = {cls: pts for pts, cls in re.findall(r'<polyline points="([^"]+)"[^>]*class="([a-z-]+)"', clear)}
    assert lines.keys() == {"initial-plan", "trajectory"}
    assert 'stroke-dasharray' in re.search(r'<polyline[^>]*initial-plan[^>]*>', clear).group()
    assert lines["initial-plan"] == lines["trajectory"]

    assert run("render", "--bundle", b, "--trials", r / "trials.jsonl", "--out", tmp_path / "svg2", "--utility") == 0
    assert files(svg) == files(tmp_path / "svg2")


def test_render_rejects_mismatched_bundle(tmp_path, capsys):
    assert run("run", "--seeds", 1, "--lambdas", "0", "--out", tmp_path / "r") == 0
    assert run("generate", "--preset", "standard", "--grid", 14, "--out", tmp_path / "other") == 0
    assert run("render", "--bundle", tmp_path / "other", "--trials", tmp_path / "r" / "trials.jsonl",
               "--out", tmp_path / "svg") == 1
    assert "does not match" in capsys.readouterr().err


def test_module_entry_point_and_worker_env(tmp_path):
    env = dict(os.environ, CTPVIS_WORKERS="2")
    proc = subprocess.run(
        [sys.executable, "-m", "ctpvis", "run", "--seeds", "3", "--lambdas", "3", "--out", str(tmp_path / "r")],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "r" / "trials.csv").exists()
    proc = subprocess.run([sys.executable, "-m", "ctpvis", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 1
