import json
import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def run(name, *args, cwd=None):
    return subprocess.run([sys.executable, str(SCRIPTS / name), *map(str, args)],
                          capture_output=True, text=True, cwd=cwd, timeout=300)


def test_reproduce_table(tmp_path):
    out = tmp_path / "t.csv"
    r = run("reproduce_table.py", "--max-ell", 2, "--out", out)
    assert r.returncode == 0, r.stderr
    assert "j=1 ok" in r.stdout and out.read_text().startswith("ell,k,group")


def test_ell4_stretch_json():
    r = run("ell4_stretch.py", "--json")
    assert r.returncode == 0, r.stderr
    rows = [json.loads(ln) for ln in r.stdout.splitlines()]
    assert [(x["j"], x["k"]) for x in rows] == [(1, 1), (4, 4)]
    assert rows[0]["histogram"] == {"16191": 1, "63": 49344, "-193": 16191}


@pytest.mark.parametrize("fmt", ["graph6"])
def test_export_pair(tmp_path, fmt):
    r = run("export_k0_k1_graphs.py", "--outdir", tmp_path, "--formats", fmt)
    assert r.returncode == 0, r.stderr
    summary = json.loads((tmp_path / "fingerprints.json").read_text())
    a, b = summary["D_2_1_0"], summary["D_2_1_1"]
    assert a["params"] == b["params"] == [256, 51, 2, 12]
    assert a["triangles"] == b["triangles"] == 4352
    assert (tmp_path / "d_2_1_1.g6").read_bytes()[:4] == b"~?C?"
