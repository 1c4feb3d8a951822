import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from schlafli import cli


def run(*argv):
    out = io.StringIO()
    try:
        code = cli.main(list(argv), out)
    except SystemExit as exc:
        code = exc.code
    return code, out.getvalue()


def test_tetra_json():
    code, text = run("tetra", "--edges", "1,1,1,1,1,1")
    assert code == 0
    rec = json.loads(text)
    assert rec["class"] == "NONDEGENERATE"
    assert rec["S"] == pytest.approx(6 * np.arccos(-1 / 3))


def test_tetra_json_array_edges():
    code, text = run("tetra", "--edges", "[2, 2, 2, 2, 2, 2]", "--orientation", "-1")
    assert code == 0 and json.loads(text)["volume"] < 0


def test_tetra_nonexistent_is_domain_error(capsys):
    code, _ = run("tetra", "--edges", "1,1,1,1,1,10")
    assert code == 2
    assert "NonexistentTetrahedron" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ("tetra", "--edges", "1,1,1"),
        ("tetra", "--edges", "a,b,c,d,e,f"),
        ("tetra",),
        ("sixj", "--j", "1,1,1,1,1,1/3"),
        ("nosuch",),
        ("character", "--format", "xml"),
        ("stokes", "--base", "1,1,1,1,1,1"),
    ],
)
def test_usage_errors(argv):
    code, _ = run(*argv)
    assert code == 1


def test_sixj_exact():
    code, text = run("sixj", "--j", "1,1,1,1,1,1")
    assert code == 0
    assert json.loads(text)["exact"] == "1/6"


def test_sixj_both():
    code, text = run("sixj", "--j", "5,5,5,5,5,5", "--exact", "--asym", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["exact", "value", "asym", "amplitude"]


def test_sixj_caustic_is_domain_error():
    code, _ = run("sixj", "--j", "1/2,1/2,1,1/2,1/2,1", "--asym")
    assert code == 2


def test_sixj_sweep_csv():
    code, text = run("sixj", "--j", "1,1,1,1,1,1", "--sweep", "5:8")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["k", "exact", "asym", "abs_err", "rel_err_vs_amplitude"]
    assert [r[0] for r in rows[1:]] == ["5", "6", "7", "8"]


def test_stokes_csv_columns():
    code, text = run("stokes", "--base", "1,1,1,1,1,1", "--direction", "1,0,0,0,0,0",
                     "--lambda0", "0", "--lambda1", "0.05", "--n", "10", "--n-alpha", "20")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["lambda", "S", "psi_1", "psi_2", "psi_3", "psi_4", "psi_5", "psi_6", "residual"]
    assert len(rows) == 12


def test_stokes_spec_file(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps({"base": [1] * 6, "direction": [1] * 6, "lambda0": 0, "lambda1": 0.1, "n": 8}))
    code, text = run("stokes", "--sweep-spec", str(spec), "--format", "json", "--n-alpha", "20")
    assert code == 0
    assert json.loads(text)["spec"]["n"] == 8


def test_stokes_bad_spec_file(tmp_path):
    spec = tmp_path / "sweep.json"
    spec.write_text("{not json")
    assert run("stokes", "--sweep-spec", str(spec))[0] == 1


def test_stokes_leaving_region():
    code, _ = run("stokes", "--base", "1,1,1,1,1,1", "--direction", "1,0,0,0,0,0",
                  "--lambda0", "0", "--lambda1", "2", "--n", "10")
    assert code == 2


def test_contour():
    code, text = run("contour", "--edges", "1,1,1,1,1,1", "--n", "2000")
    rec = json.loads(text)
    assert code == 0
    assert rec["actions"]["leg3"][0] == pytest.approx(2 * rec["S"], abs=1e-4)


def test_reduce_edges_and_config(tmp_path):
    code, text = run("reduce", "--edges", "1,1,1,1,1,1")
    assert code == 0
    pts = json.loads(text)["points"]
    assert len(pts) == 6
    from schlafli import contour as ct, geometry as geo

    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(ct.build_config(geo.embed(np.ones(6))).to_dict()))
    code, text2 = run("reduce", "--config", str(cfg))
    assert code == 0 and json.loads(text2) == json.loads(text)


def test_reduce_bad_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"z": [[[1, 0], [0, 0]]], "zp": []}))
    assert run("reduce", "--config", str(cfg))[0] == 1
    assert run("reduce")[0] == 1


def test_character_csv():
    code, text = run("character", "--j-max", "1", "--n-phi", "5")
    rows = list(csv.reader(io.StringIO(text)))
    assert code == 0 and rows[0] == ["j", "phi", "chi"] and len(rows) == 1 + 3 * 5


@pytest.mark.parametrize("demo", ["coproduct", "diangle", "triangle"])
def test_qgroup(demo):
    code, text = run("qgroup", demo, "--J1", "0.3,0.1,-0.2")
    assert code == 0
    rec = json.loads(text)
    if demo == "diangle":
        assert rec["total"]["Jz"] == 0 and rec["total"]["Jminus"] == [0, 0]


def test_schlafli_single():
    code, text = run("schlafli", "--edges", "1,1,1,1,1,1")
    assert code == 0
    assert json.loads(text)["schlafli_residual"] < 1e-6


def test_determinism():
    a = run("qgroup", "triangle", "--seed", "7")
    b = run("qgroup", "triangle", "--seed", "7")
    assert a == b
    a = run("schlafli", "--samples", "3", "--seed", "4")
    assert a == run("schlafli", "--samples", "3", "--seed", "4")


def test_acceptance_subset():
    code, text = run("acceptance", "--only", "8,11")
    rec = json.loads(text)
    assert code == 0 and rec["all_passed"]
    assert [c["number"] for c in rec["checks"]] == [8, 11]
    assert "seconds" not in rec["checks"][0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "schlafli", "sixj", "--j", "1,1,1,1,1,1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["exact"] == "1/6"
