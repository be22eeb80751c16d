import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from conftest import SAMPLES
from polycurrents.cli import main, parse_levels


def sample(name):
    return os.path.join(SAMPLES, name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_levels():
    assert parse_levels("1..3") == [1, 2, 3]
    assert parse_levels("1,2,4") == [1, 2, 4]
    assert parse_levels("1..2,8") == [1, 2, 8]
    for bad in ("", "0", "a", "3..x"):
        with pytest.raises(Exception):
            parse_levels(bad)


def test_decompose_chain(capsys):
    code, out, err = run(capsys, "decompose", "--input", sample("chain.json"))
    assert code == 0
    doc = json.loads(out)
    assert doc["transport"]["atoms"] == [[1.0, [0, 1, 2, 3]], [1.0, [0, 1]], [1.0, [2, 3]]]
    assert doc["cycle"]["edges"] == []
    assert doc["report"]["passed"] is True
    assert "PASS" in err


def test_decompose_triangle(capsys):
    code, out, _ = run(capsys, "decompose", "--input", sample("triangle.json"))
    doc = json.loads(out)
    assert code == 0
    assert doc["transport"]["atoms"] == []
    assert len(doc["cycle"]["edges"]) == 3 and doc["acyclic_part"]["edges"] == []


def test_decompose_empty(capsys):
    code, out, _ = run(capsys, "decompose", "--input", sample("empty.json"))
    assert code == 0 and json.loads(out)["transport"]["atoms"] == []


def test_transport_diracs(capsys):
    code, out, _ = run(
        capsys, "transport", "--plus", sample("dirac_plus.json"), "--minus", sample("dirac_minus.json"),
        "--space", sample("pair_space.json"),
    )
    assert code == 0
    assert json.loads(out)["w1"] == 5.0


def test_transport_square(capsys):
    code, out, _ = run(
        capsys, "transport", "--plus", sample("square_plus.json"), "--minus", sample("square_minus.json"),
        "--space", sample("square_space.json"),
    )
    doc = json.loads(out)
    assert code == 0 and doc["w1"] == pytest.approx(2.0)
    assert doc["certificate"]["passed"] is True


def test_transport_equal(capsys):
    code, out, _ = run(
        capsys, "transport", "--plus", sample("square_plus.json"), "--minus", sample("square_plus.json"),
        "--space", sample("square_space.json"),
    )
    assert code == 0 and json.loads(out)["w1"] == 0.0


def test_transport_unbalanced(capsys, tmp_path):
    heavy = tmp_path / "heavy.json"
    heavy.write_text('{"atoms": [[0, 2.0]]}')
    out_file = tmp_path / "sol.json"
    code, out, err = run(
        capsys, "transport", "--plus", sample("dirac_plus.json"), "--minus", str(heavy),
        "--space", sample("pair_space.json"), "--out", str(out_file),
    )
    assert code == 1 and "1.0" in err and "2.0" in err
    assert not out_file.exists() and list(tmp_path.iterdir()) == [heavy]


def test_transport_needs_space(capsys):
    code, _, err = run(capsys, "transport", "--plus", sample("dirac_plus.json"), "--minus", sample("dirac_minus.json"))
    assert code == 1 and "space" in err


def test_flatnorm(capsys):
    code, out, _ = run(capsys, "flatnorm", "--input", sample("flat_pair.json"))
    assert code == 0 and json.loads(out)["value"] == pytest.approx(0.5)
    code, out, _ = run(capsys, "flatnorm", "--input", sample("flat_pair.json"), "--creation-cost", "0.1")
    assert json.loads(out)["value"] == pytest.approx(0.2)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spiral(capsys):
    code, out, _ = run(capsys, "spiral", "--levels", "4")
    rows = read_csv(out)
    assert code == 0 and float(rows[0]["eta_mass"]) == 0.25 and float(rows[0]["boundary_tv"]) == pytest.approx(0.5)


def test_approx_zero(capsys):
    code, out, _ = run(capsys, "approx", "--grid", sample("grid_zero.json"), "--levels", "1..3")
    rows = read_csv(out)
    assert code == 0 and len(rows) == 3
    assert all(float(r[k]) == 0.0 for r in rows for k in ("mass_err", "boundary_flat_gap", "correction_mass"))


def test_approx_component_mode(capsys):
    code, out, _ = run(capsys, "approx", "--grid", sample("grid_diagonal.json"), "--levels", "1", "--mode", "component")
    assert float(read_csv(out)[0]["mass_err"]) == pytest.approx(2 - math.sqrt(2), abs=1e-12)


def test_frechet(capsys):
    code, out, _ = run(capsys, "frechet", "--input", sample("curves.json"))
    doc = json.loads(out)
    assert code == 0 and doc["distance"] == pytest.approx(0.25) and doc["lengths"] == [1.0, 1.0]


def test_invalid_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"space": {"kind": "embedded", "points": [[0, 0], [1, 0]]}, "edges": [[0, 1, NaN]]}')
    code, _, err = run(capsys, "decompose", "--input", str(bad))
    assert code == 1 and "$.edges[0][2]" in err
    bad.write_text("{")
    code, _, err = run(capsys, "decompose", "--input", str(bad))
    assert code == 1 and "line 1" in err
    code, _, err = run(capsys, "approx", "--grid", sample("grid_horizontal.json"), "--levels", "40")
    assert code == 1 and "too fine" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["decompose", "--input", "chain.json"],
        ["transport", "--plus", "square_plus.json", "--minus", "square_minus.json", "--space", "square_space.json"],
        ["approx", "--grid", "grid_rotated.json", "--levels", "1..4"],
        ["spiral", "--levels", "1,2,4"],
        ["frechet", "--input", "curves.json"],
        ["flatnorm", "--input", "flat_pair.json"],
    ],
)
def test_byte_identical_outputs(tmp_path, argv):
    argv = [sample(a) if a.endswith(".json") else a for a in argv]
    outputs = []
    for k in range(2):
        target = tmp_path / f"run{k}.out"
        assert main(argv + ["--out", str(target), "--seed", "3"]) == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "polycurrents", "flatnorm", "--input", sample("flat_pair.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == pytest.approx(0.5)


def test_tol_env(monkeypatch, capsys):
    monkeypatch.setenv("POLYCURRENTS_TOL", "1e-6")
    assert run(capsys, "decompose", "--input", sample("chain.json"))[0] == 0
    with pytest.raises(SystemExit):
        main(["decompose", "--input", sample("chain.json"), "--tol", "-1"])
