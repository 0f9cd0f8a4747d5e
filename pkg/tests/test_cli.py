import json
import math
from pathlib import Path

import numpy as np
import pytest

from steklab import cli, write_off, icosphere
from steklab.checks import CheckReport, SuiteReport

DATA = Path(__file__).parent / "data"


def _assert_json_close(actual, expected, path="$"):
    """Structure and strings exact; numbers to tolerance (kernel flavors and
    BLAS builds wiggle the last few digits)."""
    if isinstance(expected, dict):
        assert isinstance(actual, dict) and actual.keys() == expected.keys(), path
        for k in expected:
            _assert_json_close(actual[k], expected[k], f"{path}.{k}")
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), path
        for i, (a, e) in enumerate(zip(actual, expected)):
            _assert_json_close(a, e, f"{path}[{i}]")
    elif isinstance(expected, bool) or not isinstance(expected, (int, float)):
        assert actual == expected, path
    else:
        assert actual == pytest.approx(expected, rel=1e-6, abs=1e-9), path


def test_check_matches_golden(tmp_path):
    out = tmp_path / "disk1.json"
    assert cli.main(["check", "--domain", "disk:1", "--output", str(out)]) == 0
    actual = json.loads(out.read_text())
    expected = json.loads((DATA / "disk1_check.json").read_text())
    _assert_json_close(actual, expected)


def test_check_csv_format(capsys):
    assert cli.main(["check", "--domain", "disk:1", "--checks", "BROCK,STEK_SUM",
                     "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "param,check_id,lhs,rhs,slack,rel_slack,err,status"
    assert len(lines) == 3
    assert lines[1].startswith("disk:1,BROCK,")


def test_check_exit_codes_for_violations(monkeypatch, capsys):
    def fake_suite(conjecture):
        rep = CheckReport(
            id="CONJ_2_1" if conjecture else "BROCK",
            lhs=3.0, rhs=1.0, slack=-2.0, rel_slack=-2.0, err=1e-9,
            status="fail", conjecture=conjecture, digest="0" * 12,
        )
        return SuiteReport(
            domain="disk:1", reports=(rep,), failures=(),
            environment={}, params={}, spectra={}, geometry=None,
        )

    for conjecture, code in ((False, 2), (True, 3)):
        monkeypatch.setattr(cli, "run_suite", lambda *a, **k: fake_suite(conjecture))
        assert cli.main(["check", "--domain", "disk:1", "--format", "csv"]) == code
        capsys.readouterr()


def test_usage_errors_exit_1(tmp_path, capsys):
    assert cli.main(["check", "--domain", "triangle:1"]) == 1
    assert cli.main(["check", "--domain", "disk:-2"]) == 1
    assert cli.main(["check", "--domain", "disk:1", "--checks", "NOPE"]) == 1
    assert cli.main(["converge", "--domain", "disk:1", "--problem", "steklov",
                     "--orders", "16:8:4"]) == 1
    assert cli.main(["mesh-check"]) == 1
    assert cli.main(["mesh-check", "--mesh", str(tmp_path / "missing.off")]) == 1
    assert cli.main(["sweep", "--family", "torus:1,2,3"]) == 1
    capsys.readouterr()


def test_ball_text_table(capsys):
    assert cli.main(["ball", "--problem", "steklov", "--dim", "3",
                     "--radius", "0.5"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[0] == "problem=steklov dim=3 radius=0.5"
    assert out[1] == "k=1 eigenvalue=2 multiplicity=3"


def test_ball_json_table(capsys):
    assert cli.main(["ball", "--problem", "laplace", "--dim", "2",
                     "--radius", "2", "--kmax", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["version"] == 1
    assert doc["config"]["command"] == "ball"
    assert doc["table"] == [
        {"k": 1, "eigenvalue": 0.25, "multiplicity": 2},
        {"k": 2, "eigenvalue": 1.0, "multiplicity": 2},
    ]


def test_converge_json_is_stable_at_high_order(capsys):
    assert cli.main(["converge", "--domain", "ellipse:1.4,0.714285714286",
                     "--problem", "steklov", "--orders", "12:24:4",
                     "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    rows = doc["table"]
    assert [r["k_order"] for r in rows] == [12, 16, 20, 24]
    last, prev = rows[-1]["eigenvalues"], rows[-2]["eigenvalues"]
    np.testing.assert_allclose(last, prev, rtol=1e-8)

    import oracles

    ref = oracles.steklov_nystrom(
        oracles.ellipse_curve(1.4, 1 / 1.4), m=96, count=len(last)
    )
    np.testing.assert_allclose(last, ref, rtol=1e-6)


def test_sweep_csv_output_file(tmp_path):
    out = tmp_path / "fam.csv"
    assert cli.main(["sweep", "--family", "ellipse:1,1.1,3",
                     "--checks", "STEK_SUM", "--output", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "param,check_id,lhs,rhs,slack,rel_slack,err,status"
    assert len(lines) == 4
    params = [float(line.split(",")[0]) for line in lines[1:]]
    assert params == [1.0, 1.05, 1.1]


def test_sweep_pdisk_and_fourier_families(capsys):
    assert cli.main(["sweep", "--family", "pdisk:0,0.1,2,3",
                     "--checks", "BROCK", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert cli.main(["sweep", "--family", "fourier:2,0.08,11",
                     "--checks", "BROCK", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3


def test_mesh_check_icosphere(capsys):
    assert cli.main(["mesh-check", "--icosphere", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    ids = [c["id"] for c in doc["checks"]]
    assert ids == ["REILLY", "T1_SUM", "T1_CURV", "CONJ_2_1", "REM_2_2"]
    assert all(c["status"] in ("pass", "inconclusive") for c in doc["checks"])
    assert doc["geometry"]["h_max"] > 0


def test_mesh_check_off_file(tmp_path, capsys):
    path = tmp_path / "sphere.off"
    write_off(icosphere(2, radius=2.0), path)
    assert cli.main(["mesh-check", "--mesh", str(path), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "param,check_id,lhs,rhs,slack,rel_slack,err,status"
    # Sphere of radius 2: sum of the first three eigenvalues is 3 * 2 / 4.
    t1 = [line for line in lines[1:] if ",T1_SUM," in line][0]
    assert float(t1.split(",")[2]) == pytest.approx(1.5, rel=2e-2)


def test_check_with_density_and_knobs(capsys):
    assert cli.main(["check", "--domain", "disk:1", "--rho", "cos:1,0.3,2",
                     "--checks", "T41_WEIGHTED,WEIGHTED_PROD",
                     "-K", "12", "-N", "256", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert all(line.endswith(("pass", "inconclusive")) for line in lines[1:])


def test_round_tripped_numbers_have_12_digits():
    assert cli._r12(math.pi) == 3.14159265359
    assert cli._r12(1.0) == 1.0
    assert cli._r12(-2.5e-17) == -2.5e-17
