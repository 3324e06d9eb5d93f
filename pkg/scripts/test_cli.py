#!/usr/bin/env python3
"""
Command line: reports on stdout and exit codes 0 (success), 1 (input
error) and 2 (failed check or engine error).
"""
import json
import math
import sys
from pathlib import Path

import pytest

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, main
from app.config import settings


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_curve_report(capsys):
    code, out = run(capsys, "curve", "--expr", "cos(t), sin(t), 0", "--t0", "0", "--t1", str(2 * math.pi),
                    "--grid", "5")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["schema"] == settings.SCHEMA_VERSION
    assert data["quantity"] == "k0"
    assert data["value"] == pytest.approx([2.0] * 5, abs=1e-12)


def test_surface_report_as_csv(capsys):
    code, out = run(capsys, "surface", "--u", "x3", "--points", "1,0,0;0,2,0", "--format", "csv")
    assert code == EXIT_OK
    header, *rows = out.splitlines()
    assert header.split(",")[:6] == ["index", "x1", "x2", "x3", "class", "K0"]
    assert [float(r.split(",")[5]) for r in rows] == pytest.approx([-2.0, -0.5], rel=1e-12)


def test_finite_L_needs_L(capsys):
    code, out = run(capsys, "surface", "--u", "x3", "--points", "1,0,0", "--quantity", "KL")
    assert code == EXIT_INPUT
    assert json.loads(out)["error"]["kind"] == "input_error"


def test_parse_error_is_an_input_error(capsys):
    code, out = run(capsys, "surface", "--u", "x3 +", "--points", "1,0,0")
    assert code == EXIT_INPUT
    error = json.loads(out)["error"]
    assert error["kind"] == "parse_error"
    assert "offset" in error


def test_usage_errors(capsys):
    assert run(capsys, "surface", "--u", "x3")[0] == EXIT_INPUT
    assert run(capsys, "curve", "--expr", "t, t, t", "--grid", "x")[0] == EXIT_INPUT
    assert run(capsys)[0] == EXIT_INPUT


def test_characteristic_point_is_an_engine_error(capsys):
    code, out = run(capsys, "surface", "--u", "x3", "--points", "0,0,0")
    assert code == EXIT_CHECK
    assert json.loads(out)["error"]["kind"] == "characteristic_point"


def test_overrides_are_validated(capsys, scene_path):
    code, _ = run(capsys, "gauss-bonnet", "--scene", str(scene_path("planar-off-axis-disk")), "--eps", "0.1,0.2")
    assert code == EXIT_INPUT


def test_overrides_apply(capsys):
    code, _ = run(capsys, "curve", "--expr", "t, 0, 0", "--grid", "3", "--tau-h", "1e-6", "--L", "10,100")
    assert code == EXIT_OK
    assert settings.TAU_H == 1e-6
    assert settings.L_SWEEP == [10.0, 100.0]


def test_gauss_bonnet_scene(capsys, scene_path):
    code, out = run(capsys, "gauss-bonnet", "--scene", str(scene_path("planar-off-axis-disk")))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["defect"] == pytest.approx(0.0, abs=1e-8)


def test_missing_scene_file(capsys, tmp_path):
    code, out = run(capsys, "gauss-bonnet", "--scene", str(tmp_path / "none.json"))
    assert code == EXIT_INPUT
    assert json.loads(out)["error"]["kind"] == "scene_error"


def test_gallery_list_and_run(capsys):
    code, out = run(capsys, "gallery", "list")
    assert code == EXIT_OK
    assert "unit-circle" in [e["name"] for e in json.loads(out)["entries"]]

    code, out = run(capsys, "gallery", "run", "unit-circle", "--samples", "5")
    assert code == EXIT_OK
    assert json.loads(out)["passed"] is True

    code, out = run(capsys, "gallery", "run", "moebius")
    assert code == EXIT_INPUT
    assert json.loads(out)["error"]["kind"] == "unknown_entry"
