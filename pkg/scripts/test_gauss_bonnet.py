#!/usr/bin/env python3
"""
Gauss–Bonnet runs on the bundled scenes, scene validation, characteristic
detection and the boundary orientation rule.
"""
import copy
import json
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import OffSurfaceError, SceneError, UndeclaredCharacteristicError
from app.gauss_bonnet import (
    CandidateKind,
    boundary_term,
    characteristic,
    characteristic_crossings,
    characteristic_scan,
    compile_scene,
    gauss_bonnet_defect,
    infer_orientation,
    load_scene,
    orientation_self_check,
    parse_scene,
    scaled_gauss_bonnet,
    scan_scene,
    scene_scale,
    tangential_rank_ratio,
)
from app.services.expr import curve_from_text, field_from_text, patch_from_text

TWO_PI = 2.0 * math.pi

HORIZONTAL_DISK = {
    "name": "horizontal-disk",
    "u": "x3",
    "charts": [{"name": "disk", "f": ["v*cos(w)", "v*sin(w)", "0"],
                "domain": [0.0, 1.0, 0.0, TWO_PI], "polar_center": [0.0, 0.0]}],
}


def raw_scene(scene_path, name):
    return json.loads(scene_path(name).read_text(encoding="utf-8"))


def test_orientation_rule_reproduces_saddle_value():
    assert orientation_self_check() == pytest.approx(4.0, abs=1e-8)


def test_saddle_defect_is_four(scene_path):
    report = gauss_bonnet_defect(load_scene(scene_path("saddle-disk")))
    assert report.defect == pytest.approx(4.0, abs=1e-6)
    assert report.passed
    assert report.hypotheses_hold is False
    assert report.characteristic.handling == "declared-curve"
    assert report.orientations == {"circle": 1}
    assert report.surface_integral == pytest.approx(0.0, abs=1e-6)


def test_planar_disk_without_characteristic_points(scene_path):
    scene = load_scene(scene_path("planar-off-axis-disk"))
    boundary = scene.boundaries[0]
    assert boundary.orientation is None
    assert infer_orientation(scene.field, boundary.curve, scene.charts) == 1

    report = gauss_bonnet_defect(scene)
    assert report.characteristic.handling == "none"
    assert report.hypotheses_hold
    assert report.defect == pytest.approx(0.0, abs=1e-8)
    # K₀ < 0 everywhere, balanced by the boundary term
    assert report.surface_integral < 0.0
    assert report.boundary_terms["circle"] == pytest.approx(-report.surface_integral, abs=1e-8)
    rows = report.report_rows()
    assert rows[-1]["eps"] == 0.0 and rows[-1]["defect"] == report.defect


def test_reversed_boundary_flips_sign(scene_path):
    scene = load_scene(scene_path("planar-off-axis-disk"))
    curve = scene.boundaries[0].curve
    forward = boundary_term(curve, scene.field, 1).value
    assert boundary_term(curve, scene.field, -1).value == pytest.approx(-forward, abs=1e-14)
    assert boundary_term(curve.reversed(), scene.field, 1).value == pytest.approx(-forward, abs=1e-10)
    with pytest.raises(SceneError):
        boundary_term(curve, scene.field, 0)


def test_declared_orientation_must_match(scene_path):
    data = raw_scene(scene_path, "planar-off-axis-disk")
    data["boundaries"][0]["orientation"] = -1
    with pytest.raises(SceneError) as info:
        gauss_bonnet_defect(compile_scene(parse_scene(data)))
    assert info.value.to_dict()["inferred"] == 1


def test_koranyi_sphere_defect_vanishes(scene_path):
    report = gauss_bonnet_defect(load_scene(scene_path("koranyi")))
    assert report.characteristic.handling == "excised"
    assert [step.eps for step in report.trace] == [0.1, 0.05, 0.025, 0.0125]
    assert report.extrapolation is not None
    assert report.defect == pytest.approx(0.0, abs=1e-5)
    assert report.passed


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("u"),
    lambda d: d.update(unexpected=1),
    lambda d: d.update(charts=[]),
    lambda d: d["charts"][0].update(domain=[1.0, 0.0, 0.0, 1.0]),
    lambda d: d.update(eps_sequence=[0.05, 0.1]),
])
def test_invalid_scenes_are_rejected(mutate):
    data = copy.deepcopy(HORIZONTAL_DISK)
    mutate(data)
    with pytest.raises(SceneError):
        parse_scene(data)


def test_bad_boundary_orientation_value():
    data = copy.deepcopy(HORIZONTAL_DISK)
    data["boundaries"] = [{"curve": ["cos(t)", "sin(t)", "0"], "t0": 0.0, "t1": TWO_PI, "orientation": 2}]
    with pytest.raises(SceneError):
        parse_scene(data)


def test_polar_chart_must_use_radius():
    data = copy.deepcopy(HORIZONTAL_DISK)
    data["charts"][0]["f"] = ["2*v*cos(w)", "2*v*sin(w)", "0"]
    with pytest.raises(SceneError):
        compile_scene(parse_scene(data))


def test_exclusion_needs_a_polar_chart():
    data = copy.deepcopy(HORIZONTAL_DISK)
    data["charts"][0].pop("polar_center")
    data["exclusions"] = [{"center": [0.0, 0.0]}]
    with pytest.raises(SceneError):
        compile_scene(parse_scene(data))


def test_missing_file(tmp_path):
    with pytest.raises(SceneError):
        load_scene(tmp_path / "absent.json")


def test_undeclared_characteristic_point():
    scene = compile_scene(parse_scene(copy.deepcopy(HORIZONTAL_DISK)))
    with pytest.raises(UndeclaredCharacteristicError) as info:
        scan_scene(scene)
    assert info.value.to_dict()["candidates"][0]["kind"] == CandidateKind.ISOLATED.value


def test_excised_characteristic_point_is_accepted():
    data = copy.deepcopy(HORIZONTAL_DISK)
    data["exclusions"] = [{"center": [0.0, 0.0]}]
    summary = scan_scene(compile_scene(parse_scene(data)))
    assert summary.handling == "excised"
    assert len(summary.isolated) == 1


def test_tangential_rank_separates_points_from_curves():
    def plane(x1, x2, x3):
        return x3 + 0.0 * x1

    def saddle(x1, x2, x3):
        return x3 - x1 * x2 / 2

    assert tangential_rank_ratio(plane, [0.0, 0.0, 0.0]) > 0.1
    assert tangential_rank_ratio(saddle, [0.5, 0.0, 0.0]) <= 1e-12


@pytest.mark.parametrize("L", [1.0, 100.0])
def test_finite_L_sum_is_two_pi_for_a_disk(scene_path, L):
    result = scaled_gauss_bonnet(load_scene(scene_path("planar-off-axis-disk")), L)
    assert result.normalized == pytest.approx(TWO_PI, abs=1e-6)


def test_finite_L_sum_refuses_excised_scenes(scene_path):
    with pytest.raises(SceneError):
        scaled_gauss_bonnet(load_scene(scene_path("koranyi")), 10.0)


def test_scan_finds_points_and_curves():
    square = patch_from_text("v, w, 0")
    found = characteristic_scan(lambda x1, x2, x3: x3 + 0.0 * x1, square, (-1.0, 1.0, -1.0, 1.0), grid=21,
                                name="square")
    assert [c.kind for c in found] == [CandidateKind.ISOLATED]
    assert np.allclose(found[0].point, 0.0, atol=1e-6)
    assert found[0].chart == "square"

    graph = patch_from_text("v, w, v*w/2")
    found = characteristic_scan(lambda x1, x2, x3: x3 - x1 * x2 / 2, graph, (-1.0, 1.0, -1.0, 1.0), grid=21)
    assert [c.kind for c in found] == [CandidateKind.CURVE]
    assert np.allclose(found[0].members[:, 1], 0.0, atol=1e-6)
    assert len(found[0].members) > 10


@pytest.mark.parametrize("t0, crossings", [(0.0, [math.pi]), (0.3, [math.pi, TWO_PI])])
def test_boundary_term_through_characteristic_points(t0, crossings):
    """The circle on x3 = x1x2/2 meets the characteristic x1-axis twice; the integrand there is |sin t|"""
    curve = curve_from_text("cos(t), sin(t), sin(2*t)/4", t0, t0 + TWO_PI)
    saddle = field_from_text("x3 - x1*x2/2")
    assert characteristic_crossings(curve, saddle) == pytest.approx(crossings, abs=1e-6)
    assert boundary_term(curve, saddle, 1).value == pytest.approx(4.0, abs=1e-8)


def test_boundary_off_the_surface_is_a_scene_error():
    data = copy.deepcopy(HORIZONTAL_DISK)
    data["boundaries"] = [{"name": "lifted", "curve": ["cos(t)", "sin(t)", "0.1"], "t0": 0.0, "t1": TWO_PI}]
    with pytest.raises(SceneError) as info:
        compile_scene(parse_scene(data))
    assert info.value.to_dict()["boundary"] == "lifted"
    assert info.value.to_dict()["max_residual"] == pytest.approx(0.1)


def test_scene_on_surface_tolerance_is_used(scene_path):
    data = raw_scene(scene_path, "planar-off-axis-disk")
    data["boundaries"][0]["curve"] = ["2 + cos(t)", "sin(t)", "1e-7"]
    with pytest.raises(SceneError):
        compile_scene(parse_scene(data))

    data["tolerances"] = {"on_surface": 1e-6}
    scene = compile_scene(parse_scene(data))
    curve = scene.boundaries[0].curve
    with pytest.raises(OffSurfaceError):
        boundary_term(curve, scene.field, 1, scale=scene_scale(scene))
    assert boundary_term(curve, scene.field, 1, scale=scene_scale(scene), tau_on=1e-6).value > 0.0
    # ∇_H x3 does not depend on x3, so the lifted circle has the same boundary term
    assert gauss_bonnet_defect(scene).defect == pytest.approx(0.0, abs=1e-8)


def test_koranyi_scan_refines_one_start_per_plateau(scene_path, monkeypatch):
    starts = []
    refine = characteristic._refine

    def counting(field_, chart, start, bounds, accept):
        starts.append(start)
        return refine(field_, chart, start, bounds, accept)

    monkeypatch.setattr(characteristic, "_refine", counting)
    summary = scan_scene(load_scene(scene_path("koranyi")))
    assert len(summary.isolated) == 2
    assert sorted(c.point[2] for c in summary.isolated) == pytest.approx([-0.25, 0.25], abs=1e-12)
    # the poles pass on the grid; only the two edge rows of the band are refined
    assert len(starts) <= 4
