#!/usr/bin/env python3
"""
Gallery catalogue: every entry reproduces its reference values, the
Fenchel-type bound for closed horizontal curves and the strict mode.
"""
import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.errors import CheckFailure, GeometryError, UnknownEntryError
from app.gallery import (
    REGISTRY,
    CheckResult,
    GalleryEntry,
    exp_glued_field,
    exp_glued_segments,
    fenchel_check,
    list_entries,
    run_all,
    run_entry,
)
from app.gauss_bonnet import boundary_term
from app.services.expr import curve_from_text

EXPECTED_ENTRIES = [
    "heisenberg-curve",
    "unit-circle",
    "fenchel-lemniscate",
    "vertical-ruled",
    "horizontal-plane",
    "koranyi-sphere",
    "paraboloid",
    "x3-graph",
    "x3-graph-degenerate",
    "x1-graph",
    "cylindrical-symmetry",
    "circle-on-saddle",
    "exp-glued-segment",
]


def test_catalogue_order():
    assert [entry.name for entry in list_entries()] == EXPECTED_ENTRIES
    for entry in list_entries():
        assert entry.checks and entry.construction, entry.name


@pytest.mark.parametrize("name", EXPECTED_ENTRIES)
def test_entry_passes(name):
    report = run_entry(name, samples=20, seed=11)
    assert report.passed, [c.to_dict() for c in report.checks if not c.passed]
    assert [row["entry"] for row in report.report_rows()] == [name] * len(report.checks)


def test_entry_is_reproducible_for_a_seed():
    first = run_entry("paraboloid", samples=10, seed=3).to_dict()
    second = run_entry("paraboloid", samples=10, seed=3).to_dict()
    assert first == second


def test_unknown_entry():
    with pytest.raises(UnknownEntryError) as info:
        run_entry("moebius")
    data = info.value.to_dict()
    assert data["name"] == "moebius"
    assert "unit-circle" in data["available"]


def test_strict_mode_raises_on_failure(monkeypatch):
    def broken(_rng, _samples):
        return [CheckResult("always off", "value", 1.0, 1e-9)]

    monkeypatch.setitem(REGISTRY, "broken", GalleryEntry("broken", "broken", "none", {}, ["always off"], broken))
    assert run_entry("broken").passed is False
    with pytest.raises(CheckFailure) as info:
        run_entry("broken", strict=True)
    assert info.value.to_dict()["checks"] == ["always off"]


def test_run_all_reports_in_catalogue_order(monkeypatch):
    kept = {name: REGISTRY[name] for name in ("unit-circle", "horizontal-plane")}
    monkeypatch.setattr("app.gallery.entries.REGISTRY", kept)
    reports = run_all(samples=8, seed=1)
    assert [r.name for r in reports] == ["unit-circle", "horizontal-plane"]
    assert all(r.passed for r in reports)


def test_lemniscate_total_curvature_exceeds_two_pi():
    report = fenchel_check(curve_from_text("sin(t), sin(t)*cos(t)", 0.0, 2 * math.pi, planar=True))
    assert report.lifted
    assert report.margin > 0.0
    assert report.total == pytest.approx(report.refined, abs=1e-6)
    assert report.closure_gap <= 1e-9


def test_planar_circle_does_not_lift_to_a_closed_curve():
    with pytest.raises(GeometryError):
        fenchel_check(curve_from_text("cos(t), sin(t)", 0.0, 2 * math.pi, planar=True))


def test_non_horizontal_curve_is_rejected():
    with pytest.raises(GeometryError):
        fenchel_check(curve_from_text("cos(t), sin(t), 0", 0.0, 2 * math.pi))


@pytest.mark.parametrize("eps", [0.2, 0.05])
def test_glued_segments_contribute_four(eps):
    total = math.fsum(boundary_term(c, exp_glued_field).value for c in exp_glued_segments(eps))
    assert total == pytest.approx(4.0, abs=1e-8)
    ends = exp_glued_segments(eps)[0].position(np.array([-1.0, 1.0]))
    assert np.allclose(ends[:, 1], eps)
