#!/usr/bin/env python3
"""
Report serialization: deterministic JSON, null for non-finite floats, CSV
headers and error objects.
"""
import json
import math
import sys
from pathlib import Path

import numpy as np

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.config import settings
from app.errors import ParseError, SceneError
from app.utils import error_object, format_float, to_csv, to_json, to_plain, with_schema


def test_floats_keep_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(math.pi)) == math.pi
    assert to_json({"x": 1.0 / 3.0}) == '{\n  "x": 0.33333333333333331\n}'


def test_non_finite_values_become_null():
    data = to_plain({"a": np.array([1.0, np.nan, np.inf]), "b": np.float64(-np.inf)})
    assert data == {"a": [1.0, None, None], "b": None}
    assert json.loads(to_json({"v": math.nan})) == {"v": None}


def test_numpy_values_are_plain():
    data = to_plain({"flag": np.bool_(True), "n": np.int64(3), "pair": (1, 2)})
    assert data == {"flag": True, "n": 3, "pair": [1, 2]}
    assert type(data["flag"]) is bool and type(data["n"]) is int


def test_identical_payloads_give_identical_bytes():
    payload = {"values": np.linspace(0.0, 1.0, 7), "nested": [{"k": 0.2}, {"k": 1e-300}]}
    assert to_json(payload) == to_json(payload)
    assert json.loads(to_json(payload))["nested"][1]["k"] == 1e-300


def test_schema_field():
    assert with_schema({"a": 1}) == {"schema": settings.SCHEMA_VERSION, "a": 1}
    assert with_schema([1, 2]) == {"schema": settings.SCHEMA_VERSION, "result": [1, 2]}


def test_error_object_merges_fields():
    data = error_object(ParseError("unexpected ')'", offset=4, expected=["NUMBER", "NAME"]))
    assert data["schema"] == settings.SCHEMA_VERSION
    assert data["error"]["kind"] == "parse_error"
    assert data["error"]["offset"] == 4
    assert data["error"]["expected"] == ["NAME", "NUMBER"]
    assert error_object(SceneError("bad", path="x.json"))["error"] == {
        "kind": "scene_error", "message": "bad", "path": "x.json"}


def test_csv_header_is_the_union_of_keys():
    text = to_csv([{"t": 0.5, "k0": 2.0}, {"t": 1.0, "L=100": math.nan, "k0": None}])
    lines = text.splitlines()
    assert lines[0] == "t,k0,L=100"
    assert lines[1] == "0.5,2,"
    assert lines[2] == "1,,"
