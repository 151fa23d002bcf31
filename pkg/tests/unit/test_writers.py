#!/usr/bin/env python3
"""
Unit tests for CSV/JSON output writers
"""

import json

import numpy as np
import pandas as pd

from nersim.cli.writers import dumps, records_frame, to_jsonable, trajectory_columns, trajectory_frame, write_csv, write_json
from nersim.core.spin import SpinQuantum


class TestJsonWriter:
    """Test JSON serialization"""

    def test_nan_becomes_null(self):
        assert to_jsonable({"fidelity": float("nan"), "x": np.float64(np.inf)}) == {"fidelity": None, "x": None}

    def test_numpy_values(self):
        data = to_jsonable({"n": np.int64(3), "flag": np.bool_(True), "v": np.array([1.0, 2.0])})
        assert data == {"n": 3, "flag": True, "v": [1.0, 2.0]}
        assert type(data["n"]) is int

    def test_complex_as_pair(self):
        assert to_jsonable(1.5 - 2.0j) == [1.5, -2.0]

    def test_sorted_keys(self):
        text = dumps({"b": 1, "a": 2})
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")

    def test_write_json_stable(self, tmp_path):
        """Test identical payloads give identical bytes"""
        payload = {"z": [0.1, 0.2], "a": {"y": 1.0 / 3.0}}
        first = write_json(payload, tmp_path / "a" / "out.json").read_bytes()
        second = write_json(dict(reversed(list(payload.items()))), tmp_path / "b" / "out.json").read_bytes()
        assert first == second
        assert json.loads(first)["a"]["y"] == 1.0 / 3.0


class TestCsvWriter:
    """Test trajectory and sweep tables"""

    def test_trajectory_columns(self):
        assert trajectory_columns(SpinQuantum(3)) == [
            "t_s", "p_m3/2", "p_m1/2", "p_m-1/2", "p_m-3/2", "fidelity", "leakage",
        ]

    def test_trajectory_frame(self):
        s = SpinQuantum(2)
        populations = np.array([[1.0, 0.0, 0.0], [0.5, 0.5, 0.0]])
        frame = trajectory_frame(s, [0.0, 1.0], populations, [1.0, 0.9], [0.0, 0.0])
        assert list(frame.columns) == trajectory_columns(s)
        assert frame.shape == (2, 6)

    def test_full_precision_round_trip(self, tmp_path):
        """Test 17 significant digits survive the CSV"""
        value = 1.0 / 3.0
        path = write_csv(pd.DataFrame({"x": [value]}), tmp_path / "t.csv")
        assert pd.read_csv(path, float_precision="round_trip")["x"].iloc[0] == value
        assert b"\r\n" not in path.read_bytes()

    def test_records_frame_column_order(self):
        rows = [{"index": 0, "status": "ok"}, {"index": 1, "status": "error", "message": "bad"}]
        frame = records_frame(rows)
        assert list(frame.columns) == ["index", "status", "message"]
        assert pd.isna(frame["message"].iloc[0])
