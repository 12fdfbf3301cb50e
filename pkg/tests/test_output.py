import json

import pytest
import numpy as np
import pandas as pd

from fato.output import dump_json, frame_to_csv, matrix_to_json


@pytest.mark.unit
class TestDumpJson:
    """Test cases for JSON documents"""

    def test_schema_version_first(self):
        """Test schema_version leads and insertion order is kept"""
        text = dump_json({"zeta": 1, "alpha": 2, "schema_version": 99})
        assert list(json.loads(text)) == ["schema_version", "zeta", "alpha"]
        assert json.loads(text)["schema_version"] == 1

    def test_non_finite_become_null(self):
        """Test NaN and infinity are written as null"""
        doc = json.loads(dump_json({"a": float('nan'), "b": [1.0, np.inf], "c": {"d": np.float64('nan')}}))
        assert doc["a"] is None
        assert doc["b"] == [1.0, None]
        assert doc["c"]["d"] is None

    def test_numpy_values(self):
        """Test numpy scalars and arrays serialise as plain JSON"""
        doc = json.loads(dump_json({"k": np.int64(3), "x": np.float32(0.5), "v": np.arange(3), "ok": np.bool_(True)}))
        assert doc == {"schema_version": 1, "k": 3, "x": 0.5, "v": [0, 1, 2], "ok": True}

    def test_layout(self):
        """Test two-space indentation, raw unicode and a trailing newline"""
        text = dump_json({"label": "θ"})
        assert text.endswith("}\n")
        assert '\n  "label": "θ"' in text


@pytest.mark.unit
class TestCsv:
    """Test cases for CSV text"""

    def test_header_and_nan(self):
        """Test the header row, LF endings and the nan spelling"""
        text = frame_to_csv(pd.DataFrame({"t": [0.0, 1.0], "f": [0.25, np.nan]}))
        assert text == "t,f\n0.0,0.25\n1.0,nan\n"

    def test_matrix_to_json(self):
        """Test complex matrices become [re, im] pairs"""
        assert matrix_to_json(np.array([[1j, 0], [0, -1j]])) == [[[0.0, 1.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, -1.0]]]
