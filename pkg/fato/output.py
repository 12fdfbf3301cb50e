"""JSON and CSV writers shared by the CLI and the sweep engine."""

import io
import json
import math
from typing import Dict

import numpy as np
import pandas as pd

from fato.config import SCHEMA_VERSION


class NumpyEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        elif isinstance(obj, np.bool_):
            return bool(obj)
        elif isinstance(obj, complex):
            return {"re": obj.real, "im": obj.imag}
        return super().default(obj)


def _finite_or_none(value):
    """NaN and infinities become null so the document stays valid JSON."""
    if isinstance(value, dict):
        return {k: _finite_or_none(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(v) for v in value]
    if isinstance(value, np.ndarray):
        return _finite_or_none(value.tolist())
    if isinstance(value, (float, np.floating)) and not math.isfinite(float(value)):
        return None
    return value


def dump_json(document: Dict) -> str:
    """Serialise with schema_version first, insertion key order, indent 2 and a trailing LF."""
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update({k: v for k, v in document.items() if k != "schema_version"})
    return json.dumps(_finite_or_none(payload), cls=NumpyEncoder, indent=2, ensure_ascii=False) + "\n"


def frame_to_csv(frame: pd.DataFrame) -> str:
    """CSV text with a header row, LF line endings and `nan` for missing values."""
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, na_rep="nan", lineterminator="\n")
    return buffer.getvalue()


def matrix_to_json(u: np.ndarray):
    """Complex matrix as nested [re, im] pairs."""
    u = np.asarray(u, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in u]
