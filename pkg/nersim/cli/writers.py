#!/usr/bin/env python3
"""
Output writers: trajectory and sweep CSV through pandas, JSON with sorted keys.

Both formats are byte-stable for identical inputs (17 significant digits,
LF line endings, no timestamps).
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import numpy as np
import pandas as pd

from ..core.spin import SpinQuantum

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def trajectory_columns(s: SpinQuantum) -> List[str]:
    return ["t_s", *[f"p_m{s.m_label(i)}" for i in range(s.dim)], "fidelity", "leakage"]


def trajectory_frame(
    s: SpinQuantum,
    times: Sequence[float],
    populations: np.ndarray,
    fidelity: Sequence[float],
    leakage: Sequence[float],
) -> pd.DataFrame:
    data = np.column_stack([np.asarray(times), np.asarray(populations), np.asarray(fidelity), np.asarray(leakage)])
    return pd.DataFrame(data, columns=trajectory_columns(s))


def to_jsonable(value: Any) -> Any:
    """Plain-Python view of numpy scalars/arrays, complex numbers and NaN"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(float(value.real)), to_jsonable(float(value.imag))]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return None if not math.isfinite(value) else value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def dumps(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def write_json(payload: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps(payload))
    logger.info("Wrote %s", path)
    return path


def write_csv(frame: pd.DataFrame, path: Union[str, Path], float_format: str = FLOAT_FORMAT) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, float_format=float_format, lineterminator="\n", index=False)
    logger.info("Wrote %s (%d rows)", path, len(frame))
    return path


def write_text(text: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text if text.endswith("\n") else text + "\n")
    logger.info("Wrote %s", path)
    return path


def records_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Sweep rows as a frame with a stable column order (first-seen order)"""
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return pd.DataFrame(rows, columns=columns)
