# trajectory_io.py - Binary trajectories, CSV series and JSON records

import csv
import json
import logging
import os
from typing import Iterable, Optional, Sequence

import numpy as np

from config import TRAJECTORY_MAGIC, TRAJECTORY_VERSION
from numerics.grid import GridSpec, sobolev_norm_values
from solvers.trajectory import FieldSeries
from utils.errors import GridMismatch, ScenarioError

logger = logging.getLogger(__name__)

# Fixed little-endian header, followed by levels * points float64 row-major by level
HEADER = np.dtype([
    ("magic", "S4"),
    ("version", "<u4"),
    ("points", "<u4"),
    ("levels", "<u4"),
    ("half_length", "<f8"),
    ("dt", "<f8"),
    ("name", "S16"),
])


def ensure_directory(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def write_trajectory(path: str, series: FieldSeries) -> str:
    header = np.zeros(1, dtype=HEADER)
    header["magic"] = TRAJECTORY_MAGIC
    header["version"] = TRAJECTORY_VERSION
    header["points"] = series.grid.points
    header["levels"] = series.values.shape[0]
    header["half_length"] = series.grid.half_length
    header["dt"] = series.dt
    header["name"] = series.name.encode("ascii")[:16]
    with open(path, "wb") as fh:
        fh.write(header.tobytes())
        fh.write(np.ascontiguousarray(series.values, dtype="<f8").tobytes())
    logger.debug(f"Wrote {series.name} trajectory ({series.values.shape[0]} levels) to {path}")
    return path


def read_trajectory(path: str) -> FieldSeries:
    if not os.path.isfile(path):
        raise ScenarioError(f"trajectory file not found: {path}")
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < HEADER.itemsize:
        raise ScenarioError(f"{path}: truncated header")
    header = np.frombuffer(raw, dtype=HEADER, count=1)[0]
    if bytes(header["magic"]) != TRAJECTORY_MAGIC:
        raise ScenarioError(f"{path}: not a trajectory file (bad magic {bytes(header['magic'])!r})")
    if int(header["version"]) != TRAJECTORY_VERSION:
        raise ScenarioError(f"{path}: unsupported format version {int(header['version'])}")

    points, levels = int(header["points"]), int(header["levels"])
    expected = HEADER.itemsize + 8 * points * levels
    if len(raw) != expected:
        raise ScenarioError(f"{path}: expected {expected} bytes, found {len(raw)}")
    values = np.frombuffer(raw, dtype="<f8", offset=HEADER.itemsize).reshape(levels, points)
    grid = GridSpec(float(header["half_length"]), points)
    name = bytes(header["name"]).decode("ascii") or "value"
    return FieldSeries(grid, float(header["dt"]), values.astype(float), name=name)


def compare_series(a: FieldSeries, b: FieldSeries, s: float = 3.0) -> dict:
    """Max-norm and H^s discrepancies over all levels."""
    if a.grid != b.grid or a.values.shape != b.values.shape or not np.isclose(a.dt, b.dt, rtol=1e-12, atol=0.0):
        raise GridMismatch(
            f"cannot compare {a.name} on N={a.grid.points}, L={a.grid.half_length}, "
            f"{a.values.shape[0]} levels, dt={a.dt} with {b.name} on N={b.grid.points}, "
            f"L={b.grid.half_length}, {b.values.shape[0]} levels, dt={b.dt}"
        )
    gap = a.values - b.values
    return {
        "max_norm": float(np.max(np.abs(gap))),
        "sobolev_norm": float(np.max(sobolev_norm_values(gap, a.grid, s))),
        "final_max_norm": float(np.max(np.abs(gap[-1]))),
        "sobolev_order": s,
    }


def write_series_csv(path: str, series: FieldSeries, stride: int = 1) -> str:
    """Long format t,x,value; every stride-th level plus the last."""
    picks = list(range(0, series.values.shape[0], stride))
    if picks[-1] != series.values.shape[0] - 1:
        picks.append(series.values.shape[0] - 1)
    times = series.times[picks]
    x = series.grid.nodes
    table = np.column_stack([
        np.repeat(times, x.size),
        np.tile(x, len(picks)),
        series.values[picks].ravel(),
    ])
    np.savetxt(path, table, delimiter=",", header="t,x,value", comments="", fmt="%.17g")
    return path


def write_rows_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([_format_cell(v) for v in row] for row in rows)
    return path


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_json(path: str, payload: dict) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return path


def read_json(path: str) -> Optional[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")
