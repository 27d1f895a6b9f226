"""Stable on-disk formats: CSV and JSON grids, JSON results, atomic writes."""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np

from .optimize import Axis, SweepGrid


def fmt(x: float) -> str:
    """17 significant digits; enough to round-trip any double."""
    return format(float(x), ".17g")


def _clean(obj):
    if isinstance(obj, float) or isinstance(obj, np.floating):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def dumps_json(obj) -> str:
    """Deterministic JSON; non-finite floats become ``null``."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# grids


def grid_to_csv(grid: SweepGrid) -> str:
    lines = []
    for ax in grid.axes:
        lines.append(f"# axis,{ax.name},{fmt(ax.lo)},{fmt(ax.hi)},{ax.count}")
    for key in sorted(grid.meta):
        lines.append(f"# meta,{key},{grid.meta[key]}")
    for idx in zip(*np.nonzero(grid.flags)):
        lines.append("# flag," + ",".join(str(int(i)) for i in idx))
    if len(grid.axes) == 1:
        ax = grid.axes[0]
        lines.append(f"{ax.name},value")
        for x, v in zip(ax.values, grid.values):
            lines.append(f"{fmt(x)},{fmt(v)}")
    elif len(grid.axes) == 2:
        row_ax, col_ax = grid.axes
        lines.append(f"{row_ax.name}\\{col_ax.name}," + ",".join(fmt(x) for x in col_ax.values))
        for x, row in zip(row_ax.values, grid.values):
            lines.append(fmt(x) + "," + ",".join(fmt(v) for v in row))
    else:
        raise ValueError("CSV export supports 1-D and 2-D grids")
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str) -> SweepGrid:
    axes, meta, flags, rows = [], {}, [], []
    for line in text.splitlines():
        if line.startswith("# axis,"):
            _, name, lo, hi, count = line.split(",")
            axes.append(Axis(name, float(lo), float(hi), int(count)))
        elif line.startswith("# meta,"):
            _, key, value = line.split(",", 2)
            meta[key] = _parse_scalar(value)
        elif line.startswith("# flag,"):
            flags.append(tuple(int(i) for i in line.split(",")[1:]))
        elif line and not line.startswith("#"):
            rows.append(line.split(","))
    body = rows[1:]
    shape = tuple(a.count for a in axes)
    if len(axes) == 1:
        values = np.array([float(r[1]) for r in body])
    else:
        values = np.array([[float(v) for v in r[1:]] for r in body])
    flag_arr = np.zeros(shape, dtype=bool)
    for idx in flags:
        flag_arr[idx] = True
    return SweepGrid(tuple(axes), values.reshape(shape), flag_arr, meta)


def _parse_scalar(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def grid_to_dict(grid: SweepGrid) -> dict:
    return {
        "axes": [{"name": a.name, "lo": a.lo, "hi": a.hi, "count": a.count} for a in grid.axes],
        "values": [float(v) for v in grid.values.ravel()],
        "flags": [bool(f) for f in grid.flags.ravel()],
        "meta": dict(grid.meta),
    }


def grid_to_json(grid: SweepGrid) -> str:
    return dumps_json(grid_to_dict(grid))


def grid_from_json(text: str) -> SweepGrid:
    d = json.loads(text)
    axes = tuple(Axis(a["name"], a["lo"], a["hi"], a["count"]) for a in d["axes"])
    shape = tuple(a.count for a in axes)
    values = np.array([np.nan if v is None else v for v in d["values"]], dtype=float)
    flags = np.array(d["flags"], dtype=bool)
    return SweepGrid(axes, values.reshape(shape), flags.reshape(shape), d["meta"])


def write_grid(grid: SweepGrid, path, fmt_name: str = "csv") -> None:
    text = grid_to_csv(grid) if fmt_name == "csv" else grid_to_json(grid)
    atomic_write_text(path, text)
