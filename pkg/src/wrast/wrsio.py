"""WRS1 signal files.

Layout: one JSON header line terminated by a newline,

    {"magic": "WRS1", "dims": [{"count": n, "spacing": dx, "origin": x0}, ...],
     "dtype": "c128", ...extra keys...}

followed by raw little-endian interleaved (re, im) float64 pairs in
row-major order over the dims.  Extra header keys (e.g. ``component`` and
``s`` for wave solutions) ride along untouched.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grids import Axis, Grid, SampledSignal

MAGIC = "WRS1"


class FormatError(ValueError):
    """Malformed WRS1 file."""


def _header(grid: Grid, extra: dict | None) -> bytes:
    head = {
        "magic": MAGIC,
        "dims": [{"count": a.count, "spacing": a.spacing, "origin": a.origin}
                 for a in grid.axes],
        "dtype": "c128",
    }
    if extra:
        for key in ("magic", "dims", "dtype"):
            if key in extra:
                raise FormatError(f"extra header key {key!r} is reserved")
        head.update(extra)
    return (json.dumps(head, sort_keys=True) + "\n").encode("utf-8")


def write_signal(path, signal: SampledSignal, extra: dict | None = None) -> None:
    payload = np.ascontiguousarray(signal.values, dtype=np.complex128)
    with open(path, "wb") as fh:
        fh.write(_header(signal.grid, extra))
        fh.write(payload.astype("<c16", copy=False).tobytes())


def read_signal(path) -> tuple[SampledSignal, dict]:
    """Returns the signal and any extra header keys."""
    with open(path, "rb") as fh:
        line = fh.readline()
        raw = fh.read()
    try:
        head = json.loads(line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: bad JSON header ({exc})") from exc
    if head.get("magic") != MAGIC:
        raise FormatError(f"{path}: magic {head.get('magic')!r} != {MAGIC!r}")
    if head.get("dtype") != "c128":
        raise FormatError(f"{path}: unsupported dtype {head.get('dtype')!r}")
    try:
        axes = tuple(Axis(int(d["count"]), float(d["spacing"]), float(d["origin"]))
                     for d in head["dims"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: bad dims entry ({exc})") from exc
    grid = Grid(axes)
    values = np.frombuffer(raw, dtype="<c16")
    if values.size != grid.npoints:
        raise FormatError(
            f"{path}: payload has {values.size} values, header declares "
            f"{grid.npoints}")
    extra = {k: v for k, v in head.items() if k not in ("magic", "dims", "dtype")}
    return SampledSignal(grid, values.astype(np.complex128)), extra


def write_csv(path, columns: dict[str, np.ndarray]) -> None:
    """Plot-data CSV with a header row; frequencies are cycles per unit length."""
    names = list(columns)
    arrays = [np.asarray(columns[n]).ravel() for n in names]
    length = len(arrays[0])
    if any(len(a) != length for a in arrays):
        raise FormatError("csv columns must have equal length")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for row in zip(*arrays):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def wave_component_paths(base) -> tuple[Path, Path]:
    """A wave solution is stored as a pair of WRS1 files, one per component."""
    base = Path(base)
    stem = base
    for suffix in (".plus.wrs", ".minus.wrs", ".wrs"):
        s = str(base)
        if s.endswith(suffix):
            stem = Path(s[: -len(suffix)])
            break
    return Path(str(stem) + ".plus.wrs"), Path(str(stem) + ".minus.wrs")
