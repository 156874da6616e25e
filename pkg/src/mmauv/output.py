"""Trajectory CSV output, run metadata sidecar, and CSV read-back.

Rows are written with 17 significant digits so every double survives a
round trip; line endings are LF regardless of platform; the metadata
sidecar carries no timestamps so identical runs produce byte-identical
artifacts.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import OutputError
from .scenario import COLUMNS, Trajectory

HEADER = ",".join(COLUMNS)


def write_trajectory(trajectory, path, decimation: int = 1) -> dict:
    """Write records (a Trajectory or an (N, 20) array) to CSV.

    Keeps every decimation-th row starting from the first. Returns a
    summary with the path and row count.
    """
    data = trajectory.data if isinstance(trajectory, Trajectory) \
        else np.asarray(trajectory, dtype=float)
    if data.ndim != 2 or data.shape[1] != len(COLUMNS):
        raise OutputError(
            f"expected records with {len(COLUMNS)} columns, "
            f"got shape {data.shape}")
    if data.shape[0] == 0:
        raise OutputError("refusing to write an empty trajectory")
    if not (isinstance(decimation, int) and decimation >= 1):
        raise OutputError(f"decimation must be a positive integer, "
                          f"got {decimation!r}")
    rows = data[::decimation]
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(HEADER + "\n")
            np.savetxt(handle, rows, fmt="%.17g", delimiter=",",
                       newline="\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return {"path": str(path), "rows": int(rows.shape[0]),
            "decimation": decimation}


def metadata_path(csv_path) -> str:
    return f"{csv_path}.meta.json"


def write_metadata(csv_path, meta: dict) -> str:
    """JSON sidecar next to the CSV; returns the sidecar path."""
    path = metadata_path(csv_path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            json.dump(meta, handle, indent=2, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    return path


def read_trajectory(path) -> Trajectory:
    """Read a CSV produced by write_trajectory, validating the header."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            header = handle.readline().rstrip("\n")
            fields = header.split(",")
            for i, want in enumerate(COLUMNS):
                got = fields[i] if i < len(fields) else "<missing>"
                if got != want:
                    raise OutputError(
                        f"{path}: header column {i + 1} is {got!r}, "
                        f"expected {want!r}")
            if len(fields) != len(COLUMNS):
                raise OutputError(
                    f"{path}: expected {len(COLUMNS)} header columns, "
                    f"got {len(fields)}")
            data = np.loadtxt(handle, delimiter=",", ndmin=2)
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise OutputError(f"{path}: malformed CSV body: {exc}") from exc
    if data.size and data.shape[1] != len(COLUMNS):
        raise OutputError(
            f"{path}: expected {len(COLUMNS)} columns, got {data.shape[1]}")
    return Trajectory(data)
