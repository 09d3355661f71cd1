"""File emission: CSV tables, binary distribution snapshots, JSON reports.

Everything written here is deterministic for a fixed input: no timestamps,
no environment-dependent content, stable key ordering. Floats in CSV are
serialized with 17 significant digits so a value round-trips exactly; JSON
uses Python's shortest-roundtrip float repr.

Binary snapshot layout (little-endian): int64 dim, int64 nodes_per_axis,
int64 x_cells, float64 v_max, then the distribution values as float64 in
row-major order with shape (x_cells, nodes_per_axis^dim).
"""
from __future__ import annotations

import json
import os
import struct

import numpy as np

_MAGIC_HEADER = struct.Struct("<qqqd")


def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path: str, header, rows) -> None:
    """Comma-separated table; floats at 17 significant digits."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                cells = [
                    fmt_float(c) if isinstance(c, float) else str(c)
                    for c in row
                ]
                fh.write(",".join(cells) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing CSV {path}: {exc}") from exc


def write_distribution_snapshot(path: str, f: np.ndarray, grid, x_cells: int | None = None) -> None:
    """Serialize one species' distribution; accepts (x, v...) or bare (v...)."""
    arr = np.asarray(f, dtype=float)
    if arr.shape == grid.shape:
        arr = arr[None, ...]
    nx = arr.shape[0]
    if arr.shape[1:] != grid.shape:
        raise ValueError("distribution shape does not match grid")
    if x_cells is not None and x_cells != nx:
        raise ValueError("x_cells disagrees with the array shape")
    try:
        with open(path, "wb") as fh:
            fh.write(_MAGIC_HEADER.pack(grid.dim, grid.nodes_per_axis, nx, grid.v_max))
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    except OSError as exc:
        raise OSError(f"failed writing snapshot {path}: {exc}") from exc


def read_distribution_snapshot(path: str):
    """Inverse of write_distribution_snapshot.

    Returns (f, dim, nodes_per_axis, x_cells, v_max) with f shaped
    (x_cells, nodes_per_axis^dim).
    """
    with open(path, "rb") as fh:
        head = fh.read(_MAGIC_HEADER.size)
        if len(head) != _MAGIC_HEADER.size:
            raise ValueError(f"truncated snapshot header in {path}")
        dim, nodes, nx, v_max = _MAGIC_HEADER.unpack(head)
        count = nx * nodes**dim
        payload = np.frombuffer(fh.read(count * 8), dtype="<f8")
        if payload.size != count:
            raise ValueError(f"truncated snapshot payload in {path}")
    shape = (nx,) + (nodes,) * dim
    return payload.reshape(shape).copy(), int(dim), int(nodes), int(nx), float(v_max)


def _canonical(obj):
    if isinstance(obj, dict):
        return {k: _canonical(obj[k]) for k in sorted(obj)}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_canonical(v) for v in obj.tolist()]
    return obj


def write_json(path: str, payload: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(_canonical(payload), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing JSON {path}: {exc}") from exc


class ArtifactWriter:
    """Collects every file a run emits and writes the index manifest.

    Artifacts land in <output_dir>/<config_hash>/ so different configs never
    collide; the manifest lists relative paths with kinds and sizes.
    """

    def __init__(self, output_dir: str, config_hash: str, mode: str):
        self.root = os.path.join(output_dir, config_hash)
        self.config_hash = config_hash
        self.mode = mode
        self._entries = []
        os.makedirs(self.root, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.root, name)

    def add_csv(self, name: str, header, rows) -> str:
        p = self.path(name)
        write_csv(p, header, rows)
        self._register(name, "csv")
        return p

    def add_json(self, name: str, payload: dict) -> str:
        p = self.path(name)
        write_json(p, payload)
        self._register(name, "json")
        return p

    def add_snapshot(self, name: str, f, grid) -> str:
        p = self.path(name)
        write_distribution_snapshot(p, f, grid)
        self._register(name, "binary")
        return p

    def _register(self, name: str, kind: str):
        size = os.path.getsize(self.path(name))
        self._entries.append({"path": name, "kind": kind, "bytes": size})

    def finalize(self, config_lines: dict) -> str:
        manifest = {
            "config_hash": self.config_hash,
            "mode": self.mode,
            "config": config_lines,
            "artifacts": sorted(self._entries, key=lambda e: e["path"]),
        }
        p = self.path("manifest.json")
        write_json(p, manifest)
        return p
