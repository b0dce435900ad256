"""File formats: CSV/JSON tables, binary state snapshots, checksummed manifests."""

from __future__ import annotations

import csv
import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .state import Grid, MatterState

SNAPSHOT_DTYPE = "<f8"


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def write_json(path, data) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_plain(data), indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path


def write_table(path, header, rows, fmt: str = "csv") -> Path:
    """Write ``rows`` as CSV, or as a JSON list of records when ``fmt == 'json'``."""
    path = Path(path)
    rows = [list(_plain(list(r))) for r in rows]
    if fmt == "json":
        return write_json(path.with_suffix(".json"), [dict(zip(header, r)) for r in rows])
    with open(path.with_suffix(".csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return path.with_suffix(".csv")


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def save_snapshot(state: MatterState, base, fmt: str = "binary") -> list[Path]:
    """Write ``state`` to ``base.bin`` + ``base.json`` or to ``base.csv``.

    The binary layout is little-endian float64, component-major, with each
    sample stored as a (re, im) pair; the JSON sidecar carries N, dy, z, the
    component count and the byte order.
    """
    base = Path(base)
    if fmt == "csv":
        p = base.with_suffix(".csv")
        y = state.grid.y
        rows = zip(y, state.psi[0].real, state.psi[0].imag, state.psi[1].real, state.psi[1].imag)
        write_table(p, ["y", "re_psi_1", "im_psi_1", "re_psi_2", "im_psi_2"], rows)
        return [p]
    if fmt != "binary":
        raise ValidationError(f"unknown snapshot format {fmt!r}")
    data = np.ascontiguousarray(np.stack([state.psi.real, state.psi.imag], axis=-1), dtype=SNAPSHOT_DTYPE)
    p_bin = base.with_suffix(".bin")
    p_bin.write_bytes(data.tobytes())
    header = {
        "N": state.grid.n,
        "dy": state.grid.dy,
        "z": state.z,
        "components": 2,
        "dtype": "float64",
        "byte_order": "little",
        "layout": "component-major, (re, im) pairs",
        "data_file": p_bin.name,
    }
    return [p_bin, write_json(base.with_suffix(".json"), header)]


def load_snapshot(path) -> MatterState:
    """Read a snapshot written by :func:`save_snapshot` (``.bin``/``.json`` or ``.csv``)."""
    path = Path(path)
    if path.suffix == ".csv":
        header, rows = read_csv(path)
        arr = np.array(rows, dtype=float)
        y = arr[:, 0]
        grid = Grid(len(y), float(y[1] - y[0]))
        psi = np.array([arr[:, 1] + 1j * arr[:, 2], arr[:, 3] + 1j * arr[:, 4]])
        return MatterState(grid, psi)
    meta_path = path.with_suffix(".json")
    meta = json.loads(meta_path.read_text())
    if meta.get("byte_order") != "little" or meta.get("dtype") != "float64":
        raise ValidationError(f"{meta_path}: unsupported snapshot encoding")
    raw = np.frombuffer((path.with_suffix(".bin")).read_bytes(), dtype=SNAPSHOT_DTYPE)
    n = int(meta["N"])
    arr = raw.reshape(int(meta["components"]), n, 2)
    return MatterState(Grid(n, float(meta["dy"])), arr[..., 0] + 1j * arr[..., 1], float(meta["z"]))


class Manifest:
    """Files emitted by one run, with their checksums."""

    def __init__(self, root):
        self.root = Path(root)
        self.files: list[Path] = []

    def add(self, *paths):
        for p in paths:
            if isinstance(p, (list, tuple)):
                self.add(*p)
            else:
                self.files.append(Path(p))
        return paths[0] if len(paths) == 1 else paths

    def entries(self) -> list[dict]:
        out = []
        for p in self.files:
            if p.exists():
                out.append({"path": os.path.relpath(p, self.root), "sha256": sha256(p), "bytes": p.stat().st_size})
        return out
