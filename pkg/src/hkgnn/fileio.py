"""Text formats and deterministic writers shared across the package.

Edge lists are "i j" pairs, labels one class id per line, features one CSV
row per node. '#' starts a comment anywhere; blank lines are skipped.
Floats are written with 17 significant digits so round-trips are lossless.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

__all__ = [
    "MalformedLineError",
    "read_edge_file",
    "read_label_file",
    "read_feature_file",
    "write_edge_file",
    "write_label_file",
    "write_feature_file",
    "format_float",
    "write_csv",
    "write_json",
    "config_hash",
]


class MalformedLineError(ValueError):
    """A data file line failed to parse; carries path and line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield line_no, text


def read_edge_file(path) -> list[tuple[int, int]]:
    edges = []
    for line_no, text in _data_lines(path):
        parts = text.split()
        if len(parts) != 2:
            raise MalformedLineError(path, line_no, f"expected 'i j', got {text!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise MalformedLineError(path, line_no, f"non-integer endpoint in {text!r}") from None
    return edges


def read_label_file(path) -> np.ndarray:
    labels = []
    for line_no, text in _data_lines(path):
        try:
            labels.append(int(text))
        except ValueError:
            raise MalformedLineError(path, line_no, f"expected an integer class id, got {text!r}") from None
    return np.asarray(labels, dtype=int)


def read_feature_file(path) -> np.ndarray:
    rows = []
    width = None
    for line_no, text in _data_lines(path):
        parts = [p for p in text.split(",") if p.strip()]
        try:
            row = [float(p) for p in parts]
        except ValueError:
            raise MalformedLineError(path, line_no, f"non-numeric feature in {text!r}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MalformedLineError(path, line_no,
                                     f"expected {width} columns, got {len(row)}")
        rows.append(row)
    return np.asarray(rows, dtype=float)


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def write_edge_file(path, edges) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# edge list: one 'i j' pair per line, 0-indexed\n")
        for i, j in sorted(edges):
            fh.write(f"{i} {j}\n")


def write_label_file(path, labels) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# one class id per line; line index = node index\n")
        for lab in labels:
            fh.write(f"{int(lab)}\n")


def write_feature_file(path, features) -> None:
    features = np.asarray(features, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# one node per row, comma-separated feature values\n")
        for row in features:
            fh.write(",".join(format_float(x) for x in row) + "\n")


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return "inf" if np.isinf(x) else format_float(x)
    return str(value)


def write_csv(path, header, rows) -> None:
    """Fixed column order, 17-significant-digit floats, LF line endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return "inf" if np.isinf(x) else x
    return obj


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(obj), fh, sort_keys=True, indent=2)
        fh.write("\n")


def config_hash(cfg: dict) -> str:
    canonical = json.dumps(_jsonable(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
