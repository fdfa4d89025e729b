"""Point clouds and the pairwise metric data derived from them.

Distances are kept squared everywhere; a square root is only taken when a
diameter is reported.  Simplices are plain ``int`` bit words, bit ``i`` set
meaning vertex ``i`` is present.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import (
    DegeneratePointError,
    DimensionMismatchError,
    FormatError,
    InvalidSimplexError,
)

__all__ = [
    "PointCloud",
    "load_point_cloud",
    "parse_point_cloud",
    "normalize_to_unit_sphere",
    "pairwise_sq_distances",
    "simplex_diameter",
    "bit_vertices",
]


@dataclass(frozen=True)
class PointCloud:
    """``n`` points in ``d`` dimensions, row ``i`` holding point ``v_i``."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[0] < 1 or coords.shape[1] < 1:
            raise DimensionMismatchError(
                f"point cloud must be a non-empty n x d array, got shape {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            row, col = np.argwhere(~np.isfinite(coords))[0]
            raise FormatError(f"non-finite coordinate at row {row}, column {col}")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.coords.shape == other.coords.shape and bool(
            np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.coords.shape, self.coords.tobytes()))


def _rows_to_cloud(rows: list[list[float]]) -> PointCloud:
    if not rows:
        raise FormatError("no points found")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DimensionMismatchError(
                f"row {i} has {len(row)} coordinates, expected {width}"
            )
    return PointCloud(np.asarray(rows, dtype=float))


def _parse_csv(text: str) -> PointCloud:
    rows = []
    for i, fields in enumerate(csv.reader(io.StringIO(text))):
        if not fields or all(not f.strip() for f in fields):
            continue
        row = []
        for j, field in enumerate(fields):
            try:
                row.append(float(field))
            except ValueError:
                raise FormatError(
                    f"cannot parse {field.strip()!r} as a number at row {i}, column {j}"
                ) from None
        rows.append(row)
    return _rows_to_cloud(rows)


def _parse_json(text: str) -> PointCloud:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    if not isinstance(data, list):
        raise FormatError("expected a JSON array of arrays of numbers")
    rows = []
    for i, item in enumerate(data):
        if not isinstance(item, list):
            raise FormatError(f"row {i} is not an array")
        for j, value in enumerate(item):
            # bool is an int subclass; reject it explicitly
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise FormatError(f"non-numeric value {value!r} at row {i}, column {j}")
        rows.append([float(v) for v in item])
    return _rows_to_cloud(rows)


def parse_point_cloud(text: str, format: str) -> PointCloud:
    """Parse point-cloud text in ``"csv"`` or ``"json"`` format."""
    if format == "csv":
        return _parse_csv(text)
    if format == "json":
        return _parse_json(text)
    raise FormatError(f"unknown point-cloud format {format!r}")


def load_point_cloud(source: str | Path, format: str | None = None) -> PointCloud:
    """Read a point cloud from a UTF-8 CSV or JSON file.

    The format is inferred from the file suffix when not given.
    """
    path = Path(source)
    if format is None:
        format = path.suffix.lower().lstrip(".")
    return parse_point_cloud(path.read_text(encoding="utf-8"), format)


def normalize_to_unit_sphere(pc: PointCloud) -> PointCloud:
    norms = np.linalg.norm(pc.coords, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise DegeneratePointError(f"point {zero[0]} has zero norm")
    return PointCloud(pc.coords / norms[:, None])


def pairwise_sq_distances(pc: PointCloud) -> np.ndarray:
    """Matrix of squared Euclidean distances ``|v_i - v_j|**2``.

    Computed from coordinate differences rather than the Gram expansion so
    that the diagonal is exactly zero and integer inputs stay exact.
    """
    diff = pc.coords[:, None, :] - pc.coords[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def bit_vertices(word: int) -> list[int]:
    """Vertex indices of a bit-encoded simplex, ascending."""
    out = []
    i = 0
    while word:
        if word & 1:
            out.append(i)
        word >>= 1
        i += 1
    return out


def simplex_diameter(D: np.ndarray, s: int) -> float:
    """Largest (unsquared) distance between two vertices of simplex ``s``."""
    if s <= 0:
        raise InvalidSimplexError("a simplex needs at least one vertex")
    verts = bit_vertices(s)
    if verts[-1] >= D.shape[0]:
        raise InvalidSimplexError(
            f"vertex {verts[-1]} out of range for {D.shape[0]} points"
        )
    best = 0.0
    for i, j in combinations(verts, 2):
        best = max(best, D[i, j])
    return math.sqrt(best)
