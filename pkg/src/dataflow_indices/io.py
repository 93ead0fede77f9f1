"""Reading and writing point matrices, label vectors and layer-stack manifests.

Two on-disk matrix formats are understood:

* CSV, one sample per row, comma separated, optional header row.
* A little-endian binary tensor::

      b"DFLW" | u8 version (=1) | u32 rank | rank x u64 dims | f64 payload

  with a row-major payload and no padding. Tensors of rank > 2 are
  flattened to ``(dims[0], prod(dims[1:]))`` when read as a point matrix.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .indices import as_labels, as_targets
from .neighbors import as_points

__all__ = [
    "CsvTable",
    "LayerStack",
    "TENSOR_MAGIC",
    "detect_format",
    "load_labels",
    "load_layer_stack",
    "load_matrix",
    "read_csv",
    "read_tensor",
    "select_column",
    "write_csv",
    "write_tensor",
]

TENSOR_MAGIC = b"DFLW"
TENSOR_VERSION = 1
MAX_RANK = 32
MAX_ELEMENTS = 2**48
_HEADER = struct.Struct("<4sBI")


# ---------------------------------------------------------------------------
# binary tensors


def write_tensor(path, array) -> None:
    arr = np.ascontiguousarray(array, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(TENSOR_MAGIC, TENSOR_VERSION, arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        fh.write(arr.tobytes(order="C"))


def read_tensor(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ParseError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, rank = _HEADER.unpack_from(data, 0)
    if magic != TENSOR_MAGIC:
        raise ParseError(f"{path}: bad magic bytes {magic!r} at offset 0")
    if version != TENSOR_VERSION:
        raise ParseError(f"{path}: unsupported version {version} at offset 4")
    if rank > MAX_RANK:
        raise ParseError(f"{path}: rank {rank} at offset 5 exceeds {MAX_RANK}")
    offset = _HEADER.size
    if len(data) < offset + 8 * rank:
        raise ParseError(f"{path}: truncated dimension list at offset {offset}")
    dims = struct.unpack_from(f"<{rank}Q", data, offset)
    offset += 8 * rank
    count = 1
    for i, dim in enumerate(dims):
        count *= dim
        if count > MAX_ELEMENTS:
            raise ParseError(
                f"{path}: dimension {i} = {dim} at offset {_HEADER.size + 8 * i} "
                f"overflows the element count"
            )
    expected = offset + 8 * count
    if len(data) != expected:
        raise ParseError(
            f"{path}: payload ends at offset {len(data)}, expected {expected}"
        )
    return np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(dims).astype(np.float64)


# ---------------------------------------------------------------------------
# CSV


@dataclass
class CsvTable:
    values: np.ndarray
    header: list[str] | None = None


def _parse_cell(cell: str) -> float:
    return float(cell.strip())


def read_csv(path) -> CsvTable:
    """Parse a numeric CSV file; the first row is taken as a header if it is not numeric."""
    rows: list[list[float]] = []
    header = None
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                parsed = [_parse_cell(c) for c in row]
            except ValueError:
                if header is None and not rows and width is None:
                    header = [c.strip() for c in row]
                    width = len(row)
                    continue
                col = next(i for i, c in enumerate(row) if not _is_number(c))
                raise ParseError(
                    f"{path}: line {lineno}, column {col + 1}: non-numeric cell {row[col]!r}"
                ) from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(
                    f"{path}: line {lineno} has {len(row)} fields, expected {width}"
                )
            rows.append(parsed)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return CsvTable(np.array(rows, dtype=np.float64), header)


def _is_number(cell: str) -> bool:
    try:
        _parse_cell(cell)
    except ValueError:
        return False
    return True


def write_csv(path, array, header: list[str] | None = None) -> None:
    arr = np.asarray(array)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow(header)
        for row in arr:
            writer.writerow([_format_cell(v) for v in row])


def _format_cell(v) -> str:
    if isinstance(v, (np.integer, int)):
        return str(int(v))
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 2**53 else repr(v)


# ---------------------------------------------------------------------------
# typed loaders


def detect_format(path, fmt: str | None = None) -> str:
    if fmt is not None:
        if fmt not in ("csv", "tensor"):
            raise ParseError(f"unknown matrix format {fmt!r}")
        return fmt
    path = Path(path)
    if path.suffix.lower() in (".csv", ".txt"):
        return "csv"
    with open(path, "rb") as fh:
        head = fh.read(4)
    return "tensor" if head == TENSOR_MAGIC else "csv"


def _load_raw(path, fmt: str | None) -> CsvTable:
    if not Path(path).is_file():
        raise ParseError(f"{path}: no such file")
    if detect_format(path, fmt) == "tensor":
        arr = read_tensor(path)
        if arr.ndim == 0:
            raise ValidationError(f"{path}: scalar tensor is not a matrix")
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        elif arr.ndim > 2:
            arr = arr.reshape(arr.shape[0], -1)
        return CsvTable(arr)
    return read_csv(path)


def select_column(table: CsvTable, column) -> int:
    """Resolve a column given as an index (negative allowed) or a header name."""
    n_cols = table.values.shape[1]
    if isinstance(column, str) and not column.lstrip("-").isdigit():
        if not table.header or column not in table.header:
            raise ValidationError(f"no column named {column!r}")
        return table.header.index(column)
    idx = int(column)
    if not -n_cols <= idx < n_cols:
        raise ValidationError(f"column {idx} out of range for {n_cols} columns")
    return idx % n_cols


def load_matrix(path, fmt: str | None = None, *, drop_column=None) -> np.ndarray:
    """Load a validated point or target matrix, optionally without one column."""
    table = _load_raw(path, fmt)
    values = table.values
    if drop_column is not None:
        values = np.delete(values, select_column(table, drop_column), axis=1)
    return as_points(values, name=str(path))


def load_labels(path, fmt: str | None = None, *, column=None, n_classes: int | None = None) -> np.ndarray:
    """Load an integer label vector from a one-column file or a designated column."""
    table = _load_raw(path, fmt)
    values = table.values
    if column is not None:
        values = values[:, select_column(table, column)]
    elif values.shape[1] != 1:
        raise ValidationError(
            f"{path}: {values.shape[1]} columns; name the label column explicitly"
        )
    return as_labels(values, n_classes=n_classes)


# ---------------------------------------------------------------------------
# layer stacks


@dataclass
class LayerStack:
    """Named activation matrices of one sample set, in layer order.

    ``response`` holds class labels when ``kind == "labels"`` and a target
    matrix when ``kind == "targets"``.
    """

    names: list[str]
    layers: list[np.ndarray]
    kind: str
    response: np.ndarray
    sources: list[str] = field(default_factory=list)
    response_source: str | None = None

    def __post_init__(self):
        if self.kind not in ("labels", "targets"):
            raise ValidationError(f"layer stack kind must be labels or targets, got {self.kind!r}")
        if len(self.names) != len(self.layers) or not self.layers:
            raise ValidationError("layer stack needs one name per layer and at least one layer")
        n = len(self.response)
        for name, mat in zip(self.names, self.layers):
            if mat.shape[0] != n:
                raise ValidationError(
                    f"layer {name!r} has {mat.shape[0]} samples, expected {n}"
                )

    def __iter__(self):
        return iter(zip(self.names, self.layers))

    def __len__(self) -> int:
        return len(self.layers)


def load_layer_stack(manifest, fmt: str | None = None) -> LayerStack:
    """Read a manifest and every file it names.

    Format: the first non-comment line is ``labels: PATH`` or ``targets: PATH``;
    each following line is a layer file, either ``PATH`` (named by its stem)
    or ``NAME = PATH``. ``#`` starts a comment line. Relative paths are
    resolved against the manifest's directory.
    """
    manifest = Path(manifest)
    if not manifest.is_file():
        raise ParseError(f"{manifest}: no such file")
    base = manifest.parent
    kind = response_path = None
    names, paths = [], []
    for lineno, raw in enumerate(manifest.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if kind is None:
            head, sep, rest = line.partition(":")
            if not sep or head.strip() not in ("labels", "targets"):
                raise ParseError(
                    f"{manifest}: line {lineno}: expected 'labels: PATH' or 'targets: PATH'"
                )
            kind, response_path = head.strip(), base / rest.strip()
            continue
        name, sep, rest = line.partition(" = ")
        path = base / (rest.strip() if sep else line)
        names.append(name.strip() if sep else path.stem)
        paths.append(path)
    if kind is None:
        raise ParseError(f"{manifest}: missing labels/targets header line")
    if not paths:
        raise ParseError(f"{manifest}: no layer files listed")
    if kind == "labels":
        response = load_labels(response_path, fmt)
    else:
        response = as_targets(load_matrix(response_path, fmt))
    layers = []
    for name, path in zip(names, paths):
        mat = load_matrix(path, fmt)
        if mat.shape[0] != len(response):
            raise ValidationError(
                f"layer {name!r} ({path}) has {mat.shape[0]} samples, "
                f"{kind} file has {len(response)}"
            )
        layers.append(mat)
    return LayerStack(names, layers, kind, response, [str(p) for p in paths], str(response_path))
