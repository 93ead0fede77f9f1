"""Exact brute-force nearest neighbours under squared Euclidean distance.

Every distance is accumulated feature by feature in ascending index order,
starting from 0.0, so a value computed here is bit-identical to the naive
double loop ``sum((x[j] - y[j]) ** 2 for j in range(d))``. Ties in distance
are broken toward the lower sample index.

Work is split into blocks of query rows. Each block is handled by a numba
kernel that releases the GIL, and blocks are dispatched on a thread pool;
every block owns a disjoint slice of the output, so results do not depend
on the number of threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ParameterError, ValidationError

__all__ = [
    "NeighborTable",
    "as_points",
    "knn",
    "pair_sq_distances",
    "pairwise_sq_distances",
    "resolve_threads",
]

ROW_BLOCK = 32
COL_TILE = 1024
# above this order a stable sort of the whole row beats insertion
INSERTION_MAX_R = 48


@dataclass(frozen=True)
class NeighborTable:
    """Per-sample neighbour orderings.

    ``order[q]`` lists the ``r`` samples closest to ``q`` (never ``q`` itself)
    by ascending squared distance, ties by ascending index; ``dists[q]`` holds
    the matching squared distances.
    """

    order: np.ndarray
    dists: np.ndarray

    @property
    def r(self) -> int:
        return self.order.shape[1]

    def __len__(self) -> int:
        return self.order.shape[0]

    def truncate(self, r: int) -> "NeighborTable":
        if not 1 <= r <= self.r:
            raise ParameterError(f"cannot truncate a table of order {self.r} to {r}")
        return NeighborTable(self.order[:, :r], self.dists[:, :r])


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if isinstance(threads, bool) or not isinstance(threads, (int, np.integer)) or threads < 1:
        raise ParameterError(f"threads must be a positive integer, got {threads!r}")
    return int(threads)


def as_points(X, name: str = "points") -> np.ndarray:
    """Validate ``X`` as a point matrix and return it as C-ordered float64.

    A 1-D input is read as ``Q`` samples of a single feature.
    """
    arr = np.asarray(X)
    if arr.dtype == object or not (
        np.issubdtype(arr.dtype, np.number) or arr.dtype == bool
    ):
        raise ValidationError(f"{name}: expected a numeric array, got dtype {arr.dtype}")
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValidationError(f"{name}: expected a 2-D array, got shape {arr.shape}")
    n_rows, n_cols = arr.shape
    if n_rows < 2:
        raise ValidationError(f"{name}: need at least 2 samples, got {n_rows}")
    if n_cols < 1:
        raise ValidationError(f"{name}: need at least 1 feature")
    bad = ~np.isfinite(arr)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise ValidationError(
            f"{name}: non-finite value {arr[row, col]!r} at row {row}, col {col}"
        )
    return arr


@njit(nogil=True, cache=True)
def _block_distances(X, XT, start, stop, out):
    n_feat, n = XT.shape
    # private accumulator: lets LLVM vectorise without aliasing checks on `out`
    acc = np.empty(COL_TILE)
    for h0 in range(0, n, COL_TILE):
        h1 = min(h0 + COL_TILE, n)
        width = h1 - h0
        for i in range(stop - start):
            q = start + i
            for h in range(width):
                acc[h] = 0.0
            for j in range(n_feat):
                xq = X[q, j]
                col = XT[j, h0:h1]
                for h in range(width):
                    diff = xq - col[h]
                    acc[h] += diff * diff
            for h in range(width):
                out[i, h0 + h] = acc[h]


@njit(nogil=True, cache=True)
def _select_insertion(row, q, r, idx_out, d_out):
    filled = 0
    for h in range(row.shape[0]):
        if h == q:
            continue
        v = row[h]
        if filled == r:
            if not v < d_out[r - 1]:
                continue
            pos = r - 1
        else:
            pos = filled
            filled += 1
        # strict comparison keeps earlier (lower) indices ahead of equal values
        while pos > 0 and d_out[pos - 1] > v:
            d_out[pos] = d_out[pos - 1]
            idx_out[pos] = idx_out[pos - 1]
            pos -= 1
        d_out[pos] = v
        idx_out[pos] = h


@njit(nogil=True, cache=True)
def _select_sorted(row, q, r, idx_out, d_out):
    perm = np.argsort(row, kind="mergesort")
    k = 0
    for p in range(perm.shape[0]):
        h = perm[p]
        if h == q:
            continue
        idx_out[k] = h
        d_out[k] = row[h]
        k += 1
        if k == r:
            break


@njit(nogil=True, cache=True)
def _knn_block(X, XT, start, stop, r, order, dists):
    n = XT.shape[1]
    buf = np.empty((stop - start, n))
    _block_distances(X, XT, start, stop, buf)
    for i in range(stop - start):
        q = start + i
        if r <= INSERTION_MAX_R:
            _select_insertion(buf[i], q, r, order[q], dists[q])
        else:
            _select_sorted(buf[i], q, r, order[q], dists[q])


@njit(nogil=True, cache=True)
def _pair_kernel(Y, rows, cols, out):
    n_feat = Y.shape[1]
    for p in range(rows.shape[0]):
        a = rows[p]
        b = cols[p]
        acc = 0.0
        for j in range(n_feat):
            diff = Y[a, j] - Y[b, j]
            acc += diff * diff
        out[p] = acc


def _run_blocks(fn, n_rows: int, threads: int | None) -> None:
    blocks = [(s, min(s + ROW_BLOCK, n_rows)) for s in range(0, n_rows, ROW_BLOCK)]
    n_workers = min(resolve_threads(threads), len(blocks))
    if n_workers == 1:
        for s, e in blocks:
            fn(s, e)
        return
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        for fut in [pool.submit(fn, s, e) for s, e in blocks]:
            fut.result()


def pairwise_sq_distances(X, *, threads: int | None = None) -> np.ndarray:
    """Full ``Q x Q`` matrix of squared Euclidean distances.

    Exactly symmetric with a zero diagonal. Memory is ``8 Q^2`` bytes; use
    :func:`knn` for large ``Q``.
    """
    X = as_points(X)
    XT = np.ascontiguousarray(X.T)
    out = np.empty((X.shape[0], X.shape[0]))

    def work(s, e):
        _block_distances(X, XT, s, e, out[s:e])

    _run_blocks(work, X.shape[0], threads)
    return out


def knn(X, r: int, *, threads: int | None = None) -> NeighborTable:
    """The ``r`` nearest other samples of every sample in ``X``."""
    X = as_points(X)
    n = X.shape[0]
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)) or not 1 <= r <= n - 1:
        raise ParameterError(f"order r must satisfy 1 <= r <= Q - 1 = {n - 1}, got {r!r}")
    r = int(r)
    XT = np.ascontiguousarray(X.T)
    order = np.empty((n, r), dtype=np.int64)
    dists = np.empty((n, r))

    def work(s, e):
        _knn_block(X, XT, s, e, r, order, dists)

    _run_blocks(work, n, threads)
    return NeighborTable(order, dists)


def pair_sq_distances(Y, rows, cols) -> np.ndarray:
    """Squared distances ``|Y[rows[p]] - Y[cols[p]]|^2`` for paired index arrays.

    Uses the same accumulation order as :func:`knn`, so a pair measured here
    and inside a neighbour table agree to the last bit.
    """
    Y = as_points(Y)
    rows = np.ascontiguousarray(rows, dtype=np.int64).ravel()
    cols = np.ascontiguousarray(cols, dtype=np.int64).ravel()
    if rows.shape != cols.shape:
        raise ValidationError("rows and cols must have the same length")
    out = np.empty(rows.shape[0])
    _pair_kernel(Y, rows, cols, out)
    return out
