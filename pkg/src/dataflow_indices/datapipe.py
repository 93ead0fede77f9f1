"""Transforms applied between loading data and computing an index."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError
from .indices import (
    DEFAULT_BETA,
    as_labels,
    as_targets,
    separation_count,
    smoothness_index_r,
)
from .neighbors import as_points

__all__ = ["Series", "WhitenStats", "lag_embed", "subset_sample", "whiten"]


@dataclass(frozen=True)
class WhitenStats:
    """Column means and population standard deviations."""

    mean: np.ndarray
    std: np.ndarray

    def apply(self, Y) -> np.ndarray:
        Y = np.asarray(Y, dtype=np.float64)
        if Y.ndim == 1:
            Y = Y.reshape(-1, 1)
        if Y.shape[1] != self.mean.shape[0]:
            raise ValidationError(
                f"expected {self.mean.shape[0]} target columns, got {Y.shape[1]}"
            )
        return (Y - self.mean) / self.std


def whiten(Y) -> tuple[np.ndarray, WhitenStats]:
    """Standardise every column to zero mean and unit population variance."""
    Y = as_targets(Y)
    mean = Y.mean(axis=0)
    std = Y.std(axis=0)
    for j, s in enumerate(std):
        if not s > 0:
            raise ValidationError(f"target column {j} has zero variance")
    stats = WhitenStats(mean, std)
    return stats.apply(Y), stats


@dataclass(frozen=True)
class Series:
    values: np.ndarray
    interval: str | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if not np.isfinite(v).all():
            raise ValidationError("series contains non-finite observations")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.shape[0]


def lag_embed(series, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Pair each observation with the ``n`` observations before it.

    Row ``i`` of ``X`` is ``[y[t-1], y[t-2], ..., y[t-n]]`` for ``t = n + i``
    and the matching target is ``y[t]``, returned as an ``(len - n, 1)`` matrix.
    """
    s = series if isinstance(series, Series) else Series(series)
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"lag count must be a positive integer, got {n!r}")
    if len(s) <= n:
        raise ValidationError(f"series of length {len(s)} is too short for {n} lags")
    y = s.values
    rows = len(s) - n
    X = np.empty((rows, n))
    for k in range(1, n + 1):
        X[:, k - 1] = y[n - k : n - k + rows]
    return X, y[n:].reshape(-1, 1).copy()


def subset_sample(
    X,
    response,
    sizes,
    seed: int,
    *,
    kind: str = "si",
    r: int = 1,
    beta: float = DEFAULT_BETA,
    threads: int | None = None,
) -> list[tuple[int, float]]:
    """Index value on growing prefixes of one seeded shuffle of the samples.

    ``kind`` is ``"si"`` (``response`` holds labels) or ``"smi"``
    (``response`` holds targets). Returns ``(size, value)`` pairs sorted by size.
    """
    X = as_points(X)
    n = X.shape[0]
    if kind == "si":
        response = as_labels(response, n)
    elif kind == "smi":
        response = as_targets(response, n)
    else:
        raise ParameterError(f"kind must be 'si' or 'smi', got {kind!r}")
    sizes = sorted({int(s) for s in sizes})
    if not sizes:
        raise ParameterError("at least one subset size is required")
    for s in sizes:
        if not max(2, r + 1) <= s <= n:
            raise ParameterError(f"subset size {s} outside {max(2, r + 1)}..{n}")

    perm = np.random.default_rng(seed).permutation(n)
    curve = []
    for s in sizes:
        idx = perm[:s]
        if kind == "si":
            value = separation_count(X[idx], response[idx], r, threads=threads) / s
        else:
            value = smoothness_index_r(X[idx], response[idx], r, beta=beta, threads=threads)
        curve.append((s, value))
    return curve
