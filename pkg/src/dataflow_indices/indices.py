"""Separation and smoothness indices over a point cloud.

Separation asks whether each sample's nearest neighbours carry its class
label; smoothness asks whether each sample's nearest neighbours in feature
space are also close to it in target space. Both come in an order-``r``
strict form that looks at the ``r`` nearest neighbours instead of one.

Per-sample terms are summed with :func:`math.fsum`, so every index is the
correctly rounded mean of its terms and does not depend on summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ValidationError
from .neighbors import NeighborTable, as_points, knn, pair_sq_distances

__all__ = [
    "DEFAULT_BETA",
    "QuantizationSpec",
    "SmoothnessTerms",
    "as_labels",
    "as_targets",
    "monotonicity_violations",
    "quantize_targets",
    "separation_count",
    "separation_index",
    "separation_index_r",
    "separation_profile",
    "si_smi_bridge",
    "smoothness_index",
    "smoothness_index_r",
    "smoothness_profile",
    "smoothness_terms",
]

DEFAULT_BETA = 4.0


def as_labels(labels, n_samples: int | None = None, n_classes: int | None = None) -> np.ndarray:
    """Validate a label vector and return it as int64.

    Labels only need to be integral; indices compare them for equality. When
    ``n_classes`` is given every label must also lie in ``1..n_classes``.
    """
    arr = np.asarray(labels)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValidationError(f"labels: expected a 1-D vector, got shape {arr.shape}")
    if np.issubdtype(arr.dtype, np.integer):
        out = arr.astype(np.int64)
    elif np.issubdtype(arr.dtype, np.floating):
        bad = ~np.isfinite(arr) | (arr != np.round(arr))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise ValidationError(f"labels: non-integer label {arr[i]!r} at row {i}")
        out = arr.astype(np.int64)
    else:
        raise ValidationError(f"labels: expected integers, got dtype {arr.dtype}")
    if n_samples is not None and out.shape[0] != n_samples:
        raise ValidationError(
            f"labels: length {out.shape[0]} does not match {n_samples} samples"
        )
    if n_classes is not None:
        bad = (out < 1) | (out > n_classes)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise ValidationError(
                f"labels: label {out[i]} at row {i} outside 1..{n_classes}"
            )
    return out


def as_targets(Y, n_samples: int | None = None) -> np.ndarray:
    Y = as_points(Y, name="targets")
    if n_samples is not None and Y.shape[0] != n_samples:
        raise ValidationError(
            f"targets: {Y.shape[0]} rows do not match {n_samples} samples"
        )
    return Y


def _check_order(r, n: int) -> int:
    if isinstance(r, bool) or not isinstance(r, (int, np.integer)) or not 1 <= r <= n - 1:
        raise ParameterError(f"order r must satisfy 1 <= r <= Q - 1 = {n - 1}, got {r!r}")
    return int(r)


def _check_beta(beta) -> float:
    beta = float(beta)
    if not (math.isfinite(beta) and beta > 0):
        raise ParameterError(f"beta must be a positive finite number, got {beta!r}")
    return beta


# ---------------------------------------------------------------------------
# separation


def _match_matrix(labels: np.ndarray, table: NeighborTable) -> np.ndarray:
    """``out[q, k]`` is True when the first ``k + 1`` neighbours of q all share its label."""
    same = labels[table.order] == labels[:, None]
    return np.logical_and.accumulate(same, axis=1)


def separation_profile(X, labels, max_r: int = 1, *, threads: int | None = None) -> np.ndarray:
    """Match counts for orders ``1..max_r`` from a single neighbour search.

    Returns an int64 array whose entry ``k`` is the number of samples whose
    ``k + 1`` nearest neighbours all share their label.
    """
    X = as_points(X)
    labels = as_labels(labels, X.shape[0])
    max_r = _check_order(max_r, X.shape[0])
    table = knn(X, max_r, threads=threads)
    return _match_matrix(labels, table).sum(axis=0).astype(np.int64)


def separation_count(X, labels, r: int = 1, *, threads: int | None = None) -> int:
    """Number of samples whose ``r`` nearest neighbours all share their label."""
    return int(separation_profile(X, labels, r, threads=threads)[-1])


def separation_index(X, labels, *, threads: int | None = None) -> float:
    """Fraction of samples whose nearest neighbour shares their label."""
    n = as_points(X).shape[0]
    return separation_count(X, labels, 1, threads=threads) / n


def separation_index_r(X, labels, r: int, *, threads: int | None = None) -> float:
    """Fraction of samples whose ``r`` nearest neighbours all share their label.

    Non-increasing in ``r``; equals :func:`separation_index` at ``r = 1``.
    """
    n = as_points(X).shape[0]
    return separation_count(X, labels, r, threads=threads) / n


# ---------------------------------------------------------------------------
# smoothness


@dataclass(frozen=True)
class SmoothnessTerms:
    """Per-sample pieces of the order-``r`` smoothness index.

    Attributes
    ----------
    weights : (Q, r) distance-ratio weights, 1 in the first column
    near_y : (Q, r) target-space squared distance to the k-th feature-space neighbour
    min_y : (Q, r) k-th smallest target-space squared distance
    exponents : (Q, r) ``weights * (near_y - min_y)``; the factor is ``exp(-beta * e)``
    products : (Q, r) running product of factors; column ``k`` is the term for order ``k + 1``
    """

    beta: float
    weights: np.ndarray
    near_y: np.ndarray
    min_y: np.ndarray
    exponents: np.ndarray
    products: np.ndarray

    def index(self, r: int | None = None) -> float:
        col = self.products.shape[1] if r is None else r
        return math.fsum(self.products[:, col - 1]) / self.products.shape[0]


def smoothness_terms(
    X, Y, r: int = 1, *, beta: float = DEFAULT_BETA, threads: int | None = None
) -> SmoothnessTerms:
    X = as_points(X)
    Y = as_targets(Y, X.shape[0])
    n = X.shape[0]
    r = _check_order(r, n)
    beta = _check_beta(beta)

    near_x = knn(X, r, threads=threads)
    near_y_table = knn(Y, r, threads=threads)
    rows = np.repeat(np.arange(n, dtype=np.int64), r)
    near_y = pair_sq_distances(Y, rows, near_x.order.ravel()).reshape(n, r)
    min_y = near_y_table.dists

    dx = near_x.dists
    positive = dx > 0
    weights = np.ones_like(dx)
    np.divide(dx[:, :1], dx, out=weights, where=positive)
    # column 0 is always exactly 1: either dx/dx or the zero-distance branch
    exponents = weights * (near_y - min_y)
    factors = np.exp(-beta * exponents)
    products = np.cumprod(factors, axis=1)
    return SmoothnessTerms(beta, weights, near_y, min_y, exponents, products)


def smoothness_index(X, Y, *, beta: float = DEFAULT_BETA, threads: int | None = None) -> float:
    """Mean of ``exp(-beta * (d_near - d_min))`` over samples.

    ``d_near`` is the target-space squared distance from a sample to its
    nearest feature-space neighbour and ``d_min`` the smallest target-space
    squared distance from that sample. Lies in ``(0, 1]``.
    """
    return smoothness_terms(X, Y, 1, beta=beta, threads=threads).index()


def smoothness_index_r(
    X, Y, r: int, *, beta: float = DEFAULT_BETA, threads: int | None = None
) -> float:
    """Strict smoothness of order ``r``, reported without clamping.

    The k-th factor is ``exp(-beta * w_k * (near_y_k - min_y_k))`` with
    ``w_k = |x - x_near(1)|^2 / |x - x_near(k)|^2`` (or 1 when the
    denominator is zero). Individual factors can exceed 1 for ``k > 1``.
    """
    return smoothness_terms(X, Y, r, beta=beta, threads=threads).index()


def smoothness_profile(
    X, Y, max_r: int, *, beta: float = DEFAULT_BETA, threads: int | None = None
) -> np.ndarray:
    """Smoothness indices for orders ``1..max_r`` from one pair of neighbour searches."""
    terms = smoothness_terms(X, Y, max_r, beta=beta, threads=threads)
    return np.array([terms.index(k) for k in range(1, max_r + 1)])


def monotonicity_violations(profile) -> list[int]:
    """Orders ``r >= 2`` whose value exceeds the value at ``r - 1``."""
    profile = np.asarray(profile, dtype=float)
    return [k + 2 for k in np.flatnonzero(profile[1:] > profile[:-1])]


# ---------------------------------------------------------------------------
# quantisation and the separation/smoothness bridge


@dataclass(frozen=True)
class QuantizationSpec:
    """Equal-width binning of a scalar target into ``n_c`` ordered levels."""

    n_c: int
    y_min: float
    y_max: float

    @property
    def rho(self) -> float:
        return (self.y_max - self.y_min) / self.n_c

    def label(self, y) -> np.ndarray:
        """Level in ``1..n_c`` with ``y_min + (l-1) rho <= y < y_min + l rho``.

        Values at or above ``y_max`` map to ``n_c``; values below ``y_min`` to 1.
        """
        y = np.asarray(y, dtype=np.float64)
        rho = self.rho
        lab = np.floor((y - self.y_min) / rho).astype(np.int64) + 1
        lab = np.clip(lab, 1, self.n_c)
        # correct rounding of the division against the interval test itself
        lower = self.y_min + (lab - 1) * rho
        lab = np.where((lab > 1) & (y < lower), lab - 1, lab)
        upper = self.y_min + lab * rho
        lab = np.where((lab < self.n_c) & (y >= upper), lab + 1, lab)
        return lab


def quantize_targets(y, n_c: int) -> tuple[np.ndarray, QuantizationSpec]:
    """Bin a scalar target into ``n_c`` equal-width class labels over its sample range."""
    if isinstance(n_c, bool) or not isinstance(n_c, (int, np.integer)) or n_c < 1:
        raise ParameterError(f"n_c must be a positive integer, got {n_c!r}")
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 2 and y.shape[1] == 1:
        y = y[:, 0]
    if y.ndim != 1:
        raise ValidationError("quantize_targets expects a scalar target per sample")
    if y.size == 0 or not np.isfinite(y).all():
        raise ValidationError("targets must be non-empty and finite")
    y_min, y_max = float(y.min()), float(y.max())
    if not y_max > y_min:
        raise ValidationError(f"degenerate target range: every value equals {y_min!r}")
    spec = QuantizationSpec(int(n_c), y_min, y_max)
    return spec.label(y), spec


def si_smi_bridge(X, labels, *, beta: float = DEFAULT_BETA, threads: int | None = None) -> float:
    """Smoothness index of class labels under the all-or-nothing class metric.

    Same-class pairs sit at distance 0 and cross-class pairs at infinity, so
    a term is ``exp(0) = 1`` when the nearest neighbour shares the label and
    ``exp(-inf) = 0`` otherwise. Every class needs at least two members.
    """
    X = as_points(X)
    labels = as_labels(labels, X.shape[0])
    beta = _check_beta(beta)
    classes, sizes = np.unique(labels, return_counts=True)
    if (sizes < 2).any():
        lone = classes[sizes < 2][0]
        raise ValidationError(f"class {lone} has a single member; the bridge needs at least two")
    nearest = knn(X, 1, threads=threads).order[:, 0]
    same = labels[nearest] == labels
    terms = np.where(same, np.exp(-beta * 0.0), 0.0)
    return math.fsum(terms) / X.shape[0]
