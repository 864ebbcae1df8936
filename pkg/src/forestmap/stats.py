"""Density estimates, histograms, bandwidths, and confusion matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, TEST, TRAIN
from .forest import Forest, predict

GRID_SIZE = 256


@dataclass
class DensityCurve:
    feature: int
    grid: np.ndarray  # (256,) evenly spaced, spanning [min - h, max + h]
    density: np.ndarray
    bandwidth: float

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.grid))


@dataclass
class ConfusionMatrix:
    counts: np.ndarray  # (C, C), row = true, column = predicted

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        total = self.total
        return float(np.trace(self.counts)) / total if total else 0.0


def silverman_bandwidth(values: np.ndarray) -> float:
    """0.9 * min(s, IQR/1.34) * n^(-1/5), with degenerate-spread fallbacks."""
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    if n < 2:
        raise ValueError("bandwidth needs at least 2 values")
    s = float(np.std(values, ddof=1))
    q25, q75 = np.quantile(values, [0.25, 0.75])  # type-7 interpolation
    spread = min(s, float(q75 - q25) / 1.34)
    if spread == 0.0:
        rng = float(values.max() - values.min())
        if rng == 0.0:
            return 1e-9
        return max(1e-9, 1e-3 * rng)
    return 0.9 * spread * n ** (-1.0 / 5.0)


def kde(values: np.ndarray, bandwidth: float, feature: int = 0) -> DensityCurve:
    """Epanechnikov kernel density on a 256-point grid spanning [min-h, max+h]."""
    if bandwidth <= 0.0:
        raise ValueError("bandwidth must be positive")
    values = np.asarray(values, dtype=np.float64)
    grid = np.linspace(values.min() - bandwidth, values.max() + bandwidth, GRID_SIZE)
    u = (grid[:, None] - values[None, :]) / bandwidth
    kernel = np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u**2), 0.0)
    density = kernel.sum(axis=1) / (len(values) * bandwidth)
    return DensityCurve(feature, grid, density, bandwidth)


def density_curve(values: np.ndarray, feature: int = 0, tolerance: float = 1e-3) -> DensityCurve:
    """Sidebar density: Silverman bandwidth, widened minimally when the grid is
    too coarse to integrate the kernels to within tolerance."""
    h = silverman_bandwidth(values)
    curve = kde(values, h, feature)
    while abs(curve.integral() - 1.0) > 0.5 * tolerance:
        h *= 1.25
        curve = kde(values, h, feature)
    return curve


def histogram(values: np.ndarray, category_count: int) -> np.ndarray:
    """One bin per ordinal category; counts sum to len(values)."""
    values = np.asarray(values)
    if len(values) and (values.min() < 0 or values.max() >= category_count):
        raise ValueError("value outside category range")
    return np.bincount(values.astype(np.int64), minlength=category_count)


def forest_confusion(forest: Forest, dataset: Dataset, split: int = TEST) -> ConfusionMatrix:
    """Score every row of the chosen split through the forest vote."""
    idx = np.flatnonzero(dataset.split == split)
    if len(idx) == 0:
        raise ValueError("empty split")
    counts = np.zeros((dataset.n_classes, dataset.n_classes), dtype=np.int64)
    for i in idx:
        counts[int(dataset.labels[i]), predict(forest, dataset.rows[i])] += 1
    return ConfusionMatrix(counts)
