"""Histograms, Kolmogorov-Smirnov tests, and noise-strength estimators.

The KS tests use the asymptotic 1% critical coefficient 1.63: all suites in
this package run at sample counts >= 1e4 where the asymptotic value is
accurate.  ``estimate_gap`` and ``estimate_lambda_mean`` recover the
depolarizing strength from scaled samples via the support floor and the
variance contraction ``var -> (1-lam)^2 * var`` respectively.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .laws import AnalyticLaw

KS_COEFF_1PCT = 1.63


@dataclass(frozen=True, eq=False)
class Histogram:
    """Density-normalized histogram; densities integrate to the in-range fraction."""

    edges: np.ndarray
    densities: np.ndarray
    count: int
    overflow: int = 0

    def __post_init__(self):
        if np.any(np.diff(self.edges) <= 0):
            raise ValueError("edges must be strictly increasing")
        if len(self.densities) != len(self.edges) - 1:
            raise ValueError("need exactly one density per bin")
        if np.any(np.asarray(self.densities) < 0):
            raise ValueError("densities must be nonnegative")

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


@dataclass(frozen=True)
class GofReport:
    """Result of a KS goodness-of-fit test at the fixed 1% level."""

    ks_statistic: float
    ks_critical_1pct: float
    n_samples: int
    passed: bool
    sup_location: float


def histogram(samples, bins: int, value_range: tuple[float, float]) -> Histogram:
    """Bin samples into a density histogram on ``value_range``.

    Samples outside the range are tallied in ``overflow`` and the densities
    are normalized by the total count, so they integrate to 1 minus the
    overflow fraction.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("cannot histogram an empty sample array")
    lo, hi = value_range
    if bins < 1 or not lo < hi:
        raise ValueError(f"need bins >= 1 and lo < hi, got bins={bins}, range={value_range}")
    counts, edges = np.histogram(samples, bins=bins, range=(lo, hi))
    total = samples.size
    densities = counts / (total * np.diff(edges))
    return Histogram(edges=edges, densities=densities, count=total,
                     overflow=int(total - counts.sum()))


def default_hist_range(lam: float = 0.0) -> tuple[float, float]:
    """Figure-style default range: covers the exponential tail for any lam."""
    return 0.0, max(10.0, lam + 8.0 * (1.0 - lam))


def ks_one_sample(samples, law: AnalyticLaw) -> GofReport:
    """Two-sided KS statistic of samples against an analytic law.

    The critical value is asymptotic; below a few thousand samples treat
    ``passed`` as advisory.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    cdf = np.asarray(law.cdf(x))
    grid = np.arange(1, n + 1) / n
    d_hi = grid - cdf
    d_lo = cdf - (grid - 1.0 / n)
    dev = np.maximum(d_hi, d_lo)
    i = int(np.argmax(dev))
    critical = KS_COEFF_1PCT / np.sqrt(n)
    stat = float(dev[i])
    return GofReport(ks_statistic=stat, ks_critical_1pct=float(critical),
                     n_samples=n, passed=stat < critical, sup_location=float(x[i]))


def ks_two_sample(a, b) -> GofReport:
    """Two-sided two-sample KS statistic with the asymptotic 1% critical value."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    n_a, n_b = a.size, b.size
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / n_a
    cdf_b = np.searchsorted(b, pooled, side="right") / n_b
    dev = np.abs(cdf_a - cdf_b)
    i = int(np.argmax(dev))
    critical = KS_COEFF_1PCT * np.sqrt((n_a + n_b) / (n_a * n_b))
    stat = float(dev[i])
    return GofReport(ks_statistic=stat, ks_critical_1pct=float(critical),
                     n_samples=n_a + n_b, passed=stat < critical,
                     sup_location=float(pooled[i]))


def estimate_gap(samples) -> float:
    """Support-floor estimate of the depolarizing strength: min(samples).

    Biased high: for an exactly depolarized source the minimum exceeds the
    true strength by roughly ``(1-lam)/len(samples)``, and it never falls
    below the true support floor.  Hardware data with readout smearing can
    push mass below the floor, in which case this underestimates.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("cannot estimate a gap from an empty sample array")
    return float(samples.min())


def estimate_lambda_mean(samples, law_shape: tuple[int, int, int]) -> float:
    """Moment estimate of the depolarizing strength from scaled samples.

    ``law_shape = (dim, dim_a, dim_b)`` names the ideal subsystem law; the
    scaled ideal variance is ``(dim - dim_b) / (dim_b * (dim + 1))`` and
    depolarization contracts it by ``(1-lam)^2`` while keeping the mean at 1.
    """
    samples = np.asarray(samples, dtype=float)
    dim, dim_a, dim_b = law_shape
    if dim != dim_a * dim_b:
        raise ValueError(f"law_shape {law_shape} is inconsistent: dim != dim_a * dim_b")
    var_ideal = (dim - dim_b) / (dim_b * (dim + 1))
    lam_hat = 1.0 - np.sqrt(samples.var() / var_ideal)
    return float(min(max(lam_hat, 0.0), 1.0))
