"""Aggregation of rate samples: empirical CDFs, gains, KS distance, saturation."""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "RateCdf",
    "SaturationResult",
    "build_cdf",
    "gain_percent",
    "ks_distance",
    "detect_saturation",
]

CELL_EDGE_Q = 0.05


@dataclass
class RateCdf:
    """Empirical distribution of rate (or any scalar) samples.

    Quantiles interpolate linearly between order statistics; cell_edge is the
    0.05 quantile, the cell-edge statistic.
    """

    samples: np.ndarray  # sorted ascending
    n: int
    mean: float
    cell_edge: float

    def quantile(self, q):
        return float(np.quantile(self.samples, q))

    def cdf_at(self, x):
        """P[sample <= x], vectorized over x."""
        return np.searchsorted(self.samples, x, side="right") / self.n

    def summary(self):
        qs = [1, 5, 25, 50, 75, 95, 99]
        return {
            "n": self.n,
            "mean": self.mean,
            "cell_edge": self.cell_edge,
            "quantiles": {str(p): self.quantile(p / 100.0) for p in qs},
        }


def build_cdf(samples) -> RateCdf:
    """Sort samples into an empirical CDF with mean and cell-edge summaries."""
    s = np.sort(np.asarray(samples, dtype=float).ravel())
    if s.size == 0:
        raise ValueError("cannot build a CDF from no samples")
    return RateCdf(samples=s, n=s.size, mean=float(s.mean()),
                   cell_edge=float(np.quantile(s, CELL_EDGE_Q)))


def gain_percent(test: RateCdf, baseline: RateCdf, statistic="mean") -> float:
    """Percentage improvement of `test` over `baseline` on the given statistic."""
    if statistic not in ("mean", "cell_edge"):
        raise ValueError("statistic must be 'mean' or 'cell_edge'")
    b = getattr(baseline, statistic)
    t = getattr(test, statistic)
    if b <= 0:
        raise ZeroDivisionError("baseline statistic is not positive; gain undefined")
    return 100.0 * (t - b) / b


def ks_distance(a: RateCdf, b: RateCdf) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b|."""
    grid = np.concatenate([a.samples, b.samples])
    return float(np.max(np.abs(a.cdf_at(grid) - b.cdf_at(grid))))


@dataclass
class SaturationResult:
    saturated: bool
    snr_db: float | None
    plateau: float | None


def detect_saturation(snr_grid, means, rel_step=0.02, per_db=5.0) -> SaturationResult:
    """Find where a mean-rate SNR sweep stops growing.

    Saturation is the smallest grid SNR beyond which every relative increase,
    normalized per `per_db` dB, stays below `rel_step`.  The plateau is the
    mean of the tail from that point on.  Returns saturated=False when no
    such point exists in range.
    """
    snr = np.asarray(snr_grid, dtype=float)
    m = np.asarray(means, dtype=float)
    if snr.size < 4:
        raise ValueError("need at least 4 sweep points")
    if np.any(np.diff(snr) <= 0):
        raise ValueError("SNR grid must be strictly increasing")
    steps = np.diff(m) / m[:-1] * (per_db / np.diff(snr))
    for i in range(steps.size):
        if np.all(steps[i:] < rel_step):
            return SaturationResult(True, float(snr[i]), float(m[i:].mean()))
    return SaturationResult(False, None, None)
