"""Channel construction: Rayleigh fading over power-law path loss.

The cohort channel is a k x k complex matrix with entry (i, j) equal to
h_ij * z_ij^(-alpha/2), where row i is UE i (stream i) and column j is BS j,
z_ij the UE-to-BS distance and h_ij a circularly-symmetric complex Gaussian
fade with mean power 1/mu.  Nearest-BS association makes the diagonal the
row-wise distance minimum, which is what the triangular precoder exploits.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import Association, ClusterSplit, Cohort

__all__ = [
    "MIN_DISTANCE_KM",
    "ChannelMatrix",
    "NoiseModel",
    "PartialCsiView",
    "build_channel",
    "take_partial_csi",
    "inter_cluster_interference",
    "diagonal_dominance_fraction",
]

# clamp for colocated UE/BS; avoids the path-loss singularity at z -> 0
MIN_DISTANCE_KM = 1e-3


@dataclass
class ChannelMatrix:
    """Faded path-loss gains for one cohort (see module docstring)."""

    entries: np.ndarray
    alpha: float
    mu: float

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    def to_csv(self, path):
        """Re/im interleaved rows; used by the harness debug flag."""
        k = self.k
        out = np.empty((k, 2 * k))
        out[:, 0::2] = self.entries.real
        out[:, 1::2] = self.entries.imag
        np.savetxt(path, out, fmt="%.9g", delimiter=",")


@dataclass(frozen=True)
class NoiseModel:
    """Per-stream AWGN power under unit transmit power.

    sigma_sq = 10^(-snr_db/10), i.e. snr_db is the transmitter SNR 1/sigma^2.
    """

    sigma_sq: float
    snr_db: float

    def __post_init__(self):
        if self.sigma_sq <= 0:
            raise ValueError("noise power must be positive")

    @classmethod
    def from_snr_db(cls, snr_db) -> "NoiseModel":
        return cls(sigma_sq=10.0 ** (-snr_db / 10.0), snr_db=float(snr_db))

    def network_average_snr_db(self, lambda_b) -> float:
        # diagnostic only: average SNR of the PPP framework, 1/(16 lam^2 sigma^2)
        return -10.0 * np.log10(16.0 * lambda_b**2 * self.sigma_sq)


@dataclass
class PartialCsiView:
    """H restricted to the l best-known entries per row, zero elsewhere."""

    known: np.ndarray
    l: int


def build_channel(cohort: Cohort, assoc: Association, mu, alpha, rng) -> ChannelMatrix:
    """Draw fades and assemble the cohort channel matrix.

    Requires alpha > 2 (interference field integrability) and mu > 0.  The
    row-wise distance dominance of the diagonal is checked exhaustively.
    """
    if cohort.k < 1:
        raise ValueError("cohort is empty")
    if not alpha > 2:
        raise ValueError("path-loss exponent must exceed 2")
    if not mu > 0:
        raise ValueError("mu must be positive")
    z = assoc.distances[np.ix_(cohort.ue_indices, cohort.bs_indices)]
    z = np.maximum(z, MIN_DISTANCE_KM)
    zd = np.diag(z)
    if np.any(zd > z.min(axis=1) + 1e-12):
        raise ValueError("cohort violates nearest-BS association")
    k = cohort.k
    h = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) * np.sqrt(0.5 / mu)
    return ChannelMatrix(entries=h * z ** (-alpha / 2.0), alpha=float(alpha), mu=float(mu))


def take_partial_csi(H, l, distances=None) -> PartialCsiView:
    """Keep the l best entries per row, zero the rest.

    "Best" is largest instantaneous magnitude by default; pass the cohort
    distance matrix to select the l nearest BSs per row instead (sensitivity
    studies only).  Accepts a ChannelMatrix or a plain array.
    """
    entries = getattr(H, "entries", H)
    k = entries.shape[0]
    if not 1 <= l <= k:
        raise ValueError(f"CSI budget l={l} outside 1..{k}")
    score = -distances if distances is not None else np.abs(entries)
    keep = np.argsort(-score, axis=1, kind="stable")[:, :l]
    known = np.zeros_like(entries)
    rows = np.repeat(np.arange(k), l)
    known[rows, keep.ravel()] = entries[rows, keep.ravel()]
    return PartialCsiView(known=known, l=int(l))


def inter_cluster_interference(split: ClusterSplit, ue_index, assoc: Association,
                               mu, alpha, rng) -> float:
    """Received power at one UE from all out-of-cluster BSs, fresh fades.

    Out-of-cluster streams are not part of the cooperating channel matrix, so
    their fades are drawn here; each carries unit transmit power.
    """
    out = split.out_cluster
    if out.size == 0:
        return 0.0
    z = np.maximum(assoc.distances[ue_index, out], MIN_DISTANCE_KM)
    fades = rng.exponential(1.0 / mu, size=out.size)
    return float(np.sum(fades * z ** (-alpha)))


def diagonal_dominance_fraction(H: ChannelMatrix) -> float:
    """Fraction of streams whose faded diagonal dominates row AND column.

    Distance-level row dominance is guaranteed by association; the full
    magnitude-level property only holds statistically under fading, so it is
    reported rather than asserted.
    """
    a = np.abs(H.entries)
    d = np.diag(a)
    row_ok = d >= a.max(axis=1) - 1e-15
    col_ok = d >= a.max(axis=0) - 1e-15
    return float(np.mean(row_ok & col_ok))
