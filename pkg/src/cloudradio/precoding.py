"""Per-stream achievable rates for every transmission scheme.

Rates are log_base(1 + SINR) in bps/Hz (base 2 unless configured otherwise),
with unit transmit power per stream throughout: no water-filling, no uplink
power control.  Degenerate factorization streams get rate 0.
"""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, NoiseModel, PartialCsiView, take_partial_csi
from .numerics import hpd_inverse, lq_factor

__all__ = [
    "RateVector",
    "SinrBreakdown",
    "conventional_rates",
    "zfdpc_rates",
    "uplink_sic_rates",
    "zfdpc_partial_rates",
    "clustered_rates",
    "mmse_rates",
    "tic_rate",
    "smf_rate",
]


@dataclass
class RateVector:
    """Per-stream rates with their scheme tag and drop provenance."""

    rates: np.ndarray
    scheme: str
    drop_id: int | None = None


@dataclass
class SinrBreakdown:
    """Linear signal / interference / noise powers for one stream."""

    signal: float
    interference: float
    noise: float

    @property
    def sinr(self) -> float:
        return self.signal / (self.interference + self.noise)


def _rate(sinr, base):
    return np.log1p(sinr) / np.log(base)


def _sigma(noise):
    return noise.sigma_sq if isinstance(noise, NoiseModel) else noise


def _entries(H):
    return H.entries if isinstance(H, ChannelMatrix) else np.asarray(H)


def conventional_rates(H, noise, base=2.0, drop_id=None) -> RateVector:
    """Nearest-BS baseline: every other cohort BS interferes.

    rate_i = log(1 + |H_ii|^2 / (sigma^2 + sum_{j != i} |H_ij|^2))
    """
    P = np.abs(_entries(H)) ** 2
    sig = np.diag(P)
    interf = P.sum(axis=1) - sig
    return RateVector(_rate(sig / (_sigma(noise) + interf), base), "conventional", drop_id)


def zfdpc_rates(H, noise, base=2.0, drop_id=None) -> RateVector:
    """Downlink ZF-DPC: factor H = L Q, rate_i = log(1 + l_ii^2 / sigma^2)."""
    g = lq_factor(_entries(H)).stream_gains
    return RateVector(_rate(g**2 / _sigma(noise), base), "zfdpc", drop_id)


def uplink_sic_rates(H, noise, base=2.0, drop_id=None) -> RateVector:
    """Uplink successive cancellation: same factorization applied to H^T.

    Cancellation of previously decoded streams is assumed ideal, so the rates
    are log(1 + m_ii^2 / sigma^2) with H^T = M Q'.
    """
    g = lq_factor(_entries(H).T).stream_gains
    return RateVector(_rate(g**2 / _sigma(noise), base), "uplink-sic", drop_id)


def zfdpc_partial_rates(H, H_p: PartialCsiView, noise, base=2.0, drop_id=None) -> RateVector:
    """ZF-DPC driven by the partial-CSI factorization.

    Factor H_p = L_p Q_p and precode with Q_p^dagger; the effective channel is
    E = H Q_p^dagger.  DPC is credited with cancelling exactly the known
    triangular part, so for stream i the residual mismatch Z = E - L_p
    interferes for j < i and the unknown upper entries interfere in full:

        SINR_i = |E_ii|^2 / (sigma^2 + sum_{j<i} |Z_ij|^2 + sum_{j>i} |E_ij|^2)
    """
    He = _entries(H)
    fact = lq_factor(H_p.known)
    E = He @ fact.Q.conj().T
    Z = E - fact.L
    Zsq = np.abs(Z) ** 2
    Esq = np.abs(E) ** 2
    below = np.tril(Zsq, -1).sum(axis=1)
    above = np.triu(Esq, 1).sum(axis=1)
    sinr = np.diag(Esq) / (_sigma(noise) + below + above)
    sinr = np.where(fact.degenerate, 0.0, sinr)
    return RateVector(_rate(sinr, base), f"zfdpc-partial-l{H_p.l}", drop_id)


def clustered_rates(H_in, interference, noise, base=2.0, csi_l=None, drop_id=None) -> RateVector:
    """ZF-DPC inside the cluster with inter-cluster power added to the noise.

    H_in spans the in-cluster cohort only; `interference` is the per-stream
    uncancellable power from out-of-cluster BSs.  With csi_l given, the
    in-cluster precoder itself runs on partial CSI.
    """
    interference = np.asarray(interference, dtype=float)
    noise_eff = _sigma(noise) + interference
    He = _entries(H_in)
    if csi_l is None:
        g = lq_factor(He).stream_gains
        rates = _rate(g**2 / noise_eff, base)
        tag = "clustered"
    else:
        view = take_partial_csi(He, min(csi_l, He.shape[0]))
        rates = zfdpc_partial_rates(He, view, noise_eff, base=base).rates
        tag = f"clustered-partial-l{csi_l}"
    return RateVector(rates, tag, drop_id)


def mmse_rates(H, noise, base=2.0, drop_id=None) -> RateVector:
    """Joint linear MMSE: MSE = sigma^2 (H^dagger H + sigma^2 I)^-1.

    rate_i = -log(MSE_ii); the matrix inverted is HPD by construction.
    """
    He = _entries(H)
    s2 = _sigma(noise)
    k = He.shape[0]
    A = He.conj().T @ He + s2 * np.eye(k)
    A = 0.5 * (A + A.conj().T)
    mse = s2 * np.real(np.diag(hpd_inverse(A)))
    return RateVector(-np.log(mse) / np.log(base), "mmse", drop_id)


def tic_rate(H, noise, base=2.0, drop_id=None) -> RateVector:
    """Total interference cancellation: interference removed, not reused."""
    sig = np.abs(np.diag(_entries(H))) ** 2
    return RateVector(_rate(sig / _sigma(noise), base), "tic", drop_id)


def smf_rate(H, noise, l, base=2.0, drop_id=None) -> RateVector:
    """Spatial matched filter over the l strongest streams per row.

    The remaining k - l streams stay as interference:

        SINR_i = sum_top_l |H_ij|^2 / (sigma^2 + sum_rest |H_ij|^2)

    Entries follow the system model's z^(-alpha/2) amplitude convention, so
    combining reuses exactly the received powers the other schemes see.
    """
    P = np.abs(_entries(H)) ** 2
    k = P.shape[0]
    if not 1 <= l <= k:
        raise ValueError(f"combining order l={l} outside 1..{k}")
    srt = np.sort(P, axis=1)[:, ::-1]
    sig = srt[:, :l].sum(axis=1)
    rest = srt[:, l:].sum(axis=1)
    return RateVector(_rate(sig / (_sigma(noise) + rest), base), f"smf-l{l}", drop_id)
