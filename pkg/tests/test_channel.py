import numpy as np
import pytest

from cloudradio import (Association, ClusterSplit, Cohort, NoiseModel, build_channel,
                        inter_cluster_interference, take_partial_csi)
from cloudradio.channel import MIN_DISTANCE_KM, diagonal_dominance_fraction


def _assoc(distances):
    d = np.asarray(distances, dtype=float)
    return Association(primary_bs=np.argmin(d, axis=1), distances=d)


def _cohort(k):
    return Cohort(bs_indices=np.arange(k), ue_indices=np.arange(k))


def test_pathloss_exponent_law(rng):
    # doubling every distance divides each |entry| by 2^(alpha/2) = 4 at alpha=4
    z = np.array([[1.0, 2.0], [2.5, 1.5]])
    h1 = build_channel(_cohort(2), _assoc(z), 1.0, 4.0, np.random.default_rng(9))
    h2 = build_channel(_cohort(2), _assoc(2 * z), 1.0, 4.0, np.random.default_rng(9))
    assert np.allclose(np.abs(h1.entries) / np.abs(h2.entries), 4.0)


def test_fade_power_normalization(rng):
    # unit distances strip the path loss, leaving E|h|^2 = 1/mu
    for mu in (1.0, 2.5):
        H = build_channel(_cohort(100), _assoc(np.ones((100, 100))), mu, 4.0, rng)
        assert abs(np.mean(np.abs(H.entries) ** 2) - 1.0 / mu) < 0.03 / mu


def test_zero_distance_clamped():
    z = np.array([[0.0, 3.0], [3.0, 1.0]])
    H = build_channel(_cohort(2), _assoc(z), 1.0, 4.0, np.random.default_rng(1))
    assert np.all(np.isfinite(H.entries))
    # clamped magnitude corresponds to 1 m, not infinity
    assert np.abs(H.entries[0, 0]) < 2.0 * MIN_DISTANCE_KM ** -2


def test_build_channel_parameter_errors(rng):
    z = np.eye(2) + 1.0
    with pytest.raises(ValueError):
        build_channel(_cohort(2), _assoc(z), 1.0, 2.0, rng)  # alpha must exceed 2
    with pytest.raises(ValueError):
        build_channel(_cohort(2), _assoc(z), 0.0, 4.0, rng)
    # diagonal not the row minimum: cohort contradicts nearest-BS association
    bad = _assoc(np.array([[2.0, 1.0], [1.0, 2.0]]))
    with pytest.raises(ValueError):
        build_channel(_cohort(2), bad, 1.0, 4.0, rng)


def test_distance_dominance_of_diagonal(drop):
    _, _, assoc, cohort, _ = drop
    z = assoc.distances[np.ix_(cohort.ue_indices, cohort.bs_indices)]
    assert np.all(np.diag(z) <= z.min(axis=1) + 1e-12)


def test_magnitude_dominance_is_only_statistical(rng, drop):
    _, _, _, _, H = drop
    frac = diagonal_dominance_fraction(H)
    assert 0.0 <= frac <= 1.0


def test_partial_csi_full_budget_is_identity(drop):
    _, _, _, _, H = drop
    view = take_partial_csi(H, H.k)
    assert np.array_equal(view.known, H.entries)


def test_partial_csi_single_budget_keeps_row_argmax(rng):
    H = build_channel(_cohort(4), _assoc(np.ones((4, 4)) + np.eye(4) * -0.5), 1.0, 4.0, rng)
    view = take_partial_csi(H, 1)
    for i in range(4):
        j = np.argmax(np.abs(H.entries[i]))
        row = view.known[i].copy()
        assert row[j] == H.entries[i, j]
        row[j] = 0
        assert np.all(row == 0)


def test_partial_csi_zero_pattern_matches_sort_oracle(rng):
    k, l = 5, 3
    H = build_channel(_cohort(k), _assoc(np.ones((k, k)) - 0.5 * np.eye(k)), 1.0, 4.0, rng)
    view = take_partial_csi(H, l)
    for i in range(k):
        keep = set(np.argsort(np.abs(H.entries[i]))[::-1][:l].tolist())
        nz = set(np.flatnonzero(view.known[i]).tolist())
        assert nz == keep
        for j in nz:
            assert view.known[i, j] == H.entries[i, j]
    assert np.count_nonzero(view.known) == k * l


def test_partial_csi_distance_based_selection(rng):
    k = 4
    i, j = np.indices((k, k))
    z = 1.0 + np.abs(i - j) + 0.01 * j
    H = build_channel(_cohort(k), _assoc(z), 1.0, 4.0, rng)
    view = take_partial_csi(H, 2, distances=z)
    for i in range(k):
        nearest_two = set(np.argsort(z[i])[:2].tolist())
        assert set(np.flatnonzero(view.known[i]).tolist()) == nearest_two


def test_partial_csi_budget_range(drop):
    *_, H = drop
    with pytest.raises(ValueError):
        take_partial_csi(H, 0)
    with pytest.raises(ValueError):
        take_partial_csi(H, H.k + 1)


def test_inter_cluster_empty_out_set(rng):
    split = ClusterSplit(in_cluster=np.array([0, 1]), out_cluster=np.array([], dtype=int),
                         radius=5.0)
    assert inter_cluster_interference(split, 0, _assoc(np.ones((1, 2))), 1.0, 4.0, rng) == 0.0


def test_inter_cluster_single_interferer_mean(rng):
    # one interferer at 1 km: E[I_r] = 1/mu
    split = ClusterSplit(in_cluster=np.array([0]), out_cluster=np.array([1]), radius=1.0)
    assoc = _assoc(np.array([[0.5, 1.0]]))
    samples = [inter_cluster_interference(split, 0, assoc, 1.0, 4.0, rng) for _ in range(20000)]
    assert abs(np.mean(samples) - 1.0) < 0.03


def test_inter_cluster_monotone_in_radius(rng):
    # same fade draw per radius (fixed substream): I_r can only shrink as the
    # cluster grows
    n_bs = 40
    pos = rng.uniform(0, 10, (n_bs, 2))
    ued = np.hypot(pos[:, 0] - 5.0, pos[:, 1] - 5.0)
    assoc = _assoc(ued[None, :])
    center_d = ued
    for trial in range(200):
        seed = 1000 + trial
        last = np.inf
        for radius in (2.0, 4.0, 6.0, 8.0):
            inside = center_d <= radius
            split = ClusterSplit(np.flatnonzero(inside), np.flatnonzero(~inside), radius)
            val = inter_cluster_interference(split, 0, assoc, 1.0, 4.0,
                                             np.random.default_rng(seed))
            assert val <= last + 1e-12
            last = val


def test_noise_model():
    n = NoiseModel.from_snr_db(10.0)
    assert n.sigma_sq == pytest.approx(0.1)
    assert NoiseModel.from_snr_db(0.0).sigma_sq == pytest.approx(1.0)
    with pytest.raises(ValueError):
        NoiseModel(sigma_sq=0.0, snr_db=np.inf)
    # network-average diagnostic: 1/(16 lam^2 sigma^2) in dB
    assert n.network_average_snr_db(0.25) == pytest.approx(10.0)


def test_channel_csv_shape(tmp_path, drop):
    *_, H = drop
    path = tmp_path / "H.csv"
    H.to_csv(path)
    raw = np.loadtxt(path, delimiter=",", ndmin=2)
    assert raw.shape == (H.k, 2 * H.k)
    assert np.allclose(raw[:, 0::2] + 1j * raw[:, 1::2], H.entries)
