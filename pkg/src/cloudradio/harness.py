"""Experiment runner: declarative configs, per-figure presets, deterministic
seeding, CSV/JSON emission, and Monte Carlo vs analytic cross-validation.

A run iterates independent drops.  Each drop derives its own random substream
from (seed, drop index), so results are byte-identical for a given seed and
config regardless of worker count.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from . import analytic, precoding, thp
from .analytic import DEFAULT_CONFIG as _QUAD_DEFAULTS
from .channel import NoiseModel, build_channel, inter_cluster_interference, take_partial_csi
from .geometry import (Cohort, ClusterSplit, PointSet, Region, associate, sample_ppp,
                       select_cohort, split_cluster)
from .numerics import lq_factor
from .stats import build_cdf, gain_percent

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentReport",
    "PRESETS",
    "load_config_file",
    "preset_config",
    "validate",
    "run",
    "crossvalidate",
    "simulate_drop",
    "tagged_rate_samples",
]

RATE_SCHEMES = (
    "conventional",
    "zfdpc",
    "uplink-sic",
    "mmse",
    "tic",
    "smf",
    "smf2",
    "zfdpc-partial",
    "clustered",
    "clustered-partial",
)
POWER_SCHEMES = ("thp-adaptive", "thp-fixed4", "thp-fixed16", "thp-fixed64")
CROSSVAL_SCHEMES = ("tic", "smf2", "smf2-interf")


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass
class ExperimentConfig:
    region_km: tuple = (10.0, 10.0)
    lambda_b: float = 0.3
    lambda_u: float | None = None  # default: 10 * lambda_b (occupancy margin)
    alpha: float = 4.0
    mu: float = 1.0
    snr_db: float | list = 10.0
    drops: int = 500
    schemes: tuple = ("conventional", "zfdpc")
    csi_l: int | None = None
    cluster_radius_km: float | None = None
    smf_l: int | None = None  # None: full combining (l = k)
    log_base: float = 2.0
    seed: int = 1234
    output_dir: str | None = None
    thp_vectors: int = 100
    crossval_samples: int = 100_000

    @property
    def lambda_u_effective(self) -> float:
        return self.lambda_u if self.lambda_u is not None else 10.0 * self.lambda_b

    @property
    def snr_list(self) -> list:
        s = self.snr_db
        return list(s) if isinstance(s, (list, tuple)) else [s]

    def echo(self) -> dict:
        d = asdict(self)
        d["region_km"] = list(self.region_km)
        d["schemes"] = list(self.schemes)
        return d


def validate(config: ExperimentConfig):
    """Check every config invariant; returns (errors, warnings) naming fields."""
    errors, warnings = [], []
    w, h = config.region_km
    if not (w > 0 and h > 0):
        errors.append("region_km: dimensions must be positive")
    if config.lambda_b <= 0:
        errors.append("lambda_b: must be positive")
    if config.lambda_u is not None and config.lambda_u < config.lambda_b:
        warnings.append("lambda_u: below lambda_b, BS occupancy may fail")
    if not config.alpha > 2:
        errors.append("alpha: must exceed 2")
    if config.mu <= 0:
        errors.append("mu: must be positive")
    if config.drops < 1:
        errors.append("drops: must be at least 1")
    if not config.schemes:
        errors.append("schemes: must not be empty")
    known = set(RATE_SCHEMES) | set(POWER_SCHEMES)
    for s in config.schemes:
        if s not in known:
            errors.append(f"schemes: unknown scheme '{s}'")
    snrs = config.snr_list
    if len(snrs) > 1 and np.any(np.diff(snrs) <= 0):
        errors.append("snr_db: sweep must be strictly increasing")
    if config.csi_l is not None and config.csi_l < 1:
        errors.append("csi_l: must be at least 1")
    for s in config.schemes:
        if s in ("zfdpc-partial", "clustered-partial") and config.csi_l is None:
            errors.append(f"csi_l: required by scheme '{s}'")
        if s.startswith("clustered") and (config.cluster_radius_km or 0) <= 0:
            errors.append(f"cluster_radius_km: required by scheme '{s}'")
    if config.smf_l is not None and config.smf_l < 1:
        errors.append("smf_l: must be at least 1")
    if config.log_base <= 1:
        errors.append("log_base: must exceed 1")
    if config.thp_vectors < 1:
        errors.append("thp_vectors: must be at least 1")
    return errors, warnings


def _require_valid(config):
    errors, _ = validate(config)
    if errors:
        raise ConfigError("; ".join(errors))


# ---------------------------------------------------------------------------
# presets: one per figure of the reproduced rate study
# ---------------------------------------------------------------------------

PRESETS = {
    "fig-conv-zf": dict(schemes=("conventional", "zfdpc"), drops=500),
    "fig-noise": dict(schemes=("zfdpc",), snr_db=[-6.0, 0.0, 10.0, 20.0], drops=400),
    "fig-bounds": dict(schemes=("zfdpc", "tic", "smf", "smf2"), drops=500),
    "fig-uplink": dict(schemes=("conventional", "zfdpc", "uplink-sic", "mmse"), drops=500),
    "fig-partial": dict(schemes=("conventional", "zfdpc", "zfdpc-partial"), csi_l=6, drops=500),
    "fig-pbound": dict(schemes=("zfdpc-partial", "smf2"), csi_l=2, drops=500),
    "fig-cluster": dict(region_km=(20.0, 20.0), schemes=("conventional", "clustered"),
                        cluster_radius_km=10.0, drops=300),
    "fig-partial-4": dict(region_km=(20.0, 20.0), cluster_radius_km=4.0, csi_l=6,
                          schemes=("conventional", "clustered", "clustered-partial"), drops=300),
    "fig-partial-8": dict(region_km=(20.0, 20.0), cluster_radius_km=8.0, csi_l=6,
                          schemes=("conventional", "clustered", "clustered-partial"), drops=300),
    "fig-8-final": dict(region_km=(20.0, 20.0), lambda_b=0.1, cluster_radius_km=8.0, csi_l=6,
                        schemes=("clustered-partial",),
                        snr_db=[0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0],
                        drops=300),
    "fig-12-final": dict(region_km=(20.0, 20.0), lambda_b=0.1, cluster_radius_km=12.0, csi_l=10,
                         schemes=("clustered-partial",),
                         snr_db=[0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0],
                         drops=300),
    "fig-tx-pow": dict(schemes=("thp-adaptive", "thp-fixed4"), drops=200),
}


def preset_config(name, **overrides) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"preset: unknown preset '{name}'")
    merged = dict(PRESETS[name])
    merged.update(overrides)
    return ExperimentConfig(**merged)


def load_config_file(path) -> ExperimentConfig:
    """Parse a flat `key = value` text file into an ExperimentConfig."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return ExperimentConfig(**{k: _coerce(k, v) for k, v in values.items()})


def _coerce(key, val):
    if key == "region_km":
        parts = val.replace("x", ",").split(",")
        return tuple(float(p) for p in parts)
    if key == "schemes":
        return tuple(s.strip() for s in val.split(",") if s.strip())
    if key == "snr_db":
        parts = [float(p) for p in val.split(",")]
        return parts if len(parts) > 1 else parts[0]
    if key in ("drops", "csi_l", "smf_l", "seed", "thp_vectors", "crossval_samples"):
        return int(val)
    if key == "output_dir":
        return val
    if key == "lambda_u" and val.lower() in ("none", ""):
        return None
    return float(val)


# ---------------------------------------------------------------------------
# single-drop simulation
# ---------------------------------------------------------------------------


def _drop_rng(seed, drop_index):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(drop_index,)))


def simulate_drop(config: ExperimentConfig, drop_index: int) -> dict:
    """One network realization evaluated for every configured scheme.

    Returns {(scheme, snr_db): rates array}.  Power schemes produce a single
    sample per drop.  Channel and fades are shared across a SNR sweep so the
    sweep isolates the noise effect.
    """
    rng = _drop_rng(config.seed, drop_index)
    region = Region(*config.region_km)
    bs = sample_ppp(config.lambda_b, region, rng)
    ue = sample_ppp(config.lambda_u_effective, region, rng)
    if len(bs) == 0 or len(ue) == 0:
        return {}
    assoc = associate(bs, ue)
    cohort = select_cohort(assoc, rng)
    if cohort.k == 0:
        return {}
    H = build_channel(cohort, assoc, config.mu, config.alpha, rng)
    k = cohort.k
    base = config.log_base

    needs_cluster = any(s.startswith("clustered") for s in config.schemes)
    if needs_cluster:
        cohort_bs = PointSet(bs.points[cohort.bs_indices], config.lambda_b)
        local = split_cluster(cohort_bs, region.center, config.cluster_radius_km)
        # indices back into assoc columns / cohort streams
        split = ClusterSplit(in_cluster=cohort.bs_indices[local.in_cluster],
                             out_cluster=cohort.bs_indices[local.out_cluster],
                             radius=local.radius)
        in_streams = local.in_cluster
        if in_streams.size:
            sub = Cohort(bs_indices=cohort.bs_indices[in_streams],
                         ue_indices=cohort.ue_indices[in_streams])
            H_in = build_channel(sub, assoc, config.mu, config.alpha, rng)
            i_r = np.array([
                inter_cluster_interference(split, u, assoc, config.mu, config.alpha, rng)
                for u in sub.ue_indices
            ])
        else:
            H_in, i_r = None, None

    view = None
    if "zfdpc-partial" in config.schemes:
        view = take_partial_csi(H, min(config.csi_l, k))

    fact = lq_factor(H) if any(s.startswith("thp") for s in config.schemes) else None

    out = {}
    for snr in config.snr_list:
        noise = NoiseModel.from_snr_db(snr)
        for scheme in config.schemes:
            if scheme == "conventional":
                rates = precoding.conventional_rates(H, noise, base).rates
            elif scheme == "zfdpc":
                rates = precoding.zfdpc_rates(H, noise, base).rates
            elif scheme == "uplink-sic":
                rates = precoding.uplink_sic_rates(H, noise, base).rates
            elif scheme == "mmse":
                rates = precoding.mmse_rates(H, noise, base).rates
            elif scheme == "tic":
                rates = precoding.tic_rate(H, noise, base).rates
            elif scheme == "smf":
                rates = precoding.smf_rate(H, noise, min(config.smf_l or k, k), base).rates
            elif scheme == "smf2":
                rates = precoding.smf_rate(H, noise, min(2, k), base).rates
            elif scheme == "zfdpc-partial":
                rates = precoding.zfdpc_partial_rates(H, view, noise, base).rates
            elif scheme == "clustered":
                if H_in is None:
                    continue
                rates = precoding.clustered_rates(H_in, i_r, noise, base).rates
            elif scheme == "clustered-partial":
                if H_in is None:
                    continue
                rates = precoding.clustered_rates(H_in, i_r, noise, base,
                                                  csi_l=config.csi_l).rates
            elif scheme.startswith("thp"):
                mode = "adaptive" if scheme == "thp-adaptive" else int(scheme.removeprefix("thp-fixed"))
                rates = _thp_power_sample(fact, noise, mode, config, drop_index)
            else:  # pragma: no cover - validate() blocks unknown schemes
                raise ConfigError(f"schemes: unknown scheme '{scheme}'")
            out[(scheme, snr)] = rates
    return out


def _thp_power_sample(fact, noise, mode, config, drop_index):
    # fresh data substream so rate schemes stay unaffected by THP draws
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(drop_index, 1)))
    return np.array([thp.drop_power_sample(fact, noise, mode, rng,
                                           config.thp_vectors, config.log_base)])


# ---------------------------------------------------------------------------
# full runs
# ---------------------------------------------------------------------------


@dataclass
class ExperimentReport:
    name: str
    config: dict
    seed: int
    summaries: dict          # scheme -> snr(str) -> RateCdf summary dict
    gains_vs_conventional: dict
    wall_clock_s: float
    drops_effective: int
    crossval: dict | None = None

    def to_json(self, **kw):
        return json.dumps(asdict(self), indent=2, sort_keys=True, **kw)


def _worker(args):
    config, idx = args
    return idx, simulate_drop(config, idx)


def run(config: ExperimentConfig, workers=1, name="run", output_dir=None,
        dump_geometry=False, dump_channels=False, with_crossval=False) -> ExperimentReport:
    """Execute a config: simulate drops, aggregate, emit CSVs and a summary.

    Identical (seed, config) give byte-identical CSVs for any worker count.
    with_crossval additionally runs the analytic comparison for any scheme
    that has one and attaches the sup gaps to the report.
    """
    _require_valid(config)
    t0 = time.perf_counter()
    indices = list(range(config.drops))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(indices) // (workers * 8))
            results = dict(pool.map(_worker, [(config, i) for i in indices], chunksize=chunk))
    else:
        results = {i: simulate_drop(config, i) for i in indices}

    # aggregation is sorted by drop index, so worker scheduling cannot matter
    collected = {}
    effective = 0
    for i in sorted(results):
        drop = results[i]
        if drop:
            effective += 1
        for key, rates in drop.items():
            collected.setdefault(key, []).append((i, rates))

    out_root = Path(output_dir or config.output_dir or ".") / name
    out_root.mkdir(parents=True, exist_ok=True)

    sweep = len(config.snr_list) > 1
    summaries, cdfs = {}, {}
    for (scheme, snr), chunks in sorted(collected.items()):
        samples = np.concatenate([r for _, r in chunks])
        cdf = build_cdf(samples)
        cdfs[(scheme, snr)] = cdf
        summaries.setdefault(scheme, {})[_snr_key(snr)] = cdf.summary()
        fname = f"{scheme}_snr{_snr_key(snr)}.csv" if sweep else f"{scheme}.csv"
        _write_rates_csv(out_root / fname, chunks)

    gains = {}
    for (scheme, snr), cdf in cdfs.items():
        basecdf = cdfs.get(("conventional", snr))
        if basecdf is not None and scheme != "conventional" and not scheme.startswith("thp"):
            gains.setdefault(scheme, {})[_snr_key(snr)] = {
                "mean_pct": gain_percent(cdf, basecdf, "mean"),
                "cell_edge_pct": gain_percent(cdf, basecdf, "cell_edge"),
            }

    if dump_geometry or dump_channels:
        _dump_debug(config, out_root, dump_geometry, dump_channels)

    report = ExperimentReport(
        name=name,
        config=config.echo(),
        seed=config.seed,
        summaries=summaries,
        gains_vs_conventional=gains,
        wall_clock_s=time.perf_counter() - t0,
        drops_effective=effective,
    )
    if with_crossval:
        report.crossval = crossvalidate(config)
        report.wall_clock_s = time.perf_counter() - t0
    (out_root / "summary.json").write_text(report.to_json())
    return report


def _snr_key(snr):
    return f"{snr:g}"


def _write_rates_csv(path, chunks):
    lines = ["drop_id,stream,rate"]
    for drop_id, rates in chunks:
        for stream, r in enumerate(rates):
            lines.append(f"{drop_id},{stream},{r:.12g}")
    path.write_text("\n".join(lines) + "\n")


def _dump_debug(config, out_root, geometry, channels):
    debug = out_root / "debug"
    debug.mkdir(exist_ok=True)
    for i in range(min(config.drops, 4)):
        rng = _drop_rng(config.seed, i)
        region = Region(*config.region_km)
        bs = sample_ppp(config.lambda_b, region, rng)
        ue = sample_ppp(config.lambda_u_effective, region, rng)
        if geometry:
            bs.to_csv(debug / f"drop{i:04d}_bs.csv")
            ue.to_csv(debug / f"drop{i:04d}_ue.csv")
        if channels and len(bs) and len(ue):
            assoc = associate(bs, ue)
            cohort = select_cohort(assoc, rng)
            if cohort.k:
                H = build_channel(cohort, assoc, config.mu, config.alpha, rng)
                H.to_csv(debug / f"drop{i:04d}_H.csv")


# ---------------------------------------------------------------------------
# tagged-user sampling and cross-validation against the analytic curves
# ---------------------------------------------------------------------------


def tagged_rate_samples(scheme, n, lam, sigma_sq, mu, alpha, base, rng, batch=20000):
    """Rate samples for a tagged user centred in its own interference field.

    The user sits at the centre of a disc whose radius covers the coverage
    truncation radius plus a 10 km interference margin; the mean interference
    of the neglected far field is added back analytically.  Scheme is one of
    'tic' (nearest branch only), 'smf2' (two nearest combined, no residual
    interference) and 'smf2-interf' (two nearest combined over noise plus the
    remaining field).
    """
    if scheme not in CROSSVAL_SCHEMES:
        raise ConfigError(f"schemes: no analytic counterpart for '{scheme}'")
    radius = _QUAD_DEFAULTS.trunc_radius(lam) + 10.0
    tail_mean = 2.0 * np.pi * lam / (mu * (alpha - 2.0)) * radius ** (2.0 - alpha)
    out = np.empty(n)
    done = 0
    while done < n:
        m = min(batch, n - done)
        counts = rng.poisson(lam * np.pi * radius**2, size=m)
        counts = np.maximum(counts, 3)  # P[count < 3] is astronomically small
        total = int(counts.sum())
        r = radius * np.sqrt(rng.uniform(size=total))
        owner = np.repeat(np.arange(m), counts)
        order = np.lexsort((r, owner))
        r = r[order]
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        fades = rng.exponential(1.0 / mu, size=total)
        p = fades * r ** (-alpha)
        z1p = p[starts]
        z2p = p[starts + 1]
        if scheme == "tic":
            sinr = z1p / sigma_sq
        elif scheme == "smf2":
            sinr = (z1p + z2p) / sigma_sq
        else:
            i_r = np.bincount(owner[order], weights=p, minlength=m) - z1p - z2p + tail_mean
            sinr = (z1p + z2p) / (sigma_sq + i_r)
        out[done:done + m] = np.log1p(sinr) / np.log(base)
        done += m
    return out


def crossvalidate(config: ExperimentConfig) -> dict:
    """Monte Carlo vs analytic coverage on a shared threshold grid.

    For every configured scheme with an analytic counterpart, reports the sup
    CDF gap and the SNR shift (dB) between the two curves at CDF level 0.5.
    """
    wanted = [s for s in config.schemes if s in CROSSVAL_SCHEMES]
    if not wanted:
        raise ConfigError("schemes: crossvalidate needs one of " + ", ".join(CROSSVAL_SCHEMES))
    # 'smf2-interf' exists only as an analytic pairing, not as a run scheme
    rest = tuple(s for s in config.schemes if s != "smf2-interf") or ("tic",)
    _require_valid(replace(config, schemes=rest))
    if len(config.snr_list) != 1:
        raise ConfigError("snr_db: crossvalidate expects a scalar SNR")
    noise = NoiseModel.from_snr_db(config.snr_list[0])
    rng = np.random.default_rng(np.random.SeedSequence(config.seed, spawn_key=(0xC0FFEE,)))
    report = {}
    for scheme in wanted:
        samples = tagged_rate_samples(scheme, config.crossval_samples, config.lambda_b,
                                      noise.sigma_sq, config.mu, config.alpha,
                                      config.log_base, rng)
        grid = np.linspace(0.0, float(np.quantile(samples, 0.9999)) + 0.5, 241)
        if scheme == "tic":
            curve = analytic.tau_tic_curve(config.lambda_b, noise.sigma_sq, config.mu, grid,
                                           alpha=config.alpha, base=config.log_base)
        else:
            curve = analytic.tau_smf2_curve(config.lambda_b, noise.sigma_sq, config.mu, grid,
                                            with_interference=(scheme == "smf2-interf"),
                                            alpha=config.alpha, base=config.log_base)
        mc_cov = 1.0 - np.searchsorted(np.sort(samples), grid, side="right") / samples.size
        gap = float(np.max(np.abs(mc_cov - curve.coverage)))
        shift = _snr_shift_db(grid, mc_cov, curve.coverage, config.log_base)
        report[scheme] = {
            "samples": int(samples.size),
            "sup_gap": gap,
            "snr_shift_db_at_median": shift,
        }
    return report


def _median_threshold(grid, coverage):
    # t where the coverage curve crosses 0.5 (linear interpolation)
    c = np.asarray(coverage)
    idx = np.flatnonzero(c <= 0.5)
    if idx.size == 0 or idx[0] == 0:
        return grid[0]
    i = idx[0]
    w = (0.5 - c[i - 1]) / (c[i] - c[i - 1])
    return grid[i - 1] + w * (grid[i] - grid[i - 1])


def _snr_shift_db(grid, cov_a, cov_b, base):
    ta = _median_threshold(grid, cov_a)
    tb = _median_threshold(grid, cov_b)
    ga = analytic.gamma_threshold(ta, base)
    gb = analytic.gamma_threshold(tb, base)
    if ga <= 0 or gb <= 0:
        return 0.0
    return float(10.0 * np.log10(ga / gb))
