"""Experiment runners: each takes a validated config plus a master seed
and returns a finished table.

Seed scheme: every trial draws from generators seeded by
child_seed(master, stream_tag, *indices, trial_counter), so trial i's
outcome never depends on how many trials run after it, and variants
that must share randomness (noise across codes, traffic across MAC
protocols) simply omit the variant name from the tags.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import channel, fec, interleave
from ..macsim import Scenario, child_seed, run_sim
from .config import (
    BerSweepConfig,
    CodecTableConfig,
    InterleaverCompareConfig,
    MacCompareConfig,
    SnrMapConfig,
    config_hash,
)
from .pipeline import make_phy, make_sequence, resolve_code, run_link_block
from .stats import wilson_interval


@dataclass
class ExperimentResult:
    kind: str
    columns: list[str]
    rows: list[list[str]]
    config_hash: str
    traces: dict[str, list[tuple]] = field(default_factory=dict)


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".10g")


def codec_table(cfg: CodecTableConfig | None = None, seed: int = 0) -> ExperimentResult:
    """The four binary BCH codes of length 15, strongest rate first."""
    cfg = cfg or CodecTableConfig()
    rows = []
    for t in (1, 2, 3, 7):
        code = fec.bch_code(t)
        rows.append([_fmt(code.k), _fmt(code.t), code.generator_octal()])
    return ExperimentResult("codec_table", ["k", "t", "generator_octal"], rows, config_hash(cfg))


def run_ber_sweep(cfg: BerSweepConfig, seed: int) -> ExperimentResult:
    phy_cfg = make_phy(cfg.phy)
    seq = make_sequence(cfg.phy)
    ilv = interleave.parse_spec(cfg.interleaver)
    rows = []
    for code_name in cfg.codes:
        code = resolve_code(code_name)
        for pi, snr in enumerate(cfg.snr_db):
            bits = errors = 0
            trial = 0
            # run every point to min_bits, then keep going until the
            # error count is statistically useful or the cap is hit
            while bits < cfg.min_bits or (errors < cfg.min_errors and bits < cfg.max_bits):
                rng_data = np.random.default_rng(
                    child_seed(seed, "ber-data", code_name, pi, trial)
                )
                # noise tags skip the code name so coded and uncoded
                # runs face the same noise realization
                rng_noise = np.random.default_rng(
                    child_seed(seed, "ber-noise", pi, trial)
                )
                res = run_link_block(
                    code, ilv, phy_cfg, seq, cfg.codewords_per_trial,
                    rng_data, rng_noise, snr,
                )
                bits += res.info_bits
                errors += res.bit_errors
                trial += 1
            ber = errors / bits
            lo, hi = wilson_interval(errors, bits)
            rows.append([
                _fmt(snr), phy_cfg.modulation, code_name, cfg.interleaver,
                _fmt(ber), _fmt(bits), _fmt(lo), _fmt(hi),
            ])
    cols = ["snr_db", "modulation", "code", "interleaver", "ber",
            "bits_simulated", "ci_low", "ci_high"]
    return ExperimentResult("ber_sweep", cols, rows, config_hash(cfg))


def run_interleaver_compare(cfg: InterleaverCompareConfig, seed: int) -> ExperimentResult:
    phy_cfg = make_phy(cfg.phy)
    seq = make_sequence(cfg.phy)
    code = resolve_code(cfg.code)
    rows = []
    for ilv_name in cfg.interleavers:
        ilv = interleave.parse_spec(ilv_name)
        for ri, rate in enumerate(cfg.burst_rates_hz):
            if rate > 0:
                burst = channel.BurstConfig(
                    rate_hz=rate,
                    duration_s=cfg.burst.duration_s,
                    power_boost_db=cfg.burst.power_boost_db,
                )
            else:
                burst = None
            # the ambient level is arbitrary; the signal is scaled to
            # put the floor at cfg.snr_db
            ambient = channel.NoiseConfig(ambient_psd_db=40.0, burst=burst)
            bits = errors = cws = fails = 0
            for trial in range(cfg.trials):
                # tags skip the interleaver name: all variants see the
                # same data, burst arrivals, and noise samples
                rng_data = np.random.default_rng(
                    child_seed(seed, "ilv-data", ri, trial)
                )
                rng_noise = np.random.default_rng(
                    child_seed(seed, "ilv-noise", ri, trial)
                )
                res = run_link_block(
                    code, ilv, phy_cfg, seq, cfg.codewords_per_trial,
                    rng_data, rng_noise, cfg.snr_db, ambient=ambient,
                )
                bits += res.info_bits
                errors += res.bit_errors
                cws += res.codewords
                fails += res.codeword_failures
            rows.append([
                ilv_name, _fmt(rate), _fmt(errors / bits), _fmt(fails / cws),
            ])
    cols = ["interleaver", "burst_rate", "ber", "codeword_failure_rate"]
    return ExperimentResult("interleaver_compare", cols, rows, config_hash(cfg))


def run_mac_compare(cfg: MacCompareConfig, seed: int) -> ExperimentResult:
    rows = []
    traces: dict[str, list[tuple]] = {}
    for proto in cfg.protocols:
        for n in cfg.n_nodes:
            for li, load in enumerate(cfg.offered_load_hz):
                offered = delivered = 0
                delay_weighted = 0.0
                energy = 0.0
                offered_bits = 0
                for trial in range(cfg.trials):
                    scen = Scenario(
                        n_nodes=n,
                        area_m=cfg.area_m,
                        comm_range_m=cfg.comm_range_m,
                        duration_s=cfg.duration_s,
                        packet_rate_hz=load,
                        data_bits=cfg.data_bits,
                        bitrate_bps=cfg.bitrate_bps,
                    )
                    # trial seed shared across protocols: same layout,
                    # traffic, and medium draws for every MAC
                    trial_seed = child_seed(seed, "mac", n, li, trial)
                    result = run_sim(proto, scen, trial_seed)
                    m = result.metrics
                    offered += m.offered
                    delivered += m.delivered
                    delay_weighted += m.avg_delay_s * m.delivered
                    energy += m.total_energy_j
                    offered_bits += m.offered_bits
                    if trial == 0 and li == 0:
                        traces[f"{proto}_n{n}"] = result.trace_rows()
                delivered_norm = delivered / offered if offered else 1.0
                delay_avg = delay_weighted / delivered if delivered else 0.0
                energy_norm = energy / offered_bits if offered_bits else 0.0
                rows.append([
                    proto, _fmt(n), _fmt(load),
                    _fmt(delivered_norm), _fmt(delay_avg), _fmt(energy_norm),
                ])
    cols = ["protocol", "n_nodes", "offered_load", "delivered_norm",
            "delay_avg", "energy_norm"]
    return ExperimentResult("mac_compare", cols, rows, config_hash(cfg), traces)


def run_snr_map(cfg: SnrMapConfig, seed: int = 0) -> ExperimentResult:
    ch = cfg.channel
    ccfg = channel.ChannelConfig(
        ref_distance_m=ch.ref_distance_m,
        spreading_exponent=ch.spreading_exponent,
        noise=channel.NoiseConfig(ambient_psd_db=ch.ambient_psd_db),
    )
    grid = channel.snr_map(
        cfg.distances_m,
        cfg.frequencies_khz,
        cfg.source_level_db,
        ccfg,
        noise_model=cfg.noise_model,
        shipping=cfg.shipping,
        wind=cfg.wind_ms,
    )
    rows = []
    for i, d in enumerate(cfg.distances_m):
        for j, f in enumerate(cfg.frequencies_khz):
            rows.append([_fmt(d), _fmt(f), _fmt(grid[i, j])])
    return ExperimentResult(
        "snr_map", ["distance_m", "frequency_khz", "snr_db"], rows, config_hash(cfg)
    )


RUNNERS = {
    "ber_sweep": run_ber_sweep,
    "interleaver_compare": run_interleaver_compare,
    "mac_compare": run_mac_compare,
    "snr_map": run_snr_map,
    "codec_table": codec_table,
}


def run_experiment(cfg, seed: int) -> ExperimentResult:
    return RUNNERS[cfg.kind](cfg, seed)


def trace_columns() -> list[str]:
    return ["time_s", "node", "event", "packet_kind", "src", "dst"]
