"""Experiment configuration: pydantic models doubling as the YAML
config-file schema and the service request bodies.

Every experiment result embeds `config_hash(cfg)` so a CSV can always
be traced back to the exact resolved configuration that produced it.
"""

from __future__ import annotations

import hashlib
import json
from typing import Literal

import yaml
from pydantic import BaseModel, Field, field_validator, model_validator


class ConfigError(ValueError):
    """Config file or block failed validation."""


class PhyBlock(BaseModel):
    chip_rate: float = 12_500.0
    samples_per_chip: int = 8
    carrier_hz: float = 25_000.0
    modulation: Literal["bpsk", "qpsk"] = "bpsk"
    pn_family: Literal["m", "gold", "walsh"] = "m"
    pn_order: int = 4
    pn_index: int = 0

    @model_validator(mode="after")
    def _check(self):
        if self.chip_rate <= 0 or self.samples_per_chip < 2:
            raise ValueError("chip_rate must be positive, samples_per_chip >= 2")
        return self


class ChannelBlock(BaseModel):
    ref_distance_m: float = 1.0
    spreading_exponent: float = 1.5
    ambient_psd_db: float | None = None
    paths: list[tuple[float, float]] = Field(default_factory=lambda: [(1000.0, 1.0)])
    doppler_factor: float = 0.0


class BurstBlock(BaseModel):
    rate_hz: float = 0.5
    duration_s: float = 0.05
    power_boost_db: float = 25.0

    @field_validator("duration_s")
    @classmethod
    def _dur(cls, v):
        if v <= 0:
            raise ValueError("burst duration must be positive")
        return v


class BerSweepConfig(BaseModel):
    kind: Literal["ber_sweep"] = "ber_sweep"
    snr_db: list[float] = Field(default_factory=lambda: [0.0, 2.0, 4.0, 6.0, 8.0])
    codes: list[str] = Field(default_factory=lambda: ["none", "bch-15-7"])
    interleaver: str = "none"
    phy: PhyBlock = Field(default_factory=PhyBlock)
    codewords_per_trial: int = 24
    min_errors: int = 100
    min_bits: int = 10_000
    max_bits: int = 400_000

    @model_validator(mode="after")
    def _check(self):
        if not self.snr_db:
            raise ValueError("snr_db must list at least one point")
        if any(not (-20.0 <= s <= 60.0) for s in self.snr_db):
            raise ValueError("snr_db points must be finite and within [-20, 60]")
        if not self.codes:
            raise ValueError("codes must list at least one entry")
        if self.min_errors < 1 or self.min_bits < 1 or self.max_bits < self.min_bits:
            raise ValueError("need min_errors >= 1 and max_bits >= min_bits >= 1")
        return self


class InterleaverCompareConfig(BaseModel):
    kind: Literal["interleaver_compare"] = "interleaver_compare"
    # t=3 keeps codewords decodable even when several bursts land in
    # the same interleaver frame; one burst alone stays well under t
    code: str = "rs-15-9"
    interleavers: list[str] = Field(
        default_factory=lambda: ["none", "matrix:15x15", "conv:15,1"]
    )
    phy: PhyBlock = Field(default_factory=PhyBlock)
    snr_db: float = 12.0
    burst: BurstBlock = Field(default_factory=BurstBlock)
    burst_rates_hz: list[float] = Field(default_factory=lambda: [0.5])
    codewords_per_trial: int = 50
    trials: int = 6

    @model_validator(mode="after")
    def _check(self):
        if not self.interleavers:
            raise ValueError("interleavers must list at least one entry")
        if self.trials < 1:
            raise ValueError("trials >= 1")
        return self


class MacCompareConfig(BaseModel):
    kind: Literal["mac_compare"] = "mac_compare"
    protocols: list[str] = Field(default_factory=lambda: ["smac", "cdma", "fdma"])
    n_nodes: list[int] = Field(default_factory=lambda: [4, 6, 8])
    offered_load_hz: list[float] = Field(default_factory=lambda: [0.02, 0.05])
    duration_s: float = 600.0
    area_m: float = 400.0
    comm_range_m: float = 800.0
    data_bits: int = 256
    bitrate_bps: float = 1000.0
    trials: int = 1

    @model_validator(mode="after")
    def _check(self):
        if not self.protocols or not self.n_nodes or not self.offered_load_hz:
            raise ValueError("protocols, n_nodes, offered_load_hz must be non-empty")
        if any(n < 2 for n in self.n_nodes):
            raise ValueError("every n_nodes entry must be >= 2")
        if self.trials < 1:
            raise ValueError("trials >= 1")
        return self


class SnrMapConfig(BaseModel):
    kind: Literal["snr_map"] = "snr_map"
    distances_m: list[float] = Field(
        default_factory=lambda: [round(100.0 * 1.3**i, 3) for i in range(12)]
    )
    frequencies_khz: list[float] = Field(
        default_factory=lambda: [round(2.0 + 4.0 * i, 3) for i in range(15)]
    )
    source_level_db: float = 140.0
    noise_model: Literal["flat", "wenz"] = "flat"
    shipping: float = 0.5
    wind_ms: float = 0.0
    channel: ChannelBlock = Field(
        default_factory=lambda: ChannelBlock(ambient_psd_db=40.0)
    )

    @model_validator(mode="after")
    def _check(self):
        if not self.distances_m or not self.frequencies_khz:
            raise ValueError("distances_m and frequencies_khz must be non-empty")
        if any(d <= 0 for d in self.distances_m) or any(
            f <= 0 for f in self.frequencies_khz
        ):
            raise ValueError("distances and frequencies must be positive")
        return self


class CodecTableConfig(BaseModel):
    kind: Literal["codec_table"] = "codec_table"


EXPERIMENT_MODELS = {
    "ber_sweep": BerSweepConfig,
    "interleaver_compare": InterleaverCompareConfig,
    "mac_compare": MacCompareConfig,
    "snr_map": SnrMapConfig,
    "codec_table": CodecTableConfig,
}

AnyExperimentConfig = (
    BerSweepConfig
    | InterleaverCompareConfig
    | MacCompareConfig
    | SnrMapConfig
    | CodecTableConfig
)


def load_config(path: str, kind: str | None = None) -> AnyExperimentConfig:
    """Parse a YAML config file into the model for its `kind` field (or
    the explicitly requested kind, which then must match the file)."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config parse failure in {path}: {exc}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping: {path}")
    file_kind = raw.get("kind", kind)
    if file_kind is None:
        raise ConfigError(f"config {path} missing 'kind'")
    if kind is not None and file_kind != kind:
        raise ConfigError(
            f"config {path} is for {file_kind!r}, expected {kind!r}"
        )
    model = EXPERIMENT_MODELS.get(file_kind)
    if model is None:
        raise ConfigError(
            f"unknown experiment kind {file_kind!r}; expected one of "
            f"{sorted(EXPERIMENT_MODELS)}"
        )
    raw.setdefault("kind", file_kind)
    try:
        return model.model_validate(raw)
    except Exception as exc:
        raise ConfigError(f"invalid {file_kind} config {path}: {exc}") from None


def config_hash(cfg: BaseModel) -> str:
    """sha256 of the fully resolved config (defaults included), in a
    canonical JSON encoding."""
    payload = json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()
