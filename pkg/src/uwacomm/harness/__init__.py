"""Experiment harness: configs, end-to-end link pipeline, runners,
CSV rendering, and SVG plots."""

from .config import (
    AnyExperimentConfig,
    BerSweepConfig,
    BurstBlock,
    ChannelBlock,
    CodecTableConfig,
    ConfigError,
    EXPERIMENT_MODELS,
    InterleaverCompareConfig,
    MacCompareConfig,
    PhyBlock,
    SnrMapConfig,
    config_hash,
    load_config,
)
from .csvout import parse_csv, render_csv, result_csv, write_result
from .experiments import (
    ExperimentResult,
    RUNNERS,
    codec_table,
    run_ber_sweep,
    run_experiment,
    run_interleaver_compare,
    run_mac_compare,
    run_snr_map,
    trace_columns,
)
from .pipeline import (
    LinkResult,
    info_bits_per_codeword,
    make_phy,
    make_sequence,
    resolve_code,
    run_link_block,
)
from .stats import binomial_se, wilson_interval
from .svgplot import DEFAULT_PLOTS, PlotSpec, SchemaMismatch, emit_plot, render_plot

__all__ = [
    "AnyExperimentConfig",
    "BerSweepConfig",
    "BurstBlock",
    "ChannelBlock",
    "CodecTableConfig",
    "ConfigError",
    "EXPERIMENT_MODELS",
    "InterleaverCompareConfig",
    "MacCompareConfig",
    "PhyBlock",
    "SnrMapConfig",
    "config_hash",
    "load_config",
    "parse_csv",
    "render_csv",
    "result_csv",
    "write_result",
    "ExperimentResult",
    "RUNNERS",
    "codec_table",
    "run_ber_sweep",
    "run_experiment",
    "run_interleaver_compare",
    "run_mac_compare",
    "run_snr_map",
    "trace_columns",
    "LinkResult",
    "info_bits_per_codeword",
    "make_phy",
    "make_sequence",
    "resolve_code",
    "run_link_block",
    "binomial_se",
    "wilson_interval",
    "DEFAULT_PLOTS",
    "PlotSpec",
    "SchemaMismatch",
    "emit_plot",
    "render_plot",
]
