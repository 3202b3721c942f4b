import os

import numpy as np
import pytest

from uwacomm import fec, harness, interleave, phy
from uwacomm.harness import (
    BerSweepConfig,
    ConfigError,
    InterleaverCompareConfig,
    MacCompareConfig,
    PhyBlock,
    PlotSpec,
    SchemaMismatch,
    SnrMapConfig,
    config_hash,
    load_config,
    parse_csv,
    render_csv,
    render_plot,
    result_csv,
)
from uwacomm.harness.pipeline import make_phy, make_sequence, run_link_block
from uwacomm.macsim import child_seed


def test_load_config_round_trip(tmp_path):
    p = tmp_path / "sweep.yaml"
    p.write_text("kind: ber_sweep\nsnr_db: [1.0, 3.0]\ncodes: [none]\n")
    cfg = load_config(str(p))
    assert cfg.kind == "ber_sweep"
    assert cfg.snr_db == [1.0, 3.0]
    assert cfg.min_errors == 100  # defaults fill in


def test_load_config_kind_checks(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("kind: snr_map\n")
    with pytest.raises(ConfigError):
        load_config(str(p), kind="ber_sweep")
    p.write_text("kind: jell-o\n")
    with pytest.raises(ConfigError):
        load_config(str(p))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.yaml"))
    p.write_text("- just\n- a list\n")
    with pytest.raises(ConfigError):
        load_config(str(p))


def test_config_hash_tracks_content():
    a = config_hash(BerSweepConfig())
    assert a == config_hash(BerSweepConfig())
    assert a != config_hash(BerSweepConfig(snr_db=[1.0]))
    assert len(a) == 64


def test_wilson_interval_basics():
    lo, hi = harness.wilson_interval(0, 1000)
    assert lo == 0.0
    assert hi < 0.005
    lo, hi = harness.wilson_interval(500, 1000)
    assert lo < 0.5 < hi
    wide = harness.wilson_interval(5, 10)
    narrow = harness.wilson_interval(500, 1000)
    assert (wide[1] - wide[0]) > (narrow[1] - narrow[0])
    with pytest.raises(ValueError):
        harness.wilson_interval(3, 0)
    with pytest.raises(ValueError):
        harness.wilson_interval(7, 5)


def _rngs(seed, trial):
    return (
        np.random.default_rng(child_seed(seed, "d", trial)),
        np.random.default_rng(child_seed(seed, "n", trial)),
    )


@pytest.mark.parametrize("code_name", ["none", "bch-15-7", "rs-15-11"])
@pytest.mark.parametrize("ilv_name", ["none", "matrix:15x15", "conv:5,2"])
def test_noiseless_link_is_error_free(code_name, ilv_name):
    code = harness.resolve_code(code_name)
    ilv = interleave.parse_spec(ilv_name)
    blk = PhyBlock()
    rd, rn = _rngs(1, 0)
    res = run_link_block(code, ilv, make_phy(blk), make_sequence(blk), 8,
                         rd, rn, ebn0_db=None)
    assert res.bit_errors == 0
    assert res.codeword_failures == 0


def test_noiseless_qpsk_link():
    blk = PhyBlock(modulation="qpsk")
    rd, rn = _rngs(2, 0)
    res = run_link_block(harness.resolve_code("rs-15-11"), None,
                         make_phy(blk), make_sequence(blk), 5, rd, rn, None)
    assert res.bit_errors == 0


def test_link_counts_info_bits():
    blk = PhyBlock()
    rd, rn = _rngs(3, 0)
    res = run_link_block(fec.code_by_name("rs-15-11"), None, make_phy(blk),
                         make_sequence(blk), 6, rd, rn, None)
    assert res.info_bits == 6 * 11 * 4
    assert res.codewords == 6


def test_heavy_noise_produces_failures():
    blk = PhyBlock()
    rd, rn = _rngs(4, 0)
    res = run_link_block(fec.code_by_name("bch-15-7"), None, make_phy(blk),
                         make_sequence(blk), 30, rd, rn, ebn0_db=-8.0)
    assert res.codeword_failures > 0
    assert res.bit_errors > 0


def test_trial_seeds_are_a_counter_scheme():
    """Earlier trials' outcomes survive a longer run: trial i depends
    only on (master, tags, i)."""
    blk = PhyBlock()
    cfg = make_phy(blk)
    seq = make_sequence(blk)

    def trial_errors(n_trials):
        out = []
        for trial in range(n_trials):
            rd = np.random.default_rng(child_seed(9, "ber-data", "none", 0, trial))
            rn = np.random.default_rng(child_seed(9, "ber-noise", 0, trial))
            res = run_link_block(None, None, cfg, seq, 4, rd, rn, 2.0)
            out.append(res.bit_errors)
        return out

    assert trial_errors(5)[:3] == trial_errors(3)


def test_ber_sweep_rows_and_noise_sharing():
    cfg = BerSweepConfig(snr_db=[5.0], codes=["none", "bch-15-7"],
                         min_errors=10, min_bits=2000, max_bits=6000)
    res = harness.run_ber_sweep(cfg, seed=3)
    assert res.columns[:6] == ["snr_db", "modulation", "code", "interleaver",
                               "ber", "bits_simulated"]
    assert len(res.rows) == 2
    for row in res.rows:
        ber, bits = float(row[4]), int(row[5])
        lo, hi = float(row[6]), float(row[7])
        assert 0 <= lo <= ber <= hi <= 1
        assert bits >= 2000


def test_ber_zero_without_noise_channel():
    # disabling noise shows up as an exact zero row
    cfg = BerSweepConfig(snr_db=[60.0], codes=["none"], min_errors=1,
                         min_bits=1000, max_bits=1500)
    res = harness.run_ber_sweep(cfg, seed=1)
    assert float(res.rows[0][4]) == 0.0


def test_interleaver_tie_without_bursts():
    cfg = InterleaverCompareConfig(
        interleavers=["none", "matrix:15x15", "conv:15,1"],
        burst_rates_hz=[0.0], snr_db=5.0, trials=4, codewords_per_trial=45,
    )
    res = harness.run_interleaver_compare(cfg, seed=2)
    bers = [float(r[2]) for r in res.rows]
    bits = 4 * 45 * 9 * 4
    cis = [harness.wilson_interval(round(b * bits), bits) for b in bers]
    lo = max(c[0] for c in cis)
    hi = min(c[1] for c in cis)
    assert lo <= hi  # all pairwise intervals overlap


def test_mac_compare_single_pair_delivers_everything():
    cfg = MacCompareConfig(protocols=["smac", "cdma", "fdma"], n_nodes=[2],
                           offered_load_hz=[0.01], duration_s=500.0,
                           area_m=150.0)
    res = harness.run_mac_compare(cfg, seed=4)
    for row in res.rows:
        assert float(row[3]) == 1.0, row


def test_mac_compare_cdma_beats_static_bands_under_load():
    cfg = MacCompareConfig(protocols=["cdma", "fdma"], n_nodes=[6],
                           offered_load_hz=[0.08], duration_s=400.0)
    res = harness.run_mac_compare(cfg, seed=6)
    by_proto = {r[0]: float(r[3]) for r in res.rows}
    assert by_proto["cdma"] >= by_proto["fdma"]


def test_csv_render_and_parse():
    text = render_csv(["a", "b"], [["1", "x"], ["2", "y"]], "f" * 64)
    assert text.splitlines()[0] == "# config_sha256=" + "f" * 64
    cols, rows = parse_csv(text)
    assert cols == ["a", "b"]
    assert rows == [["1", "x"], ["2", "y"]]
    with pytest.raises(ValueError):
        render_csv(["a"], [["1", "2"]], "0" * 64)


def test_result_csv_embeds_config_hash():
    res = harness.codec_table()
    first = result_csv(res).splitlines()[0]
    assert first == f"# config_sha256={res.config_hash}"


def test_snr_map_csv_header_exact():
    res = harness.run_snr_map(SnrMapConfig(), 0)
    assert result_csv(res).splitlines()[1] == "distance_m,frequency_khz,snr_db"


def test_write_result_emits_trace_files(tmp_path):
    cfg = MacCompareConfig(protocols=["fdma"], n_nodes=[3],
                           offered_load_hz=[0.02], duration_s=100.0)
    res = harness.run_mac_compare(cfg, seed=7)
    paths = harness.write_result(res, str(tmp_path))
    assert paths[0].endswith("mac_compare.csv")
    trace_paths = [p for p in paths
                   if os.path.basename(p).startswith("trace_")]
    assert trace_paths
    cols, rows = parse_csv(open(trace_paths[0]).read())
    assert cols == ["time_s", "node", "event", "packet_kind", "src", "dst"]
    assert rows


def test_two_point_series_single_polyline():
    cols = ["x", "y"]
    rows = [["0", "1.0"], ["2", "3.0"]]
    svg = render_plot(cols, rows, PlotSpec("line", "x", "y"))
    assert svg.count("<polyline") == 1
    pts = svg.split('points="')[1].split('"')[0]
    assert len(pts.split()) == 2


def test_log_plot_drops_nonpositive_points():
    cols = ["x", "y"]
    rows = [["0", "0"], ["1", "0.1"], ["2", "0.01"]]
    svg = render_plot(cols, rows, PlotSpec("log_line", "x", "y"))
    pts = svg.split('points="')[1].split('"')[0]
    assert len(pts.split()) == 2


def test_heatmap_cell_count_matches_rows():
    res = harness.run_snr_map(SnrMapConfig(), 0)
    svg = render_plot(res.columns, res.rows,
                      harness.DEFAULT_PLOTS["snr_map"])
    assert svg.count('class="cell"') == len(res.rows)


def test_plot_schema_mismatch_cases():
    with pytest.raises(SchemaMismatch):
        render_plot(["x", "y"], [], PlotSpec("line", "x", "y"))
    with pytest.raises(SchemaMismatch):
        render_plot(["x", "y"], [["a", "b"]], PlotSpec("line", "x", "y"))
    with pytest.raises(SchemaMismatch):
        render_plot(["x", "y"], [["1", "2"]], PlotSpec("line", "x", "z"))
    with pytest.raises(SchemaMismatch):
        render_plot(["x", "y"], [["1", "2"]], PlotSpec("donut", "x", "y"))
    with pytest.raises(SchemaMismatch):
        render_plot(["x", "y", "v"], [["1", "2", "3"]],
                    PlotSpec("heatmap", "x", "y", value=None))


def test_emit_plot_writes_svg(tmp_path):
    res = harness.run_snr_map(SnrMapConfig(), 0)
    csv_path = tmp_path / "snr_map.csv"
    csv_path.write_text(result_csv(res))
    out = harness.emit_plot(str(csv_path), harness.DEFAULT_PLOTS["snr_map"])
    assert out.endswith(".svg")
    body = open(out).read()
    assert body.startswith("<svg") and body.rstrip().endswith("</svg>")


def test_render_deterministic_bytes():
    res = harness.run_snr_map(SnrMapConfig(), 0)
    one = render_plot(res.columns, res.rows, harness.DEFAULT_PLOTS["snr_map"])
    two = render_plot(res.columns, res.rows, harness.DEFAULT_PLOTS["snr_map"])
    assert one == two
