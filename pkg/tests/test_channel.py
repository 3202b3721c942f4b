import math
import random

import numpy as np
import pytest

from uwacomm import channel


def test_absorption_regression_values():
    # frozen from the implemented Thorp formula; any formula change
    # must be deliberate enough to update these
    assert channel.absorption_db_per_km(1.0) == pytest.approx(
        0.06900409046574006, rel=1e-12
    )
    assert channel.absorption_db_per_km(10.0) == pytest.approx(
        1.1870299387081567, rel=1e-12
    )
    assert channel.absorption_db_per_km(50.0) == pytest.approx(
        17.467122684259632, rel=1e-12
    )


def test_absorption_grows_with_frequency():
    prev = 0.0
    for f in (0.5, 1, 2, 5, 10, 20, 50, 100):
        a = channel.absorption_db_per_km(f)
        assert a > prev
        prev = a
    with pytest.raises(ValueError):
        channel.absorption_db_per_km(0.0)


def test_path_loss_is_one_at_reference():
    rng = random.Random(9)
    for _ in range(20):
        f = rng.uniform(0.5, 60.0)
        assert channel.path_loss(1.0, f) == 1.0
        assert channel.path_loss(25.0, f, ref_distance_m=25.0) == 1.0


def test_path_loss_db_matches_direct_formula():
    rng = random.Random(10)
    for _ in range(100):
        l = rng.uniform(2.0, 20_000.0)
        f = rng.uniform(0.5, 60.0)
        k = rng.uniform(1.0, 2.0)
        want = 10.0 * k * math.log10(l) + channel.absorption_db_per_km(f) * (l - 1.0) / 1000.0
        got = channel.path_loss_db(l, f, spreading_exponent=k)
        assert got == pytest.approx(want, rel=1e-12)


def test_snr_map_monotone_flat_noise():
    cfg = channel.ChannelConfig(noise=channel.NoiseConfig(ambient_psd_db=40.0))
    dists = [100.0 * 1.5**i for i in range(10)]
    freqs = [2.0 + 3.0 * j for j in range(16)]
    grid = channel.snr_map(dists, freqs, 140.0, cfg)
    assert grid.shape == (10, 16)
    assert np.all(np.diff(grid, axis=0) < 0)  # farther is always worse
    above_10k = [j for j, f in enumerate(freqs) if f > 10.0]
    assert np.all(np.diff(grid[:, above_10k], axis=1) < 0)


def test_snr_map_wenz_has_interior_frequency_peak():
    cfg = channel.ChannelConfig(noise=channel.NoiseConfig(ambient_psd_db=40.0))
    freqs = [1.0 + 0.5 * j for j in range(79)]  # 1..40 kHz
    grid = channel.snr_map([6000.0], freqs, 140.0, cfg, noise_model="wenz")
    best = int(np.argmax(grid[0]))
    assert 0 < best < len(freqs) - 1
    assert 2.0 < freqs[best] < 20.0


def test_snr_map_rejects_unknown_noise_model():
    cfg = channel.ChannelConfig()
    with pytest.raises(ValueError):
        channel.snr_map([100.0], [10.0], 140.0, cfg, noise_model="pink")


def test_impulse_response_gains_and_delays():
    cfg = channel.ChannelConfig(
        paths=(channel.PathSpec(1000.0), channel.PathSpec(1300.0, reflection=-0.7)),
    )
    ir = channel.impulse_response(cfg, 12.0)
    assert len(ir.taps) == 2
    g0, d0 = ir.taps[0]
    g1, d1 = ir.taps[1]
    assert d0 == pytest.approx(1000.0 / 1500.0)
    assert d1 == pytest.approx(1300.0 / 1500.0)
    assert g0 == pytest.approx(1.0 / math.sqrt(channel.path_loss(1000.0, 12.0)))
    assert g1 == pytest.approx(-0.7 / math.sqrt(channel.path_loss(1300.0, 12.0)))
    assert g1 < 0  # phase-inverting bounce survives


def test_delay_sum_identity_tap():
    sig = np.sin(np.arange(64) * 0.3)
    ir = channel.ImpulseResponse(taps=((1.0, 0.0),))
    out = channel.delay_sum(sig, ir, 1000.0)
    assert np.allclose(out, sig)


def test_delay_sum_fractional_delay_interpolates():
    sig = np.array([0.0, 1.0, 0.0, 0.0])
    ir = channel.ImpulseResponse(taps=((1.0, 1.5),))  # 1.5 samples at 1 Hz... rate 1
    out = channel.delay_sum(sig, ir, 1.0)
    # impulse at n=1 delayed 1.5 -> half at n=2, half at n=3
    assert out[2] == pytest.approx(0.5)
    assert out[3] == pytest.approx(0.5)


def test_two_tap_echo_superposes():
    rng = np.random.default_rng(3)
    sig = rng.standard_normal(200)
    ir = channel.ImpulseResponse(taps=((1.0, 0.0), (0.5, 0.01)))
    out = channel.delay_sum(sig, ir, 1000.0)
    assert len(out) == 210
    assert np.allclose(out[:200], sig + 0.5 * np.concatenate([np.zeros(10), sig[:190]]))


def test_doppler_resampling_changes_length():
    sig = np.sin(np.arange(1000) * 0.05)
    fast = channel.resample_doppler(sig, 0.005)
    slow = channel.resample_doppler(sig, -0.005)
    assert len(fast) < 1000 < len(slow)
    assert np.array_equal(channel.resample_doppler(sig, 0.0), sig)


def test_noise_sigma_formula():
    noise = channel.NoiseConfig(ambient_psd_db=30.0)
    want = math.sqrt(10.0**3 * 50_000.0)
    assert channel.noise_sigma(noise, 100_000.0) == pytest.approx(want)
    assert channel.noise_sigma(channel.NoiseConfig(), 100_000.0) == 0.0


def test_add_noise_reproducible_and_burst_boosted():
    noise = channel.NoiseConfig(
        ambient_psd_db=0.0,
        burst=channel.BurstConfig(rate_hz=20.0, duration_s=0.05, power_boost_db=20.0),
    )
    sig = np.zeros(40_000)
    a = channel.add_noise(sig, noise, 10_000.0, np.random.default_rng(5))
    b = channel.add_noise(sig, noise, 10_000.0, np.random.default_rng(5))
    assert np.array_equal(a, b)
    # bursts at x10 amplitude dominate the extremes of a zero signal
    sigma = channel.noise_sigma(noise, 10_000.0)
    assert np.max(np.abs(a)) > 4.0 * sigma


def test_burst_requires_ambient_level():
    with pytest.raises(ValueError):
        channel.NoiseConfig(
            ambient_psd_db=None,
            burst=channel.BurstConfig(rate_hz=1.0, duration_s=0.1, power_boost_db=10.0),
        )


def test_apply_channel_checks_sample_rate():
    cfg = channel.ChannelConfig()
    ir = channel.impulse_response(cfg, 25.0)
    sig = np.ones(100)
    with pytest.raises(channel.SampleRateMismatch):
        channel.apply_channel(sig, ir, cfg, signal_rate=48_000.0)
    out = channel.apply_channel(sig, ir, cfg, signal_rate=100_000.0)
    assert len(out) >= 100


def test_doppler_factor_bounds():
    with pytest.raises(ValueError):
        channel.ChannelConfig(doppler_factor=0.02)


def test_spreading_exponent_warning():
    with pytest.warns(UserWarning):
        channel.ChannelConfig(spreading_exponent=2.5)
