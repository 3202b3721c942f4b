"""Underwater acoustic channel: spreading/absorption path loss,
multipath impulse response, Doppler, and ambient plus burst noise.

Path loss combines geometric spreading with frequency-dependent
absorption, evaluated in the dB domain:

    A_dB(l, f) = 10 k log10(l / l_ref) + a(f) (l - l_ref) / 1000

with a(f) Thorp's empirical absorption in dB/km and k the spreading
exponent (1 = cylindrical, 2 = spherical).  A(l_ref, f) = 1 for any f.

Each propagation path contributes one impulse-response tap with delay
length/c and gain reflection/sqrt(A) evaluated at a single design
frequency (narrowband approximation: the signal band is small relative
to the carrier).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class SampleRateMismatch(ValueError):
    """Signal sample rate disagrees with the channel configuration."""


@dataclass(frozen=True)
class PathSpec:
    """One propagation path: geometric length and cumulative reflection
    coefficient (product over all surface/bottom bounces, in [-1, 1])."""

    length_m: float
    reflection: float = 1.0

    def __post_init__(self):
        if self.length_m <= 0:
            raise ValueError("path length must be positive")
        if abs(self.reflection) > 1.0:
            raise ValueError("|reflection| must be <= 1")


@dataclass(frozen=True)
class BurstConfig:
    """Time-gated noise bursts: Poisson arrivals at `rate_hz`, each
    lasting `duration_s` with the noise floor raised by `power_boost_db`."""

    rate_hz: float
    duration_s: float
    power_boost_db: float

    def __post_init__(self):
        if self.duration_s <= 0:
            raise ValueError("burst duration must be positive")
        if self.rate_hz < 0:
            raise ValueError("burst rate must be >= 0")


@dataclass(frozen=True)
class NoiseConfig:
    """Ambient white Gaussian noise level plus optional bursts.

    ambient_psd_db is a one-sided power spectral density in dB re
    unit^2/Hz; per-sample variance is 10^(psd/10) * sample_rate / 2.
    None disables noise entirely.
    """

    ambient_psd_db: float | None = None
    burst: BurstConfig | None = None

    def __post_init__(self):
        if self.burst is not None and self.ambient_psd_db is None:
            raise ValueError("burst noise needs an ambient level to boost")


@dataclass(frozen=True)
class ImpulseResponse:
    """Finite tap list (gain, delay_s), sorted by delay."""

    taps: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.taps:
            raise ValueError("impulse response needs at least one tap")
        delays = [d for _, d in self.taps]
        if any(d < 0 for d in delays):
            raise ValueError("tap delays must be non-negative")
        if delays != sorted(delays):
            raise ValueError("taps must be sorted by delay")

    @property
    def max_delay(self) -> float:
        return self.taps[-1][1]


@dataclass(frozen=True)
class ChannelConfig:
    ref_distance_m: float = 1.0
    spreading_exponent: float = 1.5
    sound_speed_ms: float = 1500.0
    paths: tuple[PathSpec, ...] = (PathSpec(1000.0, 1.0),)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    doppler_factor: float = 0.0
    sample_rate: float = 100_000.0

    def __post_init__(self):
        if self.ref_distance_m <= 0:
            raise ValueError("reference distance must be positive")
        if self.sound_speed_ms <= 0:
            raise ValueError("sound speed must be positive")
        if self.sample_rate <= 0:
            raise ValueError("sample rate must be positive")
        if not 1.0 <= self.spreading_exponent <= 2.0:
            warnings.warn(
                f"spreading exponent {self.spreading_exponent} outside the "
                "usual [1, 2] range",
                stacklevel=2,
            )
        if abs(self.doppler_factor) >= 0.01:
            raise ValueError("|doppler_factor| must be < 0.01")


def absorption_db_per_km(f_khz: float) -> float:
    """Thorp's absorption of sound in seawater, dB/km, f in kHz."""
    if f_khz <= 0:
        raise ValueError(f"frequency must be positive, got {f_khz}")
    f2 = f_khz * f_khz
    return 0.11 * f2 / (1 + f2) + 44.0 * f2 / (4100 + f2) + 2.75e-4 * f2 + 0.003


def path_loss_db(
    distance_m: float,
    f_khz: float,
    *,
    ref_distance_m: float = 1.0,
    spreading_exponent: float = 1.5,
) -> float:
    """Attenuation in dB: spreading plus absorption over (l - l_ref)."""
    if distance_m <= 0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    spreading = 10.0 * spreading_exponent * math.log10(distance_m / ref_distance_m)
    absorption = absorption_db_per_km(f_khz) * (distance_m - ref_distance_m) / 1000.0
    return spreading + absorption


def path_loss(
    distance_m: float,
    f_khz: float,
    *,
    ref_distance_m: float = 1.0,
    spreading_exponent: float = 1.5,
) -> float:
    """Linear attenuation factor A(l, f); A(l_ref, f) = 1 exactly."""
    return 10.0 ** (
        path_loss_db(
            distance_m,
            f_khz,
            ref_distance_m=ref_distance_m,
            spreading_exponent=spreading_exponent,
        )
        / 10.0
    )


def ambient_noise_db(f_khz: float, shipping: float = 0.5, wind: float = 0.0) -> float:
    """Colored ambient noise PSD in dB re unit^2/Hz (turbulence,
    shipping, wind/waves, thermal), for the SNR-surface view where the
    usable band peaks at an intermediate frequency."""
    if f_khz <= 0:
        raise ValueError(f"frequency must be positive, got {f_khz}")
    log_f = math.log10(f_khz)
    turbulence = 17.0 - 30.0 * log_f
    ships = 40.0 + 20.0 * (shipping - 0.5) + 26.0 * log_f - 60.0 * math.log10(f_khz + 0.03)
    waves = 50.0 + 7.5 * math.sqrt(max(wind, 0.0)) + 20.0 * log_f - 40.0 * math.log10(f_khz + 0.4)
    thermal = -15.0 + 20.0 * log_f
    total = sum(10.0 ** (x / 10.0) for x in (turbulence, ships, waves, thermal))
    return 10.0 * math.log10(total)


def snr_map(
    distances_m: Sequence[float],
    frequencies_khz: Sequence[float],
    source_level_db: float,
    cfg: ChannelConfig,
    noise_model: str = "flat",
    shipping: float = 0.5,
    wind: float = 0.0,
) -> np.ndarray:
    """Narrowband SNR grid, shape (len(distances), len(frequencies)).

    SNR(l, f) = source_level - A_dB(l, f) - N_dB(f).  noise_model
    "flat" uses the configured ambient PSD level at all frequencies;
    "wenz" uses the colored ambient model (and shows the classic
    interior SNR maximum in frequency).
    """
    if len(distances_m) == 0 or len(frequencies_khz) == 0:
        raise ValueError("distance and frequency ranges must be non-empty")
    if noise_model not in ("flat", "wenz"):
        raise ValueError(f"unknown noise model {noise_model!r}")
    flat_level = cfg.noise.ambient_psd_db if cfg.noise.ambient_psd_db is not None else 0.0
    grid = np.empty((len(distances_m), len(frequencies_khz)))
    for j, f in enumerate(frequencies_khz):
        noise_db = flat_level if noise_model == "flat" else ambient_noise_db(f, shipping, wind)
        for i, l in enumerate(distances_m):
            a_db = path_loss_db(
                l,
                f,
                ref_distance_m=cfg.ref_distance_m,
                spreading_exponent=cfg.spreading_exponent,
            )
            grid[i, j] = source_level_db - a_db - noise_db
    return grid


def impulse_response(cfg: ChannelConfig, f_design_khz: float) -> ImpulseResponse:
    """One tap per path: delay length/c, gain reflection/sqrt(A) at the
    design frequency."""
    if not cfg.paths:
        raise ValueError("channel has no propagation paths")
    taps = []
    for p in cfg.paths:
        attenuation = path_loss(
            p.length_m,
            f_design_khz,
            ref_distance_m=cfg.ref_distance_m,
            spreading_exponent=cfg.spreading_exponent,
        )
        taps.append((p.reflection / math.sqrt(attenuation), p.length_m / cfg.sound_speed_ms))
    taps.sort(key=lambda t: t[1])
    return ImpulseResponse(taps=tuple(taps))


def delay_sum(signal: np.ndarray, ir: ImpulseResponse, sample_rate: float) -> np.ndarray:
    """Sum of gain-scaled, delayed copies of the signal; fractional
    delays by linear interpolation between adjacent samples."""
    signal = np.asarray(signal, dtype=float)
    max_shift = int(math.ceil(ir.max_delay * sample_rate))
    out = np.zeros(len(signal) + max_shift)
    for gain, delay in ir.taps:
        d = delay * sample_rate
        i0 = int(math.floor(d))
        frac = d - i0
        out[i0 : i0 + len(signal)] += gain * (1.0 - frac) * signal
        if frac > 0.0:
            out[i0 + 1 : i0 + 1 + len(signal)] += gain * frac * signal
    return out


def resample_doppler(signal: np.ndarray, doppler_factor: float) -> np.ndarray:
    """Time-scale the signal by resampling at ratio (1 + doppler_factor)."""
    if doppler_factor == 0.0:
        return np.asarray(signal, dtype=float)
    signal = np.asarray(signal, dtype=float)
    ratio = 1.0 + doppler_factor
    n_out = int(math.floor((len(signal) - 1) / ratio)) + 1
    times = np.arange(n_out) * ratio
    return np.interp(times, np.arange(len(signal)), signal)


def noise_sigma(noise: NoiseConfig, sample_rate: float) -> float:
    """Per-sample standard deviation of the ambient noise."""
    if noise.ambient_psd_db is None:
        return 0.0
    return math.sqrt(10.0 ** (noise.ambient_psd_db / 10.0) * sample_rate / 2.0)


def add_noise(
    signal: np.ndarray,
    noise: NoiseConfig,
    sample_rate: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Add ambient white Gaussian noise plus gated burst segments.

    Draw order is fixed (burst arrival times first, then one Gaussian
    array) so a seeded generator reproduces the realization exactly.
    """
    signal = np.asarray(signal, dtype=float)
    sigma = noise_sigma(noise, sample_rate)
    if sigma == 0.0:
        return signal.copy()
    std = np.full(len(signal), sigma)
    if noise.burst is not None and noise.burst.rate_hz > 0:
        total_s = len(signal) / sample_rate
        boost = 10.0 ** (noise.burst.power_boost_db / 20.0)
        t = 0.0
        while True:
            t += rng.exponential(1.0 / noise.burst.rate_hz)
            if t >= total_s:
                break
            a = int(t * sample_rate)
            b = min(int((t + noise.burst.duration_s) * sample_rate), len(signal))
            std[a:b] = sigma * boost
    return signal + rng.standard_normal(len(signal)) * std


def apply_channel(
    signal: np.ndarray,
    ir: ImpulseResponse,
    cfg: ChannelConfig,
    seed: int = 0,
    signal_rate: float | None = None,
) -> np.ndarray:
    """Multipath delay-sum, then Doppler resampling, then additive
    noise; deterministic for a fixed seed."""
    if signal_rate is not None and signal_rate != cfg.sample_rate:
        raise SampleRateMismatch(
            f"signal sampled at {signal_rate} Hz but channel expects "
            f"{cfg.sample_rate} Hz"
        )
    out = delay_sum(signal, ir, cfg.sample_rate)
    out = resample_doppler(out, cfg.doppler_factor)
    rng = np.random.default_rng(seed)
    return add_noise(out, cfg.noise, cfg.sample_rate, rng)
