"""Direct-sequence spread spectrum physical layer.

Spreading sequences (m-sequences, Gold codes, Walsh rows) as +/-1 chip
tuples, chip-level spreading/despreading, and coherent passband BPSK /
QPSK modulation.  Detection assumes genie timing and phase: the
receiver is handed the sample offset of the first chip and uses the
transmitter's own carrier reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


class ZeroSeed(ValueError):
    """All-zero shift register state never leaves zero."""


class NonPrimitiveTaps(ValueError):
    """Feedback taps whose register cycle is shorter than 2^m - 1."""


# x^m + ... + 1 as a bitmask, bit i = coefficient of x^i.
DEFAULT_LFSR_TAPS: dict[int, int] = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
}


@dataclass(frozen=True)
class PnSequence:
    """One spreading code: +/-1 chips, repeated once per data bit."""

    family: str
    chips: tuple[int, ...]

    def __post_init__(self):
        if not self.chips:
            raise ValueError("empty chip sequence")
        if any(c not in (-1, 1) for c in self.chips):
            raise ValueError("chips must be +/-1")

    @property
    def length(self) -> int:
        return len(self.chips)


def _lfsr_bits(m: int, taps: int, seed: int) -> list[int]:
    """One full period of a Galois LFSR, verifying the period is maximal."""
    if not 2 <= m <= 16:
        raise ValueError(f"register length {m} out of range [2, 16]")
    if taps >> m != 1:
        raise NonPrimitiveTaps(f"taps {taps:#b} must have degree exactly {m}")
    if seed == 0:
        raise ZeroSeed("LFSR seed must be nonzero")
    seed &= (1 << m) - 1
    if seed == 0:
        raise ZeroSeed("LFSR seed must be nonzero in the low m bits")
    period = (1 << m) - 1
    mask = taps >> 1
    state = seed
    out: list[int] = []
    for _ in range(period):
        bit = state & 1
        state >>= 1
        if bit:
            state ^= mask
        out.append(bit)
        if state == seed and len(out) < period:
            raise NonPrimitiveTaps(
                f"taps {taps:#b} cycle after {len(out)} steps, not {period}"
            )
    if state != seed:
        raise NonPrimitiveTaps(f"taps {taps:#b} do not return to the seed state")
    return out


def msequence(m: int, seed: int = 1, taps: int | None = None) -> PnSequence:
    """Maximal-length sequence of period 2^m - 1, bit 1 mapped to +1."""
    if taps is None:
        try:
            taps = DEFAULT_LFSR_TAPS[m]
        except KeyError:
            raise ValueError(f"no default taps for m={m}") from None
    bits = _lfsr_bits(m, taps, seed)
    return PnSequence("m", tuple(1 if b else -1 for b in bits))


def gold_code(m: int, index: int, seed: int = 1, taps: int | None = None) -> PnSequence:
    """Member of the Gold family built from a preferred pair (u, v) with
    v the decimation of u by 2^k + 1.  Family size is 2^m + 1; index 0
    is u, index 1 is v, index 2+i is u XOR (v cyclically shifted by i).
    """
    if m % 4 == 0:
        raise ValueError(f"no preferred pair exists for m={m} divisible by 4")
    n = (1 << m) - 1
    if not 0 <= index < n + 2:
        raise ValueError(f"index {index} out of range for family size {n + 2}")
    u = msequence(m, seed=seed, taps=taps)
    k = 1 if m % 2 == 1 else 2
    d = (1 << k) + 1
    ubits = [0 if c == -1 else 1 for c in u.chips]
    vbits = [ubits[(d * i) % n] for i in range(n)]
    if index == 0:
        bits = ubits
    elif index == 1:
        bits = vbits
    else:
        shift = index - 2
        bits = [ubits[i] ^ vbits[(i + shift) % n] for i in range(n)]
    return PnSequence("gold", tuple(1 if b else -1 for b in bits))


def walsh(order: int, row: int) -> PnSequence:
    """Row of the order x order Hadamard matrix (order a power of two)."""
    if order < 2 or order & (order - 1):
        raise ValueError(f"order {order} must be a power of two >= 2")
    if not 0 <= row < order:
        raise ValueError(f"row {row} out of range for order {order}")
    chips = tuple(1 if bin(row & col).count("1") % 2 == 0 else -1 for col in range(order))
    return PnSequence("walsh", chips)


def periodic_autocorrelation(seq: PnSequence, shift: int) -> int:
    n = seq.length
    return sum(seq.chips[i] * seq.chips[(i + shift) % n] for i in range(n))


def cross_correlation(a: PnSequence, b: PnSequence, shift: int) -> int:
    if a.length != b.length:
        raise ValueError("sequences must have equal length")
    n = a.length
    return sum(a.chips[i] * b.chips[(i + shift) % n] for i in range(n))


@dataclass(frozen=True)
class PhyConfig:
    chip_rate: float = 12_500.0
    samples_per_chip: int = 8
    carrier_hz: float = 25_000.0
    modulation: str = "bpsk"

    def __post_init__(self):
        if self.chip_rate <= 0:
            raise ValueError("chip rate must be positive")
        if self.samples_per_chip < 2:
            raise ValueError("need at least 2 samples per chip")
        if self.modulation not in ("bpsk", "qpsk"):
            raise ValueError(f"unknown modulation {self.modulation!r}")
        if self.carrier_hz <= 0 or self.carrier_hz >= self.sample_rate / 2:
            raise ValueError(
                f"carrier {self.carrier_hz} Hz must sit below Nyquist "
                f"({self.sample_rate / 2} Hz)"
            )

    @property
    def sample_rate(self) -> float:
        return self.chip_rate * self.samples_per_chip


def spread(bits: Sequence[int], seq: PnSequence) -> np.ndarray:
    """Multiply each data bit (1 -> +1, 0 -> -1) by the full chip sequence."""
    if any(b not in (0, 1) for b in bits):
        raise ValueError("data bits must be 0/1")
    code = np.asarray(seq.chips, dtype=np.int8)
    symbols = np.asarray([1 if b else -1 for b in bits], dtype=np.int8)
    return (symbols[:, None] * code[None, :]).reshape(-1)


def despread(chips: np.ndarray, seq: PnSequence) -> list[int]:
    """Correlate each code-length block against the code; sign decides
    the bit (ties count as 1)."""
    chips = np.asarray(chips, dtype=float)
    n = seq.length
    if len(chips) % n:
        raise ValueError(f"chip stream length {len(chips)} not a multiple of {n}")
    code = np.asarray(seq.chips, dtype=float)
    corr = chips.reshape(-1, n) @ code
    return [1 if c >= 0 else 0 for c in corr]


def modulate(chips: Sequence[int], cfg: PhyConfig) -> np.ndarray:
    """Passband waveform.  BPSK puts one chip per chip period on the
    carrier; QPSK puts consecutive chip pairs on I and Q of the same
    chip period, halving the transmission time."""
    chips = np.asarray(chips, dtype=float)
    spc = cfg.samples_per_chip
    if cfg.modulation == "bpsk":
        i_stream = np.repeat(chips, spc)
        q_stream = np.zeros(len(i_stream))
    else:
        if len(chips) % 2:
            raise ValueError("qpsk needs an even chip count")
        i_stream = np.repeat(chips[0::2], spc)
        q_stream = np.repeat(chips[1::2], spc)
    t = np.arange(len(i_stream)) / cfg.sample_rate
    w = 2.0 * math.pi * cfg.carrier_hz
    return i_stream * np.cos(w * t) - q_stream * np.sin(w * t)


def demodulate(
    samples: np.ndarray,
    cfg: PhyConfig,
    n_chips: int,
    timing_offset: int = 0,
) -> np.ndarray:
    """Coherent demodulation back to soft chip values (clean input gives
    values near +/-1).  timing_offset is the sample index of the first
    chip; the local carrier runs on the receiver's own clock from that
    sample."""
    samples = np.asarray(samples, dtype=float)
    spc = cfg.samples_per_chip
    if cfg.modulation == "qpsk" and n_chips % 2:
        raise ValueError("qpsk carries an even number of chips")
    n_windows = n_chips if cfg.modulation == "bpsk" else n_chips // 2
    needed = timing_offset + n_windows * spc
    if timing_offset < 0 or needed > len(samples):
        raise ValueError(
            f"need samples [{timing_offset}, {needed}) but stream has {len(samples)}"
        )
    seg = samples[timing_offset : timing_offset + n_windows * spc]
    t = np.arange(len(seg)) / cfg.sample_rate
    w = 2.0 * math.pi * cfg.carrier_hz
    i_soft = (seg * (2.0 * np.cos(w * t))).reshape(n_windows, spc).mean(axis=1)
    if cfg.modulation == "bpsk":
        return i_soft
    q_soft = (seg * (-2.0 * np.sin(w * t))).reshape(n_windows, spc).mean(axis=1)
    out = np.empty(n_chips)
    out[0::2] = i_soft
    out[1::2] = q_soft
    return out


def ber(sent: Sequence[int], received: Sequence[int]) -> float:
    if len(sent) != len(received):
        raise ValueError(f"length mismatch: {len(sent)} vs {len(received)}")
    if not sent:
        raise ValueError("no bits to compare")
    return sum(1 for a, b in zip(sent, received) if a != b) / len(sent)


def qfunc(x: float) -> float:
    """Gaussian tail probability Q(x)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def awgn_sigma(signal_energy: float, n_bits: int, ebn0_db: float) -> float:
    """Per-sample noise standard deviation that realizes the requested
    Eb/N0 against a signal whose total sample energy (sum of squares)
    is `signal_energy` over `n_bits` data bits."""
    if n_bits <= 0 or signal_energy <= 0:
        raise ValueError("need positive bit count and signal energy")
    gamma = 10.0 ** (ebn0_db / 10.0)
    return math.sqrt(signal_energy / (2.0 * gamma * n_bits))
