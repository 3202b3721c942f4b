"""End-to-end link simulation: data bits through FEC, interleaving,
spreading, passband modulation, a noisy medium, and back.

Used by the BER sweep and the interleaver comparison.  Each call
simulates one framed block and reports information-bit and codeword
error counts; the callers own the trial loop and the RNG streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import channel, fec, interleave, phy
from .config import PhyBlock


@dataclass(frozen=True)
class LinkResult:
    info_bits: int
    bit_errors: int
    codewords: int
    codeword_failures: int


def make_sequence(blk: PhyBlock) -> phy.PnSequence:
    """Spreading sequence for a config block.  pn_order is the register
    length for m/gold families and log2(length) for walsh."""
    if blk.pn_family == "m":
        return phy.msequence(blk.pn_order)
    if blk.pn_family == "gold":
        return phy.gold_code(blk.pn_order, blk.pn_index)
    return phy.walsh(2**blk.pn_order, blk.pn_index)


def make_phy(blk: PhyBlock) -> phy.PhyConfig:
    return phy.PhyConfig(
        chip_rate=blk.chip_rate,
        samples_per_chip=blk.samples_per_chip,
        carrier_hz=blk.carrier_hz,
        modulation=blk.modulation,
    )


def resolve_code(name: str) -> fec.Code | None:
    if name == "none":
        return None
    return fec.code_by_name(name)


def info_bits_per_codeword(code: fec.Code | None, uncoded_block_bits: int) -> int:
    if code is None:
        return uncoded_block_bits
    if code.kind == "rs":
        return code.k * code.field.s
    return code.k


def run_link_block(
    code: fec.Code | None,
    ilv: interleave.InterleaverSpec | None,
    phy_cfg: phy.PhyConfig,
    seq: phy.PnSequence,
    n_codewords: int,
    rng_data: np.random.Generator,
    rng_noise: np.random.Generator,
    ebn0_db: float | None,
    ambient: channel.NoiseConfig | None = None,
    uncoded_block_bits: int = 60,
) -> LinkResult:
    """Simulate one block of n_codewords codewords.

    ebn0_db is referenced to information bits, so the code-rate energy
    penalty is applied automatically.  With ambient=None the noise is
    white Gaussian at that Eb/N0; otherwise the signal amplitude is
    scaled so the ambient floor sits at that Eb/N0 and any configured
    burst process rides on top.
    """
    if n_codewords < 1:
        raise ValueError("need at least one codeword")

    # Data generation and encoding.  RS interleaves at symbol level
    # (bursts then smear whole symbols, which is what the code is good
    # at correcting); binary codes and uncoded blocks work on bits.
    sent_data: list[list[int]] = []
    stream_syms: list[int] = []
    for _ in range(n_codewords):
        if code is None:
            data = rng_data.integers(0, 2, size=uncoded_block_bits).tolist()
            stream_syms.extend(data)
        elif code.kind == "rs":
            data = rng_data.integers(0, code.field.order, size=code.k).tolist()
            stream_syms.extend(fec.encode(code, data))
        else:
            data = rng_data.integers(0, 2, size=code.k).tolist()
            stream_syms.extend(fec.encode(code, data))
        sent_data.append(data)

    # Matrix interleaving is framed: stuff zero symbols up to a frame
    # boundary and drop them again after deinterleaving.
    tx_input = stream_syms
    if isinstance(ilv, interleave.MatrixSpec):
        frame = ilv.rows * ilv.cols
        short = -len(stream_syms) % frame
        if short:
            tx_input = stream_syms + [0] * short

    tx_syms = interleave.interleave(ilv, tx_input) if ilv else tx_input
    if code is not None and code.kind == "rs":
        tx_bits = fec.symbols_to_bits(code.field, tx_syms)
        bits_per_sym = code.field.s
    else:
        tx_bits = [int(b) for b in tx_syms]
        bits_per_sym = 1

    # QPSK frames an even chip count; a trailing pad bit is stripped
    # again after despreading.
    pad_bits = 0
    if phy_cfg.modulation == "qpsk" and (len(tx_bits) * seq.length) % 2:
        tx_bits = tx_bits + [0]
        pad_bits = 1

    chips = phy.spread(tx_bits, seq)
    wave = phy.modulate(chips, phy_cfg)

    n_info = n_codewords * info_bits_per_codeword(code, uncoded_block_bits)
    # Energy per information bit counts only data-carrying chips; the
    # convolutional flush is a fixed framing cost, not transmit energy
    # the data gets credit for.  Per-chip energy does not depend on
    # chip signs, so the data share is the chip-count fraction.
    n_data_chips = len(stream_syms) * bits_per_sym * seq.length
    data_energy = float(np.sum(wave * wave)) * (n_data_chips / len(chips))

    if ebn0_db is None:
        rx_wave = wave
    elif ambient is None:
        sigma = phy.awgn_sigma(data_energy, n_info, ebn0_db)
        rx_wave = wave + rng_noise.standard_normal(len(wave)) * sigma
    else:
        sigma = channel.noise_sigma(ambient, phy_cfg.sample_rate)
        if sigma == 0.0:
            raise ValueError("ambient noise config has no ambient level")
        gamma = 10.0 ** (ebn0_db / 10.0)
        scale = math.sqrt(2.0 * gamma * n_info * sigma * sigma / data_energy)
        rx_wave = channel.add_noise(wave * scale, ambient, phy_cfg.sample_rate, rng_noise)

    soft = phy.demodulate(rx_wave, phy_cfg, len(chips))
    rx_bits = phy.despread(soft, seq)
    if pad_bits:
        rx_bits = rx_bits[: len(rx_bits) - pad_bits]

    if code is not None and code.kind == "rs":
        rx_syms = fec.bits_to_symbols(code.field, rx_bits)
    else:
        rx_syms = rx_bits
    rx_stream = interleave.deinterleave(ilv, rx_syms) if ilv else rx_syms
    rx_stream = rx_stream[: len(stream_syms)]

    block = uncoded_block_bits if code is None else code.n
    bit_errors = 0
    failures = 0
    for i, sent in enumerate(sent_data):
        word = rx_stream[i * block : (i + 1) * block]
        if code is None:
            errs = sum(a != b for a, b in zip(sent, word))
            bit_errors += errs
            failures += 1 if errs else 0
            continue
        try:
            decoded, _ = fec.decode(code, word)
            failed = False
        except fec.DecodeFailure:
            decoded = list(word[: code.k])  # systematic part, best effort
            failed = True
        if decoded != sent:
            failed = True
        failures += 1 if failed else 0
        if code.kind == "rs":
            sb = fec.symbols_to_bits(code.field, sent)
            db = fec.symbols_to_bits(code.field, decoded)
            bit_errors += sum(a != b for a, b in zip(sb, db))
        else:
            bit_errors += sum(a != b for a, b in zip(sent, decoded))

    return LinkResult(n_info, bit_errors, n_codewords, failures)
