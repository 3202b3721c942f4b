"""Block, matrix, and convolutional interleavers.

All three are bijections on symbol positions, used to scatter a
contiguous burst of corrupted symbols across many codewords so a
bounded-distance decoder sees at most t errors per codeword.

The matrix interleaver writes the input row by row into a rows x cols
array and reads it out column by column.  The block interleaver is the
same row/column permutation under its conventional name: the two are
distinguished in the literature only by framing, so the artifact keeps
one implementation.  The convolutional interleaver cycles symbols
round-robin over `branches` delay lines, line i delaying by i *
delay_step positions; delay lines start zero-filled and are drained
with pad symbols so a framed transmission round-trips exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class MatrixSpec:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be positive")


#: The block interleaver is the row/column permutation under its usual name.
BlockSpec = MatrixSpec


@dataclass(frozen=True)
class ConvolutionalSpec:
    branches: int
    delay_step: int
    pad: int = 0

    def __post_init__(self):
        if self.branches < 1:
            raise ValueError("branches must be >= 1")
        if self.delay_step < 0:
            raise ValueError("delay_step must be >= 0")

    @property
    def total_delay(self) -> int:
        """End-to-end interleave+deinterleave delay in symbols."""
        return self.branches * (self.branches - 1) * self.delay_step


InterleaverSpec = MatrixSpec | ConvolutionalSpec


def parse_spec(name: str) -> InterleaverSpec | None:
    """Resolve harness names: "none", "block", "matrix:RxC", "conv:B,M".

    "block" without dimensions defaults to 15x15 (one codeword of the
    length-15 codes per row).  Returns None for "none".
    """
    name = name.strip().lower()
    if name in ("none", ""):
        return None
    if name == "block":
        return MatrixSpec(15, 15)
    kind, _, args = name.partition(":")
    if kind in ("matrix", "block"):
        rows, _, cols = args.partition("x")
        return MatrixSpec(int(rows), int(cols))
    if kind == "conv":
        branches, _, step = args.partition(",")
        return ConvolutionalSpec(int(branches), int(step))
    raise ValueError(f"unrecognized interleaver {name!r}")


def _matrix_permute(rows: int, cols: int, symbols: Sequence) -> list:
    block = rows * cols
    if len(symbols) % block != 0:
        raise ValueError(
            f"input length {len(symbols)} is not a multiple of rows*cols={block}"
        )
    out = []
    for start in range(0, len(symbols), block):
        for c in range(cols):
            for r in range(rows):
                out.append(symbols[start + r * cols + c])
    return out


def _conv_run(spec: ConvolutionalSpec, symbols: Sequence, reverse: bool) -> list:
    lines = []
    for i in range(spec.branches):
        depth = (spec.branches - 1 - i if reverse else i) * spec.delay_step
        lines.append(deque([spec.pad] * depth))
    out = []
    for j, sym in enumerate(symbols):
        line = lines[j % spec.branches]
        if not line:
            out.append(sym)
        else:
            line.append(sym)
            out.append(line.popleft())
    return out


def interleave(spec: InterleaverSpec, symbols: Sequence) -> list:
    """Permute a symbol sequence; convolutional output grows by the
    flush needed to drain the delay lines."""
    if isinstance(spec, MatrixSpec):
        return _matrix_permute(spec.rows, spec.cols, symbols)
    flushed = list(symbols) + [spec.pad] * spec.total_delay
    return _conv_run(spec, flushed, reverse=False)


def deinterleave(spec: InterleaverSpec, symbols: Sequence) -> list:
    """Exact inverse of interleave for framed input."""
    if isinstance(spec, MatrixSpec):
        return _matrix_permute(spec.cols, spec.rows, symbols)
    if len(symbols) < spec.total_delay:
        raise ValueError(
            f"need at least {spec.total_delay} symbols to deinterleave, "
            f"got {len(symbols)}"
        )
    out = _conv_run(spec, symbols, reverse=True)
    return out[spec.total_delay:]


def burst_dispersal(
    spec: InterleaverSpec | None,
    total_len: int,
    burst_start: int,
    burst_len: int,
    codeword_len: int,
) -> int:
    """Worst per-codeword error count after deinterleaving a burst.

    Marks positions [burst_start, burst_start + burst_len) of the
    transmitted stream as corrupted, undoes the permutation, and
    reports the maximum number of marks landing in any single
    length-codeword_len block.  spec=None means no interleaving.
    """
    if codeword_len < 1:
        raise ValueError("codeword_len must be positive")
    if burst_len < 0 or burst_start < 0 or burst_start + burst_len > total_len:
        raise ValueError(
            f"burst [{burst_start}, {burst_start + burst_len}) out of bounds "
            f"for stream of length {total_len}"
        )
    mask = [0] * total_len
    for i in range(burst_start, burst_start + burst_len):
        mask[i] = 1
    demasked = mask if spec is None else deinterleave(spec, mask)
    worst = 0
    for start in range(0, len(demasked), codeword_len):
        worst = max(worst, sum(demasked[start : start + codeword_len]))
    return worst
