"""Block error-correction codecs: Reed-Solomon over GF(2^s) and the
binary BCH(15, k) family, both with errors-and-erasures decoding.

A codeword is a list of n symbols, systematic: the first k entries are
the data symbols, the trailing n-k the parity.  Index i holds the
coefficient of x^(n-1-i), so index 0 is transmitted first.

Both codecs share one bounded-distance decoder: syndromes, erasure
locator, Berlekamp-Massey on the erasure-adjusted syndromes, Chien
search, Forney magnitudes.  It corrects any pattern of e symbol errors
plus f erasures with 2e + f <= 2t.  The binary codes are decoded as
subfield subcodes of the length-15 code over GF(16); the corrected
word must come back binary or the decode is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gf import Field, poly_eval, poly_mul, poly_trim

# Correctable-error counts of the classical binary BCH(15, k) family,
# keyed by t; value is the message length k.
BCH15_K_BY_T = {1: 11, 2: 7, 3: 5, 7: 1}

BCH_LENGTH = 15


class DecodeFailure(Exception):
    """Error/erasure pattern detected as uncorrectable."""


@dataclass(frozen=True)
class Code:
    """An (n, k) block code correcting t symbol errors.

    kind is "rs" or "bch".  For "bch" the symbols are bits and
    `field` is the GF(16) locator field used by the decoder; the
    generator still has binary coefficients.
    """

    kind: str
    field: Field
    n: int
    k: int
    t: int
    generator: list[int]  # lowest degree first

    @property
    def name(self) -> str:
        return f"{self.kind}-{self.n}-{self.k}"

    def generator_octal(self) -> str:
        """Generator as an octal literal, MSB = highest-degree coefficient.

        Only meaningful for binary generators.
        """
        value = 0
        for i, c in enumerate(self.generator):
            if c not in (0, 1):
                raise ValueError("octal form requires a binary generator")
            value |= c << i
        return f"{value:o}"


def _minimal_polynomial(field: Field, exponent: int) -> list[int]:
    """Minimal polynomial over GF(2) of alpha^exponent in `field`."""
    n = field.order - 1
    conjugates = []
    e = exponent % n
    while e not in conjugates:
        conjugates.append(e)
        e = (e * 2) % n
    poly = [1]
    for c in conjugates:
        poly = poly_mul(field, poly, [field.alpha_pow(c), 1])
    if any(coef not in (0, 1) for coef in poly):
        raise AssertionError("minimal polynomial must be binary")
    return poly


def bch_generator(t: int) -> list[int]:
    """Generator polynomial of the binary BCH(15, k) code for t errors.

    Product of the minimal polynomials of alpha, alpha^3, ...,
    alpha^(2t-1) with alpha primitive in GF(16).  Supported t values
    and the octal forms of the results:

        t=1 -> 23 (k=11), t=2 -> 721 (k=7), t=3 -> 2467 (k=5),
        t=7 -> 77777 (k=1)
    """
    if t not in BCH15_K_BY_T:
        raise ValueError(f"unsupported t={t}; expected one of {sorted(BCH15_K_BY_T)}")
    field = Field(4)
    gen = [1]
    seen: set[frozenset[int]] = set()
    for i in range(1, 2 * t, 2):
        conj = frozenset((i * (1 << j)) % 15 for j in range(4))
        if conj in seen:
            continue
        seen.add(conj)
        gen = poly_mul(field, gen, _minimal_polynomial(field, i))
    return gen


def rs_generator(field: Field, n: int, k: int) -> list[int]:
    """Reed-Solomon generator g(x) = prod_{i=1..2t} (x - alpha^i)."""
    if n != field.order - 1:
        raise ValueError(f"n must be {field.order - 1} for this field, got {n}")
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if (n - k) % 2 != 0:
        raise ValueError(f"n - k must be even, got n={n}, k={k}")
    gen = [1]
    for i in range(1, n - k + 1):
        gen = poly_mul(field, gen, [field.alpha_pow(i), 1])
    return gen


def rs_code(field: Field, n: int, k: int) -> Code:
    gen = rs_generator(field, n, k)
    return Code(kind="rs", field=field, n=n, k=k, t=(n - k) // 2, generator=gen)


def bch_code(t: int) -> Code:
    gen = bch_generator(t)
    k = BCH_LENGTH - (len(gen) - 1)
    assert k == BCH15_K_BY_T[t]
    return Code(kind="bch", field=Field(4), n=BCH_LENGTH, k=k, t=t, generator=gen)


def code_by_name(name: str) -> Code:
    """Resolve "rs-15-11" / "bch-15-7" style names."""
    parts = name.lower().split("-")
    if len(parts) != 3:
        raise ValueError(f"unrecognized code name {name!r}")
    kind, n_s, k_s = parts
    n, k = int(n_s), int(k_s)
    if kind == "rs":
        s = n.bit_length()
        if (1 << s) - 1 != n:
            raise ValueError(f"RS length must be 2^s - 1, got {n}")
        return rs_code(Field(s), n, k)
    if kind == "bch":
        if n != BCH_LENGTH:
            raise ValueError(f"only the length-15 binary family is supported, got {n}")
        for t, kk in BCH15_K_BY_T.items():
            if kk == k:
                return bch_code(t)
        raise ValueError(f"no BCH(15, {k}) in the supported family")
    raise ValueError(f"unrecognized code kind {kind!r}")


def encode(code: Code, data: Sequence[int]) -> list[int]:
    """Systematic encode: data symbols followed by parity symbols."""
    if len(data) != code.k:
        raise ValueError(f"expected {code.k} data symbols, got {len(data)}")
    field = code.field
    limit = 2 if code.kind == "bch" else field.order
    for sym in data:
        if not 0 <= sym < limit:
            raise ValueError(f"symbol {sym} out of range for {code.name}")
    n_k = code.n - code.k
    # Remainder of data(x) * x^(n-k) mod g(x), done in place highest-first.
    rem = list(data) + [0] * n_k
    gen_hi = list(reversed(code.generator))  # gen_hi[0] = leading coeff = 1
    for i in range(code.k):
        coef = rem[i]
        if coef == 0:
            continue
        for j in range(1, len(gen_hi)):
            rem[i + j] ^= field.mul(coef, gen_hi[j])
        rem[i] = 0
    return list(data) + rem[code.k:]


def syndromes(code: Code, word: Sequence[int]) -> list[int]:
    """S_j = word(alpha^j) for j = 1..2t; all zero iff word is a codeword."""
    field = code.field
    out = []
    for j in range(1, 2 * code.t + 1):
        x = field.alpha_pow(j)
        acc = 0
        for sym in word:
            acc = field.mul(acc, x) ^ sym
        out.append(acc)
    return out


def _berlekamp_massey(field: Field, seq: list[int]) -> list[int]:
    """Minimal LFSR (error locator) for the given syndrome sequence."""
    lam = [1]
    prev = [1]
    length = 0
    m = 1
    prev_delta = 1
    for i, s in enumerate(seq):
        delta = s
        for j in range(1, length + 1):
            if j < len(lam):
                delta ^= field.mul(lam[j], seq[i - j])
        if delta == 0:
            m += 1
            continue
        scale = field.div(delta, prev_delta)
        update = [0] * m + [field.mul(scale, c) for c in prev]
        if 2 * length <= i:
            lam, prev = poly_trim(
                [a ^ b for a, b in zip(lam + [0] * len(update), update + [0] * len(lam))]
            ), lam
            length = i + 1 - length
            prev_delta = delta
            m = 1
        else:
            lam = poly_trim(
                [a ^ b for a, b in zip(lam + [0] * len(update), update + [0] * len(lam))]
            )
            m += 1
    return lam


def decode(
    code: Code,
    received: Sequence[int],
    erasure_positions: Sequence[int] = (),
) -> tuple[list[int], int]:
    """Correct `received` and return (data symbols, symbols changed).

    Succeeds for any pattern of e symbol errors outside the flagged
    positions plus f erasures with 2e + f <= 2t.  Raises DecodeFailure
    when the pattern is detected as uncorrectable; beyond-budget
    patterns may miscorrect silently, as for any bounded-distance
    decoder.
    """
    field = code.field
    n, t = code.n, code.t
    if len(received) != n:
        raise ValueError(f"expected {n} received symbols, got {len(received)}")
    erasures = list(erasure_positions)
    if len(set(erasures)) != len(erasures):
        raise ValueError("erasure positions must be distinct")
    for pos in erasures:
        if not 0 <= pos < n:
            raise ValueError(f"erasure position {pos} out of range")
    f = len(erasures)
    if f > 2 * t:
        raise DecodeFailure(f"{f} erasures exceed the 2t={2 * t} budget")

    word = list(received)
    synd = syndromes(code, word)
    if all(s == 0 for s in synd):
        return word[: code.k], 0

    # Erasure locator from the degree view of each position.
    gamma = [1]
    for pos in erasures:
        gamma = poly_mul(field, gamma, [1, field.alpha_pow(n - 1 - pos)])

    # Erasure-adjusted syndromes; the first f carry no new information.
    adjusted = poly_mul(field, synd, gamma)[: 2 * t]
    adjusted += [0] * (2 * t - len(adjusted))
    lam = _berlekamp_massey(field, adjusted[f:]) if f < 2 * t else [1]
    n_errors = len(lam) - 1
    if 2 * n_errors + f > 2 * t:
        raise DecodeFailure("error pattern exceeds the correction budget")

    # Errata locator and evaluator.
    psi = poly_mul(field, lam, gamma)
    omega = poly_mul(field, synd, psi)[: 2 * t]

    # Chien search over the degree positions 0..n-1.
    q1 = field.order - 1
    errata: list[tuple[int, int]] = []  # (list index, inverse locator)
    for deg_pos in range(n):
        x_inv = field.alpha_pow(q1 - deg_pos)
        if poly_eval(field, psi, x_inv) == 0:
            errata.append((n - 1 - deg_pos, x_inv))
    if len(errata) != len(psi) - 1:
        raise DecodeFailure("error locator does not split over the field")

    # Forney: Y = Omega(Xinv) / Psi'(Xinv); formal derivative in char 2
    # keeps only the odd-degree terms.
    dpsi = [psi[j] if j % 2 == 1 else 0 for j in range(1, len(psi))]
    corrected = 0
    for idx, x_inv in errata:
        denom = poly_eval(field, dpsi, x_inv)
        if denom == 0:
            raise DecodeFailure("degenerate errata locator")
        magnitude = field.div(poly_eval(field, omega, x_inv), denom)
        if magnitude == 0:
            continue  # flagged erasure whose fill value was already right
        word[idx] ^= magnitude
        corrected += 1

    if any(s != 0 for s in syndromes(code, word)):
        raise DecodeFailure("corrected word is not a codeword")
    if code.kind == "bch" and any(sym > 1 for sym in word):
        raise DecodeFailure("corrected word is not binary")
    return word[: code.k], corrected


def symbols_to_bits(field: Field, symbols_seq: Sequence[int]) -> list[int]:
    """Pack field symbols into bits, most-significant bit first."""
    bits = []
    for sym in symbols_seq:
        for shift in range(field.s - 1, -1, -1):
            bits.append((sym >> shift) & 1)
    return bits


def bits_to_symbols(field: Field, bits: Sequence[int]) -> list[int]:
    """Inverse of symbols_to_bits; bit count must be a multiple of s."""
    if len(bits) % field.s != 0:
        raise ValueError(f"bit count {len(bits)} not a multiple of s={field.s}")
    out = []
    for i in range(0, len(bits), field.s):
        sym = 0
        for b in bits[i : i + field.s]:
            sym = (sym << 1) | b
        out.append(sym)
    return out
