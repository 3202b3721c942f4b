"""Finite field GF(2^s) arithmetic and polynomial helpers.

Field elements are integers in [0, 2^s) whose bits are the coefficients
of a polynomial over GF(2); arithmetic is modulo a primitive polynomial
of degree s.  Multiplication and inversion go through discrete log/exp
tables built once at field construction, so the decode hot paths are
pure table lookups.

Polynomials over a field are plain lists of field elements, lowest
degree first.  The zero polynomial is the empty list.
"""

from __future__ import annotations

# Minimal-weight primitive polynomials per extension degree (bitmask,
# bit i = coefficient of x^i).  s=4 is x^4+x+1 = 0o23.
DEFAULT_PRIMITIVE_POLYS: dict[int, int] = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


class NonPrimitivePolynomialError(ValueError):
    """The supplied modulus does not generate the full multiplicative group."""


class Field:
    """GF(2^s) with log/exp tables generated by the element alpha = x.

    Raises NonPrimitivePolynomialError when the polynomial is reducible
    or irreducible-but-not-primitive (the powers of alpha cycle before
    visiting all 2^s - 1 nonzero elements).
    """

    __slots__ = ("s", "order", "primitive_poly", "exp", "log")

    def __init__(self, s: int, primitive_poly: int | None = None):
        if not 2 <= s <= 16:
            raise ValueError(f"bits per symbol must be in [2, 16], got {s}")
        if primitive_poly is None:
            primitive_poly = DEFAULT_PRIMITIVE_POLYS[s]
        if primitive_poly.bit_length() != s + 1:
            raise ValueError(
                f"modulus 0b{primitive_poly:b} does not have degree {s}"
            )
        self.s = s
        self.order = 1 << s
        self.primitive_poly = primitive_poly

        q = self.order
        # exp table doubled so mul can skip the mod (q-1) reduction.
        exp = [0] * (2 * (q - 1))
        log = [-1] * q
        val = 1
        for i in range(q - 1):
            if log[val] != -1:
                # alpha's cyclic order is < q-1: poly is not primitive.
                raise NonPrimitivePolynomialError(
                    f"0b{primitive_poly:b} is not primitive for GF(2^{s})"
                )
            exp[i] = val
            exp[i + q - 1] = val
            log[val] = i
            val <<= 1
            if val & q:
                val ^= primitive_poly
        if val != 1:
            raise NonPrimitivePolynomialError(
                f"0b{primitive_poly:b} is not primitive for GF(2^{s})"
            )
        self.exp = exp
        self.log = log

    def add(self, a: int, b: int) -> int:
        """Addition = subtraction = XOR in characteristic 2."""
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^s)")
        return self.exp[self.order - 1 - self.log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a**e with e any integer (negative allowed for nonzero a)."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no inverse in GF(2^s)")
            return 0
        return self.exp[(self.log[a] * e) % (self.order - 1)]

    def alpha_pow(self, i: int) -> int:
        """alpha^i for the generator element alpha = x."""
        return self.exp[i % (self.order - 1)]

    def __repr__(self) -> str:
        return f"Field(s={self.s}, primitive_poly=0b{self.primitive_poly:b})"


# ---------------------------------------------------------------------------
# Polynomials: list[int] of field elements, lowest degree first.

def poly_trim(p: list[int]) -> list[int]:
    """Strip trailing (leading-degree) zero coefficients."""
    i = len(p)
    while i > 0 and p[i - 1] == 0:
        i -= 1
    return p[:i]


def poly_deg(p: list[int]) -> int:
    """Degree, with the zero polynomial at -1."""
    return len(poly_trim(p)) - 1


def poly_add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return poly_trim(out)


def poly_mul(field: Field, a: list[int], b: list[int]) -> list[int]:
    a = poly_trim(a)
    b = poly_trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] ^= field.mul(ca, cb)
    return poly_trim(out)


def poly_scale(field: Field, p: list[int], c: int) -> list[int]:
    return poly_trim([field.mul(x, c) for x in p])


def poly_divmod(
    field: Field, a: list[int], b: list[int]
) -> tuple[list[int], list[int]]:
    """Quotient and remainder of a / b; deg(remainder) < deg(b)."""
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    db = len(b) - 1
    lead_inv = field.inv(b[-1])
    if len(rem) <= db:
        return [], poly_trim(rem)
    quot = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        coef = rem[i]
        if coef == 0:
            continue
        factor = field.mul(coef, lead_inv)
        quot[i - db] = factor
        for j in range(db + 1):
            rem[i - db + j] ^= field.mul(factor, b[j])
    return poly_trim(quot), poly_trim(rem)


def poly_mod(field: Field, a: list[int], b: list[int]) -> list[int]:
    return poly_divmod(field, a, b)[1]


def poly_eval(field: Field, p: list[int], x: int) -> int:
    """Evaluate p at x by Horner's rule."""
    acc = 0
    for c in reversed(p):
        acc = field.mul(acc, x) ^ c
    return acc
