"""Arithmetic in GF(2^k) with elements stored as bitmasks of degree < k."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadData

# Fixed moduli so element indexing is reproducible.
DEFAULT_MODULI = {
    2: 0b111,           # x^2 + x + 1
    6: 0b1011011,       # x^6 + x^4 + x^3 + x + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
}


def poly_mulmod(a: int, b: int, modulus: int, k: int) -> int:
    out = 0
    top = 1 << k
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return out


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(modulus: int) -> bool:
    """Trial division by every polynomial of degree 1..k/2."""
    k = modulus.bit_length() - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            if poly_mod(modulus, f) == 0:
                return False
    return True


@dataclass(frozen=True)
class GF2kField:
    k: int
    modulus: int

    def __post_init__(self):
        if self.modulus.bit_length() - 1 != self.k:
            raise BadData(f"modulus degree {self.modulus.bit_length() - 1} != k={self.k}")
        if not is_irreducible(self.modulus):
            raise BadData(f"modulus {bin(self.modulus)} is reducible over GF(2)")

    @classmethod
    def default(cls, k: int) -> "GF2kField":
        if k not in DEFAULT_MODULI:
            raise BadData(f"no default modulus recorded for k={k}")
        return cls(k, DEFAULT_MODULI[k])

    @property
    def size(self) -> int:
        return 1 << self.k

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return poly_mulmod(a, b, self.modulus, self.k)

    def pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.size - 2)

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative order")
        x, o = a, 1
        while x != 1:
            x = self.mul(x, a)
            o += 1
        return o

    def cube_root_of_unity(self) -> int:
        """Smallest nontrivial cube root of unity (needs k even)."""
        for a in range(2, self.size):
            if self.pow(a, 3) == 1:
                return a
        raise BadData(f"GF(2^{self.k}) has no primitive cube root of unity")

    def describe(self) -> str:
        return f"k={self.k} modulus={bin(self.modulus)}"
