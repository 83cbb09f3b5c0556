"""Arithmetic in GF(2^m) with field elements represented as plain ints.

An element is the bit pattern of its polynomial over GF(2): bit i is the
coefficient of x^i, so 0b110 stands for x^2 + x.  Addition is xor.
Multiplication reduces modulo a fixed irreducible polynomial, given in the
same encoding (0b1011 is x^3 + x + 1).

For small fields (q <= 512) full multiplication and inverse tables are
built eagerly; larger fields fall back to shift-and-xor per operation so
that construction stays cheap.  Inverses come from a^(q-2) by square and
multiply, never from the extended Euclidean algorithm.
"""

from __future__ import annotations

from .errors import SingularMatrixError

_TABLE_LIMIT = 512


def clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomial bit patterns (no reduction)."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def polymod(a: int, m: int) -> int:
    """Remainder of polynomial a modulo polynomial m over GF(2)."""
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


class BinaryField:
    """GF(2^degree) defined by an irreducible modulus polynomial.

    Parameters
    ----------
    modulus : int
        Bit pattern of the defining polynomial.  Its degree sets the field
        size q = 2 ** degree.  Irreducibility is the caller's duty; see
        ``context.validate_modulus``.
    """

    def __init__(self, modulus: int):
        degree = modulus.bit_length() - 1
        if degree < 2:
            raise ValueError(f"modulus degree {degree} < 2")
        self.modulus = modulus
        self.degree = degree
        self.q = 1 << degree
        self._mul_table = None
        self._inv_table = None
        if self.q <= _TABLE_LIMIT:
            self._mul_table = [
                [polymod(clmul(a, b), modulus) for b in range(self.q)]
                for a in range(self.q)
            ]
            self._inv_table = [0] * self.q
            for a in range(1, self.q):
                self._inv_table[a] = self._pow_raw(a, self.q - 2)

    def __repr__(self):
        return f"BinaryField(degree={self.degree}, modulus={bin(self.modulus)})"

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return polymod(clmul(a, b), self.modulus)

    def sqr(self, a: int) -> int:
        return self.mul(a, a)

    def _pow_raw(self, a: int, k: int) -> int:
        acc = 1
        base = a
        while k:
            if k & 1:
                acc = polymod(clmul(acc, base), self.modulus)
            base = polymod(clmul(base, base), self.modulus)
            k >>= 1
        return acc

    def pow(self, a: int, k: int) -> int:
        """a ** k; negative k inverts first.  pow(a, 0) is 1."""
        if k < 0:
            a = self.inv(a)
            k = -k
        acc = 1
        while k:
            if k & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            k >>= 1
        return acc

    def inv(self, a: int) -> int:
        if a == 0:
            raise SingularMatrixError("0 has no inverse")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self._pow_raw(a, self.q - 2)

    def elements(self):
        return range(self.q)

    def nonzero(self):
        return range(1, self.q)


class TwistedField(BinaryField):
    """GF(q) for q = 2^(2e+1), carrying the twist map a -> a^(2^e).

    The twist exponent 2^e is written t and satisfies 2 * t * t == q.
    Applying the twist twice gives a^(t*t) = a^(q/2), so one further
    squaring returns a: the twist is a square root of the squaring map.
    """

    def __init__(self, modulus: int, e: int):
        super().__init__(modulus)
        if self.degree != 2 * e + 1:
            raise ValueError(f"degree {self.degree} != 2*{e}+1")
        self.e = e
        self.t = 1 << e
        assert 2 * self.t * self.t == self.q
        self._frob_table = None
        if self.q <= _TABLE_LIMIT:
            self._frob_table = [self._frob_raw(a) for a in range(self.q)]

    def _frob_raw(self, a: int) -> int:
        for _ in range(self.e):
            a = polymod(clmul(a, a), self.modulus)
        return a

    def frobenius_t(self, a: int) -> int:
        """The twist a -> a^t = a^(2^e), computed by e successive squarings."""
        if self._frob_table is not None:
            return self._frob_table[a]
        return self._frob_raw(a)
