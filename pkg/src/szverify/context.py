"""Shared parameters for one Suzuki group Sz(q).

A context bundles everything downstream code needs for a fixed
q = 2^(2e+1): the twisted field, the 4x4 antidiagonal involution iota
(the Gram matrix of the symplectic form, equal to its own inverse), and
the multiplication table of the commutative bilinear-after-twist product
on basis vectors.  Contexts are immutable; build one with make_context.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import SzVerifyError
from .field import BinaryField, TwistedField, clmul, polymod

# Defining polynomials, keyed by degree 2e+1.  Enumeration only ever runs
# at e <= 3; the larger degrees exist so that scalar arithmetic works for
# any context this package will construct.
MODULI = {
    3: 0b1011,            # x^3 + x + 1
    5: 0b100101,          # x^5 + x^2 + 1
    7: 0b10000011,        # x^7 + x + 1
    9: 0b1000010001,      # x^9 + x^4 + 1
    11: 0b100000000101,   # x^11 + x^2 + 1
    13: 0b10000000011011, # x^13 + x^4 + x^3 + x + 1
}

MAX_ENUMERATION_E = 3

IOTA = (
    0, 0, 0, 1,
    0, 0, 1, 0,
    0, 1, 0, 0,
    1, 0, 0, 0,
)

# Nonzero entries of the basis product table: (i, j) -> k means
# e_i * e_j = e_k, with 0-based indices.  The table is symmetric.
_BULLET_NONZERO = {
    (0, 1): 1, (1, 0): 1,
    (0, 2): 3, (2, 0): 3,
    (1, 3): 0, (3, 1): 0,
    (2, 3): 2, (3, 2): 2,
}


def _basis_products():
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            vec = [0, 0, 0, 0]
            k = _BULLET_NONZERO.get((i, j))
            if k is not None:
                vec[k] = 1
            row.append(tuple(vec))
        rows.append(tuple(row))
    return tuple(rows)


def validate_modulus(poly: int) -> bool:
    """True iff poly is irreducible over GF(2) with degree in 2..13.

    Checked by trial division against every polynomial of strictly lower
    degree at least 1.  Degrees outside the supported band raise.
    """
    degree = poly.bit_length() - 1
    if not 2 <= degree <= 13:
        raise ValueError(f"degree {degree} outside supported range 2..13")
    for d in range(1, degree):
        for divisor in range(1 << d, 1 << (d + 1)):
            if polymod(poly, divisor) == 0:
                return False
    return True


@dataclass(frozen=True, eq=False)
class SuzukiContext:
    """Immutable parameter pack for one Sz(q).  Hash is identity."""

    e: int
    q: int
    t: int
    modulus: int
    field: TwistedField = dc_field(repr=False)
    iota: tuple = dc_field(default=IOTA, repr=False)
    bullet_basis: tuple = dc_field(default_factory=_basis_products, repr=False)

    def __str__(self):
        return f"Sz({self.q})"

    @property
    def group_order(self) -> int:
        q = self.q
        return q * q * (q * q + 1) * (q - 1)

    @property
    def sylow_order(self) -> int:
        return self.q * self.q

    @property
    def involution_count(self) -> int:
        q = self.q
        return (q * q + 1) * (q - 1)


def make_context(e: int) -> SuzukiContext:
    """Build the context for q = 2^(2e+1).

    Rejects e < 1 (Sz(2) is not simple and is out of scope) and any e
    whose field degree has no entry in MODULI.
    """
    if e < 1:
        raise ValueError(f"e must be >= 1, got {e}")
    degree = 2 * e + 1
    if degree not in MODULI:
        raise ValueError(f"no modulus on record for degree {degree} (e={e})")
    modulus = MODULI[degree]
    if not validate_modulus(modulus):
        raise SzVerifyError(f"modulus table corrupt: {bin(modulus)} is reducible")
    fld = TwistedField(modulus, e)
    ctx = SuzukiContext(e=e, q=fld.q, t=fld.t, modulus=modulus, field=fld)
    _check_context(ctx)
    return ctx


def _check_context(ctx: SuzukiContext) -> None:
    assert 2 * ctx.t * ctx.t == ctx.q
    # iota is the antidiagonal identity and its own inverse
    for i in range(4):
        for j in range(4):
            expect = 1 if i + j == 3 else 0
            assert ctx.iota[4 * i + j] == expect
    # basis product table is symmetric with exactly eight nonzero entries
    nonzero = 0
    for i in range(4):
        for j in range(4):
            assert ctx.bullet_basis[i][j] == ctx.bullet_basis[j][i]
            if any(ctx.bullet_basis[i][j]):
                nonzero += 1
    assert nonzero == 8
