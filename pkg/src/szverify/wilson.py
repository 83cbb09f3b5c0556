"""Membership test for Sz(q) inside the symplectic group Sp4(q).

The test rests on a commutative product u * v on GF(q)^4, defined on
basis vectors by the table in the context and extended by

    u * v = sum_{i,j} u_i^t v_j^t (e_i * e_j)

where a -> a^t is the field twist.  A symplectic matrix g lies in Sz(q)
exactly when it respects this product on perpendicular pairs:
g(u) * g(v) == g(u * v) whenever f(u, v) = 0.

Checking all perpendicular pairs costs ~q^7 products.  The reduced path
cuts this to 3(q^3 + q^2 + q + 1) pairs: the residual at (u, v) scales
by c^t when u is scaled by c and is additive in v, so u may range over
projective representatives only and v over a basis of the hyperplane
perpendicular to u.  The brute-force path stays as an oracle with no
shared logic beyond the field tables.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .context import SuzukiContext
from .field import BinaryField
from .linalg4 import (
    Mat4,
    Vec4,
    ZERO_VEC,
    basis_vec,
    form_f,
    identity,
    is_symplectic,
    mat_mul,
    mat_vec,
    vec_add,
)

# Unordered basis pairs (i, j) with f(e_i, e_j) = 0, i.e. i + j != 3.
PERP_BASIS_PAIRS = (
    (0, 0), (1, 1), (2, 2), (3, 3),
    (0, 1), (0, 2), (1, 3), (2, 3),
)


def bullet(ctx: SuzukiContext, u: Vec4, v: Vec4) -> Vec4:
    """The commutative product, straight from the extension formula."""
    f = ctx.field
    ut = tuple(f.frobenius_t(x) for x in u)
    vt = tuple(f.frobenius_t(x) for x in v)
    out = [0, 0, 0, 0]
    for i in range(4):
        if ut[i] == 0:
            continue
        for j in range(4):
            if vt[j] == 0:
                continue
            basis = ctx.bullet_basis[i][j]
            c = f.mul(ut[i], vt[j])
            for k in range(4):
                if basis[k]:
                    out[k] ^= c
    return tuple(out)


def wilson_residual(ctx: SuzukiContext, g: Mat4, u: Vec4, v: Vec4) -> Vec4:
    """g(u) * g(v) + g(u * v); zero for members on perpendicular pairs.

    Raises ValueError if f(u, v) != 0: the membership condition quantifies
    over perpendicular pairs only.
    """
    f = ctx.field
    if form_f(f, u, v) != 0:
        raise ValueError(f"pair is not perpendicular: {u}, {v}")
    gu = mat_vec(f, g, u)
    gv = mat_vec(f, g, v)
    return vec_add(bullet(ctx, gu, gv), mat_vec(f, g, bullet(ctx, u, v)))


@lru_cache(maxsize=None)
def projective_reps(ctx: SuzukiContext):
    """One representative per projective point: first nonzero coordinate 1.

    Returns a list of (q^3 + q^2 + q + 1) vectors grouped by leading index.
    """
    reps = []
    q = ctx.q
    for k in range(4):
        free = 3 - k
        for code in range(q ** free):
            v = [0, 0, 0, 0]
            v[k] = 1
            c = code
            for pos in range(k + 1, 4):
                v[pos] = c % q
                c //= q
            reps.append(tuple(v))
    return reps


def perp_basis(ctx: SuzukiContext, u: Vec4):
    """A basis of the hyperplane perpendicular to u (u != 0).

    With k the leading index of u, the vectors are e_j + (u_{3-j}/u_k) e_{3-k}
    for the three j != 3-k; each pairs to zero with u and they are
    independent because their e_j components are.
    """
    f = ctx.field
    k = next((i for i in range(4) if u[i]), None)
    if k is None:
        raise ValueError("zero vector has no perpendicular hyperplane basis")
    c = f.inv(u[k])
    out = []
    for j in range(4):
        if j == 3 - k:
            continue
        v = [0, 0, 0, 0]
        v[j] ^= 1
        v[3 - k] ^= f.mul(c, u[3 - j])
        out.append(tuple(v))
    return out


def is_suzuki(ctx: SuzukiContext, g: Mat4) -> bool:
    """Membership in Sz(q) by the reduced sweep.

    Symplectic check, then the eight perpendicular basis pairs as a cheap
    prefilter, then all projective representatives against their
    perpendicular bases.
    """
    f = ctx.field
    if not is_symplectic(f, g):
        return False
    for i, j in PERP_BASIS_PAIRS:
        if wilson_residual(ctx, g, basis_vec(i), basis_vec(j)) != ZERO_VEC:
            return False
    for u in projective_reps(ctx):
        gu = mat_vec(f, g, u)
        for v in perp_basis(ctx, u):
            gv = mat_vec(f, g, v)
            lhs = bullet(ctx, gu, gv)
            rhs = mat_vec(f, g, bullet(ctx, u, v))
            if lhs != rhs:
                return False
    return True


_BRUTEFORCE_CACHE: dict = {}


def _bruteforce_tables(ctx: SuzukiContext):
    key = (ctx.q, ctx.field.modulus)
    hit = _BRUTEFORCE_CACHE.get(key)
    if hit is not None:
        return hit
    f = ctx.field
    q = ctx.q
    mul = np.zeros((q, q), dtype=np.uint8)
    frob = np.zeros(q, dtype=np.uint8)
    for a in range(q):
        frob[a] = f.frobenius_t(a)
        for b in range(q):
            mul[a, b] = f.mul(a, b)

    n = q ** 4
    idx = np.arange(n)
    vecs = np.stack(
        [(idx // q ** 3) % q, (idx // q ** 2) % q, (idx // q) % q, idx % q],
        axis=1,
    ).astype(np.uint8)

    # all perpendicular ordered pairs, via the full n x n form table
    gram = np.zeros((n, n), dtype=np.uint8)
    for i in range(4):
        gram ^= mul[vecs[:, i][:, None], vecs[:, 3 - i][None, :]]
    ui, vi = np.nonzero(gram == 0)
    _BRUTEFORCE_CACHE[key] = (mul, frob, vecs, ui, vi)
    return _BRUTEFORCE_CACHE[key]


def is_suzuki_bruteforce(ctx: SuzukiContext, g: Mat4) -> bool:
    """Oracle: check the product condition on every perpendicular pair.

    No projective reduction and no prefilter; ~q^7 pairs, so this is only
    viable at q = 8.  Vectorised with numpy but structurally independent
    of the reduced sweep.
    """
    if ctx.q > 8:
        raise ValueError("brute-force membership is ~q^7 pairs; q = 8 only")
    f = ctx.field
    if not is_symplectic(f, g):
        return False
    mul, frob, vecs, ui, vi = _bruteforce_tables(ctx)

    gm = np.array(g, dtype=np.uint8).reshape(4, 4)

    def apply_g(w):
        cols = []
        for i in range(4):
            acc = np.zeros(len(w), dtype=np.uint8)
            for j in range(4):
                if gm[i, j]:
                    acc ^= mul[gm[i, j], w[:, j]]
            cols.append(acc)
        return np.stack(cols, axis=1)

    def bullet_np(a, b):
        at = frob[a]
        bt = frob[b]
        return np.stack(
            [
                mul[at[:, 1], bt[:, 3]] ^ mul[at[:, 3], bt[:, 1]],
                mul[at[:, 0], bt[:, 1]] ^ mul[at[:, 1], bt[:, 0]],
                mul[at[:, 2], bt[:, 3]] ^ mul[at[:, 3], bt[:, 2]],
                mul[at[:, 0], bt[:, 2]] ^ mul[at[:, 2], bt[:, 0]],
            ],
            axis=1,
        )

    chunk = 1 << 16
    for lo in range(0, len(ui), chunk):
        u = vecs[ui[lo:lo + chunk]]
        v = vecs[vi[lo:lo + chunk]]
        lhs = bullet_np(apply_g(u), apply_g(v))
        rhs = apply_g(bullet_np(u, v))
        if not np.array_equal(lhs, rhs):
            return False
    return True


def symplectic_transvection(f: BinaryField, u: Vec4, lam: int) -> Mat4:
    """The map v -> v + lam f(v, u) u, as a matrix: I + lam u (iota u)^T."""
    out = list(identity())
    for i in range(4):
        for j in range(4):
            out[4 * i + j] ^= f.mul(lam, f.mul(u[i], u[3 - j]))
    return tuple(out)


def e1_transvection(ctx: SuzukiContext) -> Mat4:
    """I + E_14: symplectic, but outside Sz(q)."""
    return symplectic_transvection(ctx.field, basis_vec(0), 1)


def random_symplectic(ctx: SuzukiContext, rng, length: int = 8) -> Mat4:
    """Product of random symplectic transvections."""
    f = ctx.field
    g = identity()
    for _ in range(length):
        u = ZERO_VEC
        while u == ZERO_VEC:
            u = tuple(rng.randrange(ctx.q) for _ in range(4))
        lam = rng.randrange(1, ctx.q)
        g = mat_mul(f, g, symplectic_transvection(f, u, lam))
    return g
