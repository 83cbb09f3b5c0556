"""Vectorised batch operations on packed 4x4 matrices.

The closure and sweep engines work on numpy arrays rather than tuples.
Two layouts are used:

* entries: (n, 16) uint8, row-major field elements, same order as Mat4;
* packed rows: (n, 4) uint32, each row's four entries concatenated
  big-endian with b = field degree bits per entry, so packed values run
  over exactly [0, q^4) and numeric order equals entrywise lexicographic
  order.

The packed form keys a whole-group dedup (two uint64 per matrix) and
makes right multiplication by a fixed matrix a single table gather:
row * g depends only on the row, so a precomputed table of length q^4
maps packed row to packed row.

All tables are uint8-indexed, which caps the batch layer at field degree
7; group enumeration is only supported through q = 32 anyway.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .context import SuzukiContext
from .linalg4 import Mat4
from .wilson import PERP_BASIS_PAIRS, bullet, perp_basis, projective_reps

_SWEEP_COMPACT_EVERY = 32


@lru_cache(maxsize=None)
def field_tables(ctx: SuzukiContext):
    """(mul, frob, inv) as numpy uint8 lookup tables."""
    f = ctx.field
    if f.degree > 7:
        raise ValueError(f"batch kernels need degree <= 7, got {f.degree}")
    q = ctx.q
    mul = np.zeros((q, q), dtype=np.uint8)
    frob = np.zeros(q, dtype=np.uint8)
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(q):
        frob[a] = f.frobenius_t(a)
        if a:
            inv[a] = f.inv(a)
        for b in range(q):
            mul[a, b] = f.mul(a, b)
    return mul, frob, inv


def mats_to_entries(mats) -> np.ndarray:
    return np.array(mats, dtype=np.uint8).reshape(-1, 16)


def entries_to_mat(row: np.ndarray) -> Mat4:
    return tuple(int(x) for x in row)


def pack_rows(ctx: SuzukiContext, ents: np.ndarray) -> np.ndarray:
    b = ctx.field.degree
    e = ents.astype(np.uint32).reshape(-1, 4, 4)
    return (e[:, :, 0] << (3 * b)) | (e[:, :, 1] << (2 * b)) \
        | (e[:, :, 2] << b) | e[:, :, 3]


def unpack_rows(ctx: SuzukiContext, rows: np.ndarray) -> np.ndarray:
    b = ctx.field.degree
    mask = np.uint32((1 << b) - 1)
    out = np.empty(rows.shape[:1] + (16,), dtype=np.uint8)
    for i in range(4):
        r = rows[:, i]
        out[:, 4 * i + 0] = (r >> (3 * b)) & mask
        out[:, 4 * i + 1] = (r >> (2 * b)) & mask
        out[:, 4 * i + 2] = (r >> b) & mask
        out[:, 4 * i + 3] = r & mask
    return out


def keys_from_rows(ctx: SuzukiContext, rows: np.ndarray):
    """Each matrix as (hi, lo) uint64: rows 0,1 and rows 2,3 concatenated."""
    b = 4 * ctx.field.degree
    r = rows.astype(np.uint64)
    hi = (r[:, 0] << np.uint64(b)) | r[:, 1]
    lo = (r[:, 2] << np.uint64(b)) | r[:, 3]
    return hi, lo


def void_keys(hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    """(hi, lo) pairs as opaque 16-byte records for sort/searchsorted."""
    pairs = np.ascontiguousarray(np.column_stack((hi, lo)))
    return pairs.view(np.dtype((np.void, 16))).reshape(-1)


def canonical_order(rows: np.ndarray) -> np.ndarray:
    """Argsort by entrywise lexicographic (= numeric packed-row) order."""
    return np.lexsort((rows[:, 3], rows[:, 2], rows[:, 1], rows[:, 0]))


def row_action_table(ctx: SuzukiContext, g: Mat4) -> np.ndarray:
    """table[r] = packed(unpacked(r) . g) over all q^4 packed rows."""
    mul, _, _ = field_tables(ctx)
    q = ctx.q
    b = ctx.field.degree
    mask = np.uint32((1 << b) - 1)
    r = np.arange(q ** 4, dtype=np.uint32)
    ent = [((r >> np.uint32((3 - i) * b)) & mask).astype(np.uint8)
           for i in range(4)]
    out = np.zeros(q ** 4, dtype=np.uint32)
    for j in range(4):
        acc = np.zeros(q ** 4, dtype=np.uint8)
        for i in range(4):
            gij = g[4 * i + j]
            if gij:
                acc ^= mul[ent[i], gij]
        out |= acc.astype(np.uint32) << np.uint32((3 - j) * b)
    return out


def batch_matmul(ctx: SuzukiContext, a: np.ndarray, b: np.ndarray,
                 chunk: int = 1 << 15) -> np.ndarray:
    """Entrywise-layout product of two (n, 16) batches."""
    mul, _, _ = field_tables(ctx)
    a4 = a.reshape(-1, 4, 4)
    b4 = b.reshape(-1, 4, 4)
    n = a4.shape[0]
    out = np.empty((n, 4, 4), dtype=np.uint8)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        prod = mul[a4[lo:hi, :, :, None], b4[lo:hi, None, :, :]]
        out[lo:hi] = np.bitwise_xor.reduce(prod, axis=2)
    return out.reshape(-1, 16)


def batch_left_mul(ctx: SuzukiContext, h: Mat4, ents: np.ndarray,
                   chunk: int = 1 << 16) -> np.ndarray:
    """h . x for a fixed h over an (n, 16) batch."""
    mul, _, _ = field_tables(ctx)
    h4 = np.array(h, dtype=np.uint8).reshape(4, 4)
    e4 = ents.reshape(-1, 4, 4)
    n = e4.shape[0]
    out = np.empty((n, 4, 4), dtype=np.uint8)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        prod = mul[h4[None, :, :, None], e4[lo:hi, None, :, :]]
        out[lo:hi] = np.bitwise_xor.reduce(prod, axis=2)
    return out.reshape(-1, 16)


def symplectic_mask(ctx: SuzukiContext, ents: np.ndarray) -> np.ndarray:
    """Which matrices satisfy x^T iota x == iota."""
    mul, _, _ = field_tables(ctx)
    x = ents.reshape(-1, 4, 4)
    ok = np.ones(x.shape[0], dtype=bool)
    for i in range(4):
        for j in range(i, 4):
            acc = np.zeros(x.shape[0], dtype=np.uint8)
            for k in range(4):
                acc ^= mul[x[:, k, i], x[:, 3 - k, j]]
            ok &= acc == (1 if i + j == 3 else 0)
    return ok


def fixed_point_mask(ctx: SuzukiContext, ents: np.ndarray) -> np.ndarray:
    """Which matrices satisfy x iota x == iota."""
    mul, _, _ = field_tables(ctx)
    x = ents.reshape(-1, 4, 4)
    ok = np.ones(x.shape[0], dtype=bool)
    for i in range(4):
        for j in range(4):
            acc = np.zeros(x.shape[0], dtype=np.uint8)
            for k in range(4):
                acc ^= mul[x[:, i, 3 - k], x[:, k, j]]
            ok &= acc == (1 if i + j == 3 else 0)
    return ok


def involution_mask(ctx: SuzukiContext, ents: np.ndarray) -> np.ndarray:
    """Which matrices square to the identity without being it."""
    sq = batch_matmul(ctx, ents, ents).reshape(-1, 4, 4)
    ident = np.eye(4, dtype=np.uint8)
    is_sq_id = np.all(sq == ident, axis=(1, 2))
    is_id = np.all(ents.reshape(-1, 4, 4) == ident, axis=(1, 2))
    return is_sq_id & ~is_id


@lru_cache(maxsize=None)
def sweep_pairs(ctx: SuzukiContext):
    """Pair data for the reduced membership sweep.

    Returns (U, V, W) uint8 arrays of shape (m, 4): projective
    representative, perpendicular-basis vector, and their product, with
    the eight pure basis pairs placed first so they act as a prefilter.
    """
    us, vs, ws = [], [], []
    from .linalg4 import basis_vec
    for i, j in PERP_BASIS_PAIRS:
        u, v = basis_vec(i), basis_vec(j)
        us.append(u)
        vs.append(v)
        ws.append(bullet(ctx, u, v))
    for u in projective_reps(ctx):
        for v in perp_basis(ctx, u):
            us.append(u)
            vs.append(v)
            ws.append(bullet(ctx, u, v))
    return (np.array(us, dtype=np.uint8),
            np.array(vs, dtype=np.uint8),
            np.array(ws, dtype=np.uint8))


def _apply_fixed_vec(mul, x, vec):
    """x . vec for an (n, 4, 4) batch and one fixed 4-vector."""
    n = x.shape[0]
    cols = []
    for i in range(4):
        acc = np.zeros(n, dtype=np.uint8)
        for j in range(4):
            if vec[j]:
                acc ^= mul[x[:, i, j], vec[j]]
        cols.append(acc)
    return cols


def suzuki_mask(ctx: SuzukiContext, ents: np.ndarray) -> np.ndarray:
    """Membership in Sz(q) for an (n, 16) batch, by the reduced sweep.

    Equivalent to wilson.is_suzuki applied elementwise.  Survivors are
    compacted periodically so late pairs only touch live candidates.
    """
    mul, frob, _ = field_tables(ctx)
    n = ents.shape[0]
    result = symplectic_mask(ctx, ents)
    alive = np.flatnonzero(result)
    x = ents.reshape(-1, 4, 4)[alive]
    U, V, W = sweep_pairs(ctx)
    pending = np.ones(len(alive), dtype=bool)
    for p in range(U.shape[0]):
        if not pending.any():
            break
        gu = frob[np.stack(_apply_fixed_vec(mul, x, U[p]), axis=1)]
        gv = frob[np.stack(_apply_fixed_vec(mul, x, V[p]), axis=1)]
        gw = _apply_fixed_vec(mul, x, W[p])
        ok = (mul[gu[:, 1], gv[:, 3]] ^ mul[gu[:, 3], gv[:, 1]]) == gw[0]
        ok &= (mul[gu[:, 0], gv[:, 1]] ^ mul[gu[:, 1], gv[:, 0]]) == gw[1]
        ok &= (mul[gu[:, 2], gv[:, 3]] ^ mul[gu[:, 3], gv[:, 2]]) == gw[2]
        ok &= (mul[gu[:, 0], gv[:, 2]] ^ mul[gu[:, 2], gv[:, 0]]) == gw[3]
        pending &= ok
        if p % _SWEEP_COMPACT_EVERY == _SWEEP_COMPACT_EVERY - 1:
            keep = np.flatnonzero(pending)
            if len(keep) < len(pending):
                x = x[keep]
                alive = alive[keep]
                pending = np.ones(len(keep), dtype=bool)
    result[:] = False
    result[alive[pending]] = True
    return result


def unitriangular_candidates(ctx: SuzukiContext) -> np.ndarray:
    """All q^4 symplectic lower unitriangular matrices, as entries.

    Four free subdiagonal entries; the other two are forced by the form:
    with rows (1,0,0,0), (a,1,0,0), (b,c,1,0), (d,e,f,1) preservation of
    iota forces e = b + a*c and f = a.
    """
    mul, _, _ = field_tables(ctx)
    q = ctx.q
    n = q ** 4
    idx = np.arange(n)
    a = (idx % q).astype(np.uint8)
    b = ((idx // q) % q).astype(np.uint8)
    c = ((idx // q ** 2) % q).astype(np.uint8)
    d = ((idx // q ** 3) % q).astype(np.uint8)
    ents = np.zeros((n, 16), dtype=np.uint8)
    ents[:, 0] = 1
    ents[:, 5] = 1
    ents[:, 10] = 1
    ents[:, 15] = 1
    ents[:, 4] = a
    ents[:, 8] = b
    ents[:, 9] = c
    ents[:, 12] = d
    ents[:, 13] = b ^ mul[a, c]
    ents[:, 14] = a
    return ents


def sylow_candidates(ctx: SuzukiContext) -> np.ndarray:
    """All q^4 symplectic matrices unitriangular on the (e2, e1, e3, e4) flag.

    Rows (1,p,0,0), (0,1,0,0), (c,d,1,e), (g,h,0,1); preservation of iota
    forces e = p and h = c + g*p.  Unlike the strictly lower unitriangular
    family, filtering this one by membership yields a full Sylow 2-subgroup
    of order q^2 rather than only its q-element centre.
    """
    mul, _, _ = field_tables(ctx)
    q = ctx.q
    n = q ** 4
    idx = np.arange(n)
    p = (idx % q).astype(np.uint8)
    c = ((idx // q) % q).astype(np.uint8)
    d = ((idx // q ** 2) % q).astype(np.uint8)
    g = ((idx // q ** 3) % q).astype(np.uint8)
    ents = np.zeros((n, 16), dtype=np.uint8)
    ents[:, 0] = 1
    ents[:, 5] = 1
    ents[:, 10] = 1
    ents[:, 15] = 1
    ents[:, 1] = p
    ents[:, 8] = c
    ents[:, 9] = d
    ents[:, 11] = p
    ents[:, 12] = g
    ents[:, 13] = c ^ mul[g, p]
    return ents


def rows_from_keys(ctx: SuzukiContext, hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    """Inverse of keys_from_rows."""
    b = np.uint64(4 * ctx.field.degree)
    mask = np.uint64((1 << int(b)) - 1)
    rows = np.empty((hi.shape[0], 4), dtype=np.uint32)
    rows[:, 0] = (hi >> b) & mask
    rows[:, 1] = hi & mask
    rows[:, 2] = (lo >> b) & mask
    rows[:, 3] = lo & mask
    return rows


def keys_from_void(kv: np.ndarray):
    """Inverse of void_keys: the (hi, lo) columns of a 16-byte record array."""
    pairs = kv.view(np.uint64).reshape(-1, 2)
    return pairs[:, 0], pairs[:, 1]
