"""Exhaustive group machinery over 4x4 matrices.

Breadth-first closure with canonical dedup, the Sz(q) construction,
conjugation orbits with transversals, element orders, derived series,
and a plain-text group cache.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import kernels as kn
from . import linalg4 as la
from .context import SuzukiContext
from .errors import (BudgetExceededError, DepthLimitError, SzVerifyError,
                     VerificationError)
from .linalg4 import Mat4
from .wilson import is_suzuki

CACHE_MAGIC = "SZQ"


@dataclass(frozen=True, eq=False)
class GroupSet:
    """An enumerated matrix group.

    ``entries`` holds all elements as (n, 16) uint8 in canonical
    (row-major lexicographic) order; ``_kv`` is the matching sorted key
    array used for O(log n) membership.  Both are immutable by
    convention.
    """

    ctx: SuzukiContext
    entries: np.ndarray
    generators: Tuple[Mat4, ...]
    _kv: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self._kv is None:
            rows = kn.pack_rows(self.ctx, self.entries)
            kv = np.sort(kn.void_keys(*kn.keys_from_rows(self.ctx, rows)))
            object.__setattr__(self, "_kv", kv)
        if len(self._kv) > 1 and (self._kv[1:] == self._kv[:-1]).any():
            raise VerificationError("group contains duplicate elements")
        if la.identity() not in self:
            raise VerificationError("group does not contain the identity")

    @property
    def order(self) -> int:
        return int(self.entries.shape[0])

    def __len__(self) -> int:
        return self.order

    def __contains__(self, mat: Mat4) -> bool:
        rows = kn.pack_rows(self.ctx, kn.mats_to_entries([mat]))
        key = kn.void_keys(*kn.keys_from_rows(self.ctx, rows))
        pos = int(np.searchsorted(self._kv, key[0]))
        return pos < len(self._kv) and self._kv[pos] == key[0]

    def __iter__(self) -> Iterator[Mat4]:
        for row in self.entries:
            yield kn.entries_to_mat(row)

    def element(self, i: int) -> Mat4:
        return kn.entries_to_mat(self.entries[i])

    def sample(self, k: int, seed: int = 0) -> List[Mat4]:
        rng = np.random.default_rng(seed)
        idx = rng.choice(self.order, size=min(k, self.order), replace=False)
        return [self.element(int(i)) for i in sorted(idx)]

    def divides(self, ambient_order: int) -> bool:
        return ambient_order % self.order == 0


def _dedup_generators(ctx: SuzukiContext, generators: Sequence[Mat4]) -> List[Mat4]:
    out: List[Mat4] = []
    for g in generators:
        g = tuple(int(v) for v in g)
        la.invert(ctx.field, g)
        if g not in out:
            out.append(g)
    return out


def closure(ctx: SuzukiContext, generators: Sequence[Mat4], ceiling: int,
            jobs: int = 1) -> GroupSet:
    """Breadth-first product closure of the generators.

    Deterministic: the result depends only on the generator set, never
    on ``jobs`` or scheduling.  Raises BudgetExceededError as soon as
    the element count would pass ``ceiling``.
    """
    if ceiling < 1:
        raise ValueError("ceiling must be >= 1")
    gens = _dedup_generators(ctx, generators)
    jobs = max(1, int(jobs))
    tables = [kn.row_action_table(ctx, g) for g in gens]

    ident_rows = kn.pack_rows(ctx, kn.mats_to_entries([la.identity()]))
    seen_kv = np.sort(kn.void_keys(*kn.keys_from_rows(ctx, ident_rows)))
    frontier = ident_rows
    pool = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 and tables else None
    try:
        while frontier.shape[0] and tables:
            chunks = np.array_split(frontier, jobs) if jobs > 1 else [frontier]
            chunks = [c for c in chunks if c.shape[0]]
            if pool is not None:
                parts = list(pool.map(
                    lambda c: [t[c] for t in tables], chunks))
            else:
                parts = [[t[c] for t in tables] for c in chunks]
            cand = np.concatenate([p for part in parts for p in part], axis=0)
            ckv = np.unique(kn.void_keys(*kn.keys_from_rows(ctx, cand)))
            pos = np.searchsorted(seen_kv, ckv)
            pos_c = np.minimum(pos, len(seen_kv) - 1)
            fresh = seen_kv[pos_c] != ckv
            new_kv = ckv[fresh]
            if len(seen_kv) + len(new_kv) > ceiling:
                raise BudgetExceededError(len(seen_kv) + len(new_kv), ceiling)
            if not len(new_kv):
                break
            seen_kv = np.unique(np.concatenate([seen_kv, new_kv]))
            frontier = kn.rows_from_keys(ctx, *kn.keys_from_void(new_kv))
    finally:
        if pool is not None:
            pool.shutdown(wait=False)

    rows = kn.rows_from_keys(ctx, *kn.keys_from_void(seen_kv))
    ents = kn.unpack_rows(ctx, rows)[kn.canonical_order(rows)]
    return GroupSet(ctx=ctx, entries=ents,
                    generators=tuple(gens) or (la.identity(),), _kv=seen_kv)


def build_suzuki(ctx: SuzukiContext, ceiling: Optional[int] = None,
                 jobs: int = 1) -> GroupSet:
    """Enumerate all of Sz(q) for q in {8, 32}.

    Filters the q^4 flag-unitriangular symplectic candidates down to the
    q^2-element Sylow 2-subgroup, then closes a small generating subset
    together with iota, escalating the subset if the closure comes back
    proper.  Asserts the final order against q^2(q^2+1)(q-1).
    """
    if ctx.q not in (8, 32):
        raise SzVerifyError(
            f"full enumeration refused at q={ctx.q}: order {ctx.group_order}")
    expected = ctx.group_order
    if ceiling is None:
        ceiling = expected

    cand = kn.sylow_candidates(ctx)
    keep = kn.suzuki_mask(ctx, cand)
    sylow_ents = cand[keep]
    if sylow_ents.shape[0] != ctx.sylow_order:
        raise VerificationError(
            f"Sylow filter yielded {sylow_ents.shape[0]} elements, "
            f"expected q^2 = {ctx.sylow_order}: field or product-table bug")
    order_idx = kn.canonical_order(kn.pack_rows(ctx, sylow_ents))
    sylow = [kn.entries_to_mat(sylow_ents[i]) for i in order_idx]

    iota = tuple(ctx.iota)
    if not is_suzuki(ctx, iota):
        raise VerificationError("iota failed the membership test")

    nontrivial = [s for s in sylow if s != la.identity()]
    take = 2
    while True:
        seeds = nontrivial[:take] + [iota]
        group = closure(ctx, seeds, ceiling, jobs=jobs)
        if group.order == expected:
            break
        if take >= len(nontrivial):
            raise VerificationError(
                f"closure stalled at order {group.order}, expected {expected}")
        take += 1

    missing = int((~kn.suzuki_mask(ctx, kn.mats_to_entries(sylow))).sum())
    if missing:
        raise VerificationError("a filtered Sylow element failed membership")
    for s in sylow:
        if s not in group:
            raise VerificationError("Sylow element missing from the closure")
    return group


def conjugation_orbit(ctx: SuzukiContext, seed: Mat4,
                      group: GroupSet) -> Dict[Mat4, Mat4]:
    """Orbit of ``seed`` under conjugation by the group generators.

    Returns {y: h} with h^-1 . seed . h = y for every orbit element y,
    so h conjugates the seed onto y (the transversal).
    """
    if seed not in group:
        raise ValueError("seed is not an element of the group")
    f = ctx.field
    inv_gens = [(g, la.invert(f, g)) for g in group.generators]
    transversal: Dict[Mat4, Mat4] = {seed: la.identity()}
    frontier = [seed]
    while frontier:
        nxt: List[Mat4] = []
        for y in frontier:
            h = transversal[y]
            for g, g_inv in inv_gens:
                y2 = la.mat_mul(f, g_inv, la.mat_mul(f, y, g))
                if y2 not in transversal:
                    transversal[y2] = la.mat_mul(f, h, g)
                    nxt.append(y2)
        frontier = nxt
    return transversal


def element_order(ctx: SuzukiContext, g: Mat4, cap: int = 1 << 20) -> int:
    """Least k >= 1 with g^k = I."""
    f = ctx.field
    la.invert(f, g)
    ident = la.identity()
    p = g
    k = 1
    while p != ident:
        p = la.mat_mul(f, p, g)
        k += 1
        if k > cap:
            raise SzVerifyError(f"element order exceeds cap {cap}")
    return k


def _commutator(f, a: Mat4, b: Mat4) -> Mat4:
    ab = la.mat_mul(f, a, b)
    ba = la.mat_mul(f, b, a)
    return la.mat_mul(f, la.invert(f, ba), ab)


def derived_subgroup(ctx: SuzukiContext, group: GroupSet,
                     jobs: int = 1) -> GroupSet:
    """Normal closure of the commutators of the group's generators.

    Subgroup closure of generator commutators need not be normal, so
    conjugates of its generators are folded in until it stabilises;
    the fixed point is the derived subgroup.
    """
    f = ctx.field
    gens = group.generators
    comms = _dedup_generators(ctx, [
        c for c in (_commutator(f, a, b)
                    for a, b in itertools.product(gens, gens))
        if c != la.identity()])
    if not comms:
        return closure(ctx, [], 1)
    sub = closure(ctx, comms, group.order, jobs=jobs)
    while True:
        extra = []
        for g in gens:
            g_inv = la.invert(f, g)
            for d in sub.generators:
                c = la.mat_mul(f, g_inv, la.mat_mul(f, d, g))
                if c not in sub:
                    extra.append(c)
        if not extra:
            return sub
        sub = closure(ctx, list(sub.generators) + extra, group.order,
                      jobs=jobs)


def derived_series(ctx: SuzukiContext, group: GroupSet, depth_limit: int = 8,
                   jobs: int = 1) -> List[GroupSet]:
    """The derived series until trivial or stabilised.

    Raises DepthLimitError if neither happens within ``depth_limit``
    steps; a stabilised nontrivial (perfect) tail terminates normally.
    """
    series = [group]
    if group.order == 1:
        return series
    for _ in range(depth_limit):
        nxt = derived_subgroup(ctx, series[-1], jobs=jobs)
        series.append(nxt)
        if nxt.order == 1 or nxt.order == series[-2].order:
            return series
    raise DepthLimitError(
        f"derived series did not settle within {depth_limit} steps "
        f"(orders {[g.order for g in series]})")


def derived_series_solvable(ctx: SuzukiContext, group: GroupSet,
                            depth_limit: int = 8, jobs: int = 1) -> bool:
    """True iff the derived series reaches the trivial group."""
    return derived_series(ctx, group, depth_limit, jobs=jobs)[-1].order == 1


def _gens_path(path: Path) -> Path:
    return path.with_suffix(path.suffix + ".gens")


def involutions(group: GroupSet) -> List[Mat4]:
    """All elements of order exactly 2, canonically sorted."""
    mask = kn.involution_mask(group.ctx, group.entries)
    return [kn.entries_to_mat(row) for row in group.entries[mask]]


def save_group(group: GroupSet, path) -> None:
    """Write ``SZQ <q> <order>`` then one hex matrix per line.

    A sidecar ``<path>.gens`` keeps the generating set so a reloaded
    group supports orbit computations.
    """
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{CACHE_MAGIC} {group.ctx.q} {group.order}\n")
        for row in group.entries:
            fh.write(" ".join(format(int(v), "x") for v in row) + "\n")
    with _gens_path(path).open("w") as fh:
        fh.write(f"{CACHE_MAGIC}-GENS {group.ctx.q} {len(group.generators)}\n")
        for g in group.generators:
            fh.write(la.mat_to_hex(g) + "\n")


def load_group(ctx: SuzukiContext, path, spot_checks: int = 100) -> GroupSet:
    """Reload a cached group, re-verifying order and sampled membership."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != CACHE_MAGIC:
            raise SzVerifyError(f"bad cache header in {path}")
        q, order = int(header[1]), int(header[2])
        if q != ctx.q:
            raise SzVerifyError(f"cache is for q={q}, context has q={ctx.q}")
        ents = np.empty((order, 16), dtype=np.uint8)
        for i in range(order):
            parts = fh.readline().split()
            if len(parts) != 16:
                raise SzVerifyError(f"cache truncated at line {i + 2}")
            ents[i] = [int(p, 16) for p in parts]
        if fh.readline():
            raise SzVerifyError("cache has trailing data")
    if (ents >= ctx.q).any():
        raise SzVerifyError("cache entry out of field range")
    rows = kn.pack_rows(ctx, ents)
    ents = ents[kn.canonical_order(rows)]
    gens: Tuple[Mat4, ...] = (la.identity(),)
    gpath = _gens_path(path)
    if gpath.is_file():
        with gpath.open() as fh:
            ghead = fh.readline().split()
            if len(ghead) != 3 or ghead[0] != f"{CACHE_MAGIC}-GENS":
                raise SzVerifyError(f"bad generator sidecar header in {gpath}")
            gens = tuple(la.mat_from_hex(fh.readline().strip())
                         for _ in range(int(ghead[2])))
    group = GroupSet(ctx=ctx, entries=ents, generators=gens)
    if group.order != order:
        raise SzVerifyError("cache contains duplicate elements")
    for g in gens:
        if g not in group:
            raise SzVerifyError("sidecar generator not in the cached group")
    rng = np.random.default_rng(0)
    for i in rng.choice(order, size=min(spot_checks, order), replace=False):
        if not is_suzuki(ctx, group.element(int(i))):
            raise SzVerifyError("cached element failed the membership test")
    return group


def get_group(ctx: SuzukiContext, cache_dir=None, jobs: int = 1,
              ceiling: Optional[int] = None) -> GroupSet:
    """Cached build: load from ``cache_dir`` if present, else build and save."""
    if cache_dir is None:
        return build_suzuki(ctx, ceiling=ceiling, jobs=jobs)
    cache = Path(cache_dir) / f"sz{ctx.q}.grp"
    if cache.is_file():
        return load_group(ctx, cache)
    group = build_suzuki(ctx, ceiling=ceiling, jobs=jobs)
    cache.parent.mkdir(parents=True, exist_ok=True)
    save_group(group, cache)
    return group
