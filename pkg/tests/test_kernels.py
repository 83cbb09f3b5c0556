import random

import numpy as np

from szverify import fixed_set as fs
from szverify import kernels as kn
from szverify import linalg4 as la
from szverify import wilson as wl


def rand_mats(rng, n):
    return [tuple(rng.randrange(8) for _ in range(16)) for _ in range(n)]


def test_entries_round_trip(ctx8):
    rng = random.Random(31)
    mats = rand_mats(rng, 50)
    ents = kn.mats_to_entries(mats)
    assert ents.shape == (50, 16)
    for i, m in enumerate(mats):
        assert kn.entries_to_mat(ents[i]) == m


def test_pack_unpack_round_trip(ctx8):
    rng = random.Random(32)
    ents = kn.mats_to_entries(rand_mats(rng, 200))
    rows = kn.pack_rows(ctx8, ents)
    assert rows.shape == (200, 4)
    assert np.array_equal(kn.unpack_rows(ctx8, rows), ents)


def test_key_round_trip(ctx8):
    rng = random.Random(33)
    ents = kn.mats_to_entries(rand_mats(rng, 200))
    rows = kn.pack_rows(ctx8, ents)
    hi, lo = kn.keys_from_rows(ctx8, rows)
    back = kn.rows_from_keys(ctx8, hi, lo)
    assert np.array_equal(back, rows)
    kv = kn.void_keys(hi, lo)
    h2, l2 = kn.keys_from_void(kv)
    assert np.array_equal(h2, hi) and np.array_equal(l2, lo)


def test_void_keys_dedup_matches_tuples(ctx8):
    rng = random.Random(34)
    mats = rand_mats(rng, 100) * 3
    ents = kn.mats_to_entries(mats)
    kv = kn.void_keys(*kn.keys_from_rows(ctx8, kn.pack_rows(ctx8, ents)))
    assert len(np.unique(kv)) == len(set(mats))


def test_canonical_order_is_lex(ctx8):
    rng = random.Random(35)
    mats = rand_mats(rng, 80)
    ents = kn.mats_to_entries(mats)
    rows = kn.pack_rows(ctx8, ents)
    order = kn.canonical_order(rows)
    sorted_mats = [kn.entries_to_mat(ents[i]) for i in order]
    assert sorted_mats == sorted(mats)


def test_row_action_table_matches_vec_mat(ctx8):
    rng = random.Random(36)
    g = wl.random_symplectic(ctx8, rng)
    table = kn.row_action_table(ctx8, g)
    assert table.shape == (8 ** 4,)
    for _ in range(50):
        v = tuple(rng.randrange(8) for _ in range(4))
        packed = kn.pack_rows(ctx8, np.array(v + (0,) * 12,
                                             dtype=np.uint8))[0, 0]
        want = la.vec_mat(ctx8.field, v, g)
        row4 = np.array([[table[packed], 0, 0, 0]], dtype=np.uint32)
        got = kn.unpack_rows(ctx8, row4)[0][:4]
        assert tuple(int(x) for x in got) == want


def test_batch_matmul_matches_scalar(ctx8):
    rng = random.Random(37)
    a = rand_mats(rng, 30)
    b = rand_mats(rng, 30)
    out = kn.batch_matmul(ctx8, kn.mats_to_entries(a), kn.mats_to_entries(b))
    for i in range(30):
        assert kn.entries_to_mat(out[i]) == la.mat_mul(ctx8.field, a[i], b[i])


def test_batch_left_mul_matches_scalar(ctx8):
    rng = random.Random(38)
    h = wl.random_symplectic(ctx8, rng)
    b = rand_mats(rng, 30)
    out = kn.batch_left_mul(ctx8, h, kn.mats_to_entries(b))
    for i in range(30):
        assert kn.entries_to_mat(out[i]) == la.mat_mul(ctx8.field, h, b[i])


def test_symplectic_mask_matches_scalar(ctx8):
    rng = random.Random(39)
    mats = rand_mats(rng, 100) + [la.identity(), ctx8.iota,
                                  wl.e1_transvection(ctx8)]
    mask = kn.symplectic_mask(ctx8, kn.mats_to_entries(mats))
    for i, m in enumerate(mats):
        assert bool(mask[i]) == la.is_symplectic(ctx8.field, m)


def test_involution_mask(ctx8):
    mats = [la.identity(), ctx8.iota, fs.torus_element(ctx8, 3)]
    mask = kn.involution_mask(ctx8, kn.mats_to_entries(mats))
    assert list(mask) == [False, True, False]


def test_fixed_point_mask_matches_definition(ctx8):
    f = ctx8.field
    mats = [la.identity(), ctx8.iota, fs.torus_element(ctx8, 5),
            wl.e1_transvection(ctx8)]
    mask = kn.fixed_point_mask(ctx8, kn.mats_to_entries(mats))
    for i, m in enumerate(mats):
        want = la.mat_mul(f, la.mat_mul(f, m, ctx8.iota), m) == ctx8.iota
        assert bool(mask[i]) == want


def test_suzuki_mask_matches_scalar_predicate(ctx8):
    rng = random.Random(40)
    mats = [la.identity(), ctx8.iota, wl.e1_transvection(ctx8)]
    mats += [fs.torus_element(ctx8, a) for a in range(1, 8)]
    mats += [wl.random_symplectic(ctx8, random.Random(4000 + k))
             for k in range(40)]
    mask = kn.suzuki_mask(ctx8, kn.mats_to_entries(mats))
    for i, m in enumerate(mats):
        assert bool(mask[i]) == wl.is_suzuki(ctx8, m)


def test_sweep_pairs_layout(ctx8):
    us, vs, ws = kn.sweep_pairs(ctx8)
    n_reps = (8 ** 4 - 1) // 7
    # 8 basis prefilter pairs, then 3 perp-basis vectors per rep
    assert len(us) == 8 + 3 * n_reps
    assert len(vs) == len(us) == len(ws)
    f = ctx8.field
    for k in range(0, len(us), 97):
        u = tuple(int(x) for x in us[k])
        v = tuple(int(x) for x in vs[k])
        assert la.form_f(f, u, v) == 0
        assert wl.bullet(ctx8, u, v) == tuple(int(x) for x in ws[k])


def test_sylow_candidates_filter(ctx8):
    """The flag-adapted family contains exactly q^2 = 64 group elements,
    all of them symplectic by construction."""
    cand = kn.sylow_candidates(ctx8)
    assert len(cand) == 8 ** 4
    assert bool(kn.symplectic_mask(ctx8, cand).all())
    kept = kn.suzuki_mask(ctx8, cand)
    assert int(kept.sum()) == 64


def test_unitriangular_filter_is_degenerate(ctx8):
    """Lower-unitriangular matrices meeting the membership test: only the
    q central-looking ones, far short of a Sylow subgroup.  Kept as a
    frozen fact; the Sylow family above is the usable one."""
    cand = kn.unitriangular_candidates(ctx8)
    kept = kn.suzuki_mask(ctx8, cand)
    assert int(kept.sum()) == 8


def test_sylow32_candidates_shape(ctx32):
    cand = kn.sylow_candidates(ctx32)
    assert len(cand) == 32 ** 4
    assert bool(kn.symplectic_mask(ctx32, cand).all())
