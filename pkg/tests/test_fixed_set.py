import random

import pytest

from szverify import fixed_set as fs
from szverify import groups as gr
from szverify import linalg4 as la
from szverify import wilson as wl
from szverify.errors import SingularMatrixError

# Satisfaction counts over the 456 scanned fixed-set members at q = 8,
# frozen from the first full census run.  The sound equations hold
# everywhere; the eight from non-perpendicular pairs do not.
FROZEN_COUNTS = {
    "S1": 456, "S2": 456, "S3": 456, "S4": 456, "S5": 456,
    "S6": 456, "S7": 456, "S8": 456, "S9": 456, "S10": 456,
    "S11": 113, "S12": 64, "S13": 64, "S14": 113,
    "S15": 113, "S16": 64, "S17": 64, "S18": 113,
    "P14": 456, "P23": 456,
}


def test_torus_element_shape(ctx8):
    f = ctx8.field
    for a in range(1, 8):
        m = fs.torus_element(ctx8, a)
        assert m == la.diag(a, f.pow(a, 2 * ctx8.t + 1),
                            f.pow(a, -(2 * ctx8.t + 1)), f.inv(a))
        assert la.is_symplectic(f, m)
        assert wl.is_suzuki(ctx8, m)
    with pytest.raises(ValueError):
        fs.torus_element(ctx8, 0)
    with pytest.raises(ValueError):
        fs.torus_element(ctx8, 8)


def test_torus_is_cyclic_of_order_q_minus_1(ctx8):
    els = fs.torus_elements(ctx8)
    assert len(els) == 7
    assert len(set(els)) == 7
    g = gr.closure(ctx8, [fs.torus_element(ctx8, 2)], ceiling=100)
    assert g.order == 7


def test_closed_form_members(ctx8, group8):
    closed = fs.closed_form_X(ctx8)
    assert len(closed) == 8
    assert ctx8.iota in closed
    for x in closed:
        assert x in group8
        assert fs.in_fixed_set(ctx8, x)
        assert la.transpose(x) == x


def test_scan_size_is_involution_count_plus_one(ctx8, group8):
    scan = fs.brute_force_X(ctx8, group8)
    assert len(scan) == fs.expected_scan_size(ctx8) == 456
    invs = gr.involutions(group8)
    assert len(scan) == len(invs) + 1


def test_scan_is_involutions_times_iota(ctx8, group8):
    """w -> w . iota maps {involutions} union {I} bijectively onto the
    scan set: x iota x = iota iff (x iota)^2 = I."""
    f = ctx8.field
    scan = set(fs.brute_force_X(ctx8, group8))
    image = {la.mat_mul(f, w, ctx8.iota) for w in gr.involutions(group8)}
    image.add(ctx8.iota)  # w = I
    assert image == scan


def test_every_scan_member_symmetric(ctx8, group8):
    for x in fs.brute_force_X(ctx8, group8):
        assert fs.symmetry_lemma_check(ctx8, x)


def test_symmetry_lemma_preconditions(ctx8):
    with pytest.raises(ValueError):
        fs.symmetry_lemma_check(ctx8, la.diag(1, 1, 1, 3))  # not symplectic
    with pytest.raises(ValueError):
        # symplectic but (x iota)^2 != I
        fs.symmetry_lemma_check(ctx8, wl.e1_transvection(ctx8))


def test_fixed_set_result_is_unequal(ctx8, group8):
    """The scan strictly contains the closed form: 456 vs 8 matrices."""
    res = fs.fixed_set_result(ctx8, group8)
    assert len(res.closed_form) == 8
    assert len(res.brute_force) == 456
    assert not res.equal
    assert set(res.closed_form) < set(res.brute_force)


def test_equation_count_and_labels():
    assert len(fs.EQUATIONS) == 20
    labels = [eq.label for eq in fs.EQUATIONS]
    assert labels == [f"S{i}" for i in range(1, 19)] + ["P14", "P23"]
    assert len(set(labels)) == 20


def test_duplicate_coords_cover_perp_pairs():
    """4 perpendicular pairs x 4 coordinates = 16 slots: 10 distinct
    equations plus 6 coordinate repeats."""
    seen = {(eq.origin.i, eq.origin.j, eq.origin.coord)
            for eq in fs.EQUATIONS
            if eq.origin.kind == "product" and eq.origin.perpendicular}
    dup = set(fs.DUPLICATE_COORDS)
    assert not seen & dup
    for i, j in fs.PERP_PRODUCT_PAIRS:
        for coord in range(4):
            assert (i, j, coord) in seen or (i, j, coord) in dup
    labels = {eq.label for eq in fs.EQUATIONS}
    assert set(fs.DUPLICATE_COORDS.values()) <= labels


def test_nonperp_equations_cover_both_pairs():
    got = [(eq.origin.i, eq.origin.j, eq.origin.coord)
           for eq in fs.EQUATIONS if not eq.origin.perpendicular]
    want = [(i, j, c) for i, j in fs.NONPERP_PRODUCT_PAIRS for c in range(4)]
    assert got == want


def test_census_frozen_counts(ctx8, group8):
    census = fs.equation_census(ctx8, group8)
    assert census.total == 456
    assert census.per_label == FROZEN_COUNTS
    assert census.closed_form_satisfied
    assert len(census.full_solutions) == 8
    assert census.solutions_match_closed_form


def test_equation_residual_correspondence(ctx8, group8):
    """Each product equation is the stated coordinate of the product
    residual g(ei) . g(ej) + g(ei . ej), checked on scan members (all
    symmetric, so row and column action agree)."""
    f = ctx8.field
    scan = fs.brute_force_X(ctx8, group8)
    for x in scan[::11]:
        rep = fs.eval_equation_system(ctx8, x)
        for eq in fs.EQUATIONS:
            if eq.origin.kind != "product":
                continue
            i, j, coord = eq.origin.i, eq.origin.j, eq.origin.coord
            u, v = la.basis_vec(i), la.basis_vec(j)
            gu, gv = la.mat_vec(f, x, u), la.mat_vec(f, x, v)
            resid = la.vec_add(wl.bullet(ctx8, gu, gv),
                               la.mat_vec(f, x, wl.bullet(ctx8, u, v)))
            if eq.origin.perpendicular:
                assert resid == wl.wilson_residual(ctx8, x, u, v)
            assert rep.record(eq.label).satisfied == (resid[coord] == 0)


def test_sound_equations_hold_on_iota_conjugates(ctx8, group8):
    """The 10 twisted and 2 Gram equations hold on every scan member,
    not only the closed form; spot-checked off the torus."""
    scan = fs.brute_force_X(ctx8, group8)
    off_closed = [x for x in scan if x not in set(fs.closed_form_X(ctx8))]
    sound = [f"S{i}" for i in range(1, 11)] + ["P14", "P23"]
    for x in off_closed[::29]:
        rep = fs.eval_equation_system(ctx8, x)
        for lab in sound:
            assert rep.record(lab).satisfied


def test_perturbed_identity_failing_labels(ctx8):
    """I with a14 = a41 = 1 is symmetric but fails exactly S1, S5, S6
    and the Gram equation P14 (frozen)."""
    x = list(la.identity())
    x[3] = x[12] = 1
    rep = fs.eval_equation_system(ctx8, tuple(x))
    fails = [r.label for r in rep.records if not r.satisfied]
    assert fails == ["S1", "S5", "S6", "P14"]


def test_eval_rejects_asymmetric(ctx8):
    x = list(la.identity())
    x[3] = 1  # a14 set, a41 not
    with pytest.raises(ValueError):
        fs.eval_equation_system(ctx8, tuple(x))


def test_equation_report_json(ctx8):
    rep = fs.eval_equation_system(ctx8, ctx8.iota)
    d = rep.to_json_dict()
    assert d["schema"] == "szverify-equations v1"
    assert d["all_satisfied"]
    assert len(d["equations"]) == 20
    assert list(d)[0] == "schema"


def test_proportional_rows_contradiction(ctx8):
    """A symmetric matrix with a24 != 0 whose second row is a multiple of
    the first is singular, so no invertible solution exists on that
    branch: the case split in the closed-form derivation."""
    f = ctx8.field
    for c in (1, 3, 7):
        a11, a13, a33, a34, a44 = 2, 5, 6, 4, 1
        a14 = 1
        a12 = f.mul(c, a11)
        a22 = f.mul(c, a12)
        a23 = f.mul(c, a13)
        a24 = f.mul(c, a14)
        assert a24 != 0
        x = (a11, a12, a13, a14,
             a12, a22, a23, a24,
             a13, a23, a33, a34,
             a14, a24, a34, a44)
        assert la.transpose(x) == x
        with pytest.raises(SingularMatrixError):
            la.invert(f, x)


def test_bivector_sum_invariant(ctx8):
    """bullet(g e1, g e4) + bullet(g e2, g e3) = 0 for every symplectic
    g, member or not: the two non-perpendicular pair products are never
    independent."""
    f = ctx8.field
    e = [la.basis_vec(i) for i in range(4)]
    for k in range(100):
        g = wl.random_symplectic(ctx8, random.Random(500 + k))
        s = la.vec_add(
            wl.bullet(ctx8, la.mat_vec(f, g, e[0]), la.mat_vec(f, g, e[3])),
            wl.bullet(ctx8, la.mat_vec(f, g, e[1]), la.mat_vec(f, g, e[2])))
        assert s == (0, 0, 0, 0)


def test_nonperp_preservers_are_dihedral(ctx8, group8):
    """Exactly 14 group elements kill bullet(g e1, g e4): the torus
    together with its iota coset, i.e. the dihedral subgroup in which
    the closed form lives.  Same 14 for the (e2, e3) product."""
    f = ctx8.field
    e = [la.basis_vec(i) for i in range(4)]
    dih = gr.closure(ctx8, [fs.torus_element(ctx8, 2), ctx8.iota],
                     ceiling=100)
    n14 = []
    n23 = []
    for m in group8:
        if wl.bullet(ctx8, la.mat_vec(f, m, e[0]),
                     la.mat_vec(f, m, e[3])) == (0, 0, 0, 0):
            n14.append(m)
        if wl.bullet(ctx8, la.mat_vec(f, m, e[1]),
                     la.mat_vec(f, m, e[2])) == (0, 0, 0, 0):
            n23.append(m)
    assert len(n14) == len(n23) == 14
    assert n14 == n23
    assert all(m in dih for m in n14)
