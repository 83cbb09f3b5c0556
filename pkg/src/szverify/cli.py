"""Batch driver for the verification stages.

Subcommands: field-selftest, build-group, enumerate-x, check-equations,
involutions, search-rank4, verify-all.

Exit status: 0 when every executed check passes; 2 for usage errors;
3 when a checked claim is contradicted by the computation (a theorem
finding, e.g. the fixed-set scan disagreeing with its closed form);
4 when an enumeration budget is exhausted; 5 for internal verification
failures.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from . import fixed_set as fs
from . import groups as gr
from . import kernels as kn
from . import linalg4 as la
from . import triples as tr
from . import wilson as wl
from .context import SuzukiContext, make_context
from .errors import BudgetExceededError, SzVerifyError, VerificationError

EXIT_PASS = 0
EXIT_USAGE = 2
EXIT_THEOREM = 3
EXIT_BUDGET = 4
EXIT_INTERNAL = 5

_E_FOR_Q = {8: 1, 32: 2}
STAGE_ORDER = ("field", "wilson", "group", "fixed-set", "involutions",
               "rank4")


@dataclass
class StageResult:
    name: str
    passed: bool
    elapsed_s: float
    claim: str
    findings: dict

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "elapsed_s": round(self.elapsed_s, 3), "claim": self.claim,
                "findings": self.findings}


def _print_stage(res: StageResult) -> None:
    mark = "PASS" if res.passed else "FAIL"
    print(f"[{res.name:<12}] {mark}  ({res.elapsed_s:6.2f}s)  {res.claim}")
    if not res.passed:
        for k, v in res.findings.items():
            print(f"    {k}: {v}")


def _timed(fn: Callable[[], Tuple[bool, str, dict]],
           name: str) -> StageResult:
    t0 = time.monotonic()
    passed, claim, findings = fn()
    return StageResult(name, passed, time.monotonic() - t0, claim, findings)


def _stage_field(ctx: SuzukiContext) -> StageResult:
    def run():
        f = ctx.field
        q = ctx.q
        ok = 2 * ctx.t * ctx.t == q
        ok &= all(f.mul(a, b) == f.mul(b, a)
                  for a in range(q) for b in range(q))
        ok &= all(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                  for a in range(0, q, max(1, q // 8))
                  for b in range(q) for c in range(q))
        ok &= all(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c))
                  for a in range(q) for b in range(q)
                  for c in range(0, q, max(1, q // 8)))
        ok &= all(f.mul(a, f.inv(a)) == 1 for a in range(1, q))
        ok &= all(f.frobenius_t(a ^ b)
                  == (f.frobenius_t(a) ^ f.frobenius_t(b))
                  for a in range(q) for b in range(q))
        ok &= all(f.frobenius_t(f.mul(a, b))
                  == f.mul(f.frobenius_t(a), f.frobenius_t(b))
                  for a in range(q) for b in range(q))
        ok &= all(f.frobenius_t(f.frobenius_t(a)) == f.pow(a, q // 2)
                  for a in range(1, q))
        return ok, (f"GF({q}) arithmetic exact; Frobenius twist t={ctx.t} "
                    f"additive, multiplicative, with 2t^2 = q"), {"q": q}
    return _timed(run, "field")


def _stage_wilson(ctx: SuzukiContext) -> StageResult:
    def run():
        f = ctx.field
        findings = {}
        basis = [la.basis_vec(i) for i in range(4)]
        table_ok = all(
            wl.bullet(ctx, basis[i], basis[j]) == wl.bullet(ctx, basis[j],
                                                            basis[i])
            for i in range(4) for j in range(4))
        nonzero = sum(any(wl.bullet(ctx, basis[i], basis[j]))
                      for i in range(4) for j in range(4))
        findings["nonzero_basis_products"] = nonzero
        rng = np.random.default_rng(7)
        semi_ok = True
        for _ in range(50):
            u = tuple(int(v) for v in rng.integers(0, ctx.q, 4))
            v = tuple(int(v) for v in rng.integers(0, ctx.q, 4))
            c = int(rng.integers(1, ctx.q))
            lhs = wl.bullet(ctx, la.vec_scale(f, c, u), v)
            rhs = la.vec_scale(f, f.frobenius_t(c), wl.bullet(ctx, u, v))
            semi_ok &= lhs == rhs
        members_ok = wl.is_suzuki(ctx, la.identity())
        members_ok &= wl.is_suzuki(ctx, tuple(ctx.iota))
        members_ok &= all(wl.is_suzuki(ctx, fs.torus_element(ctx, a))
                          for a in range(1, ctx.q))
        trans_rejected = not wl.is_suzuki(ctx, wl.e1_transvection(ctx))
        rejected = 0
        agree = True
        for k in range(100):
            m = wl.random_symplectic(ctx, random.Random(1000 + k))
            mine = wl.is_suzuki(ctx, m)
            if not mine:
                rejected += 1
            if ctx.q == 8 and k < 10:
                agree &= mine == wl.is_suzuki_bruteforce(ctx, m)
        findings["random_symplectic_rejected"] = rejected
        ok = (table_ok and nonzero == 8 and semi_ok and members_ok
              and trans_rejected and rejected >= 90 and agree)
        return ok, ("membership test: symmetric 8-entry product table, "
                    "twisted semilinearity, accepts the torus and iota, "
                    "rejects transvections"), findings
    return _timed(run, "wilson")


def _stage_group(ctx: SuzukiContext, args) -> Tuple[StageResult,
                                                    Optional[gr.GroupSet]]:
    holder = {}

    def run():
        expected = ctx.group_order
        group = gr.get_group(ctx, cache_dir=args.cache_dir, jobs=args.jobs,
                             ceiling=args.budget)
        holder["group"] = group
        filt = int(kn.suzuki_mask(ctx, kn.sylow_candidates(ctx)).sum())
        rng = np.random.default_rng(3)
        spot = all(wl.is_suzuki(ctx, group.element(int(i)))
                   for i in rng.choice(group.order, size=100, replace=False))
        findings = {"order": group.order, "expected": expected,
                    "sylow_filter": filt, "spot_membership": spot}
        ok = (group.order == expected and filt == ctx.sylow_order and spot
              and group.divides(expected))
        return ok, (f"Sz({ctx.q}) closes to order q^2(q^2+1)(q-1) = "
                    f"{expected} from a q^2-element Sylow filter"), findings
    return _timed(run, "group"), holder.get("group")


def _stage_fixed_set(ctx: SuzukiContext, group: gr.GroupSet) -> StageResult:
    def run():
        result = fs.fixed_set_result(ctx, group)
        census = fs.equation_census(ctx, group)
        findings = {
            "closed_form_size": len(result.closed_form),
            "scan_size": len(result.brute_force),
            "scan_size_is_involutions_plus_one":
                len(result.brute_force) == fs.expected_scan_size(ctx),
            "scan_all_symmetric": all(la.transpose(x) == x
                                      for x in result.brute_force),
            "closed_form_satisfies_all_equations":
                census.closed_form_satisfied,
            "full_system_solutions": len(census.full_solutions),
            "full_system_solutions_equal_closed_form":
                census.solutions_match_closed_form,
            "equations_holding_on_every_scan_member":
                sorted(lab for lab, n in census.per_label.items()
                       if n == census.total),
        }
        return result.equal, ("the set {x : x iota x = iota} in Sz(q) "
                              "equals {iota} union the diagonal torus "
                              f"({1 + (ctx.q - 1)} matrices)"), findings
    return _timed(run, "fixed-set")


def _stage_involutions(ctx: SuzukiContext, group: gr.GroupSet) -> StageResult:
    def run():
        invs = gr.involutions(group)
        expected = ctx.involution_count
        orbit = gr.conjugation_orbit(ctx, tuple(ctx.iota), group)
        single = set(orbit) == set(invs)
        findings = {"count": len(invs), "expected": expected,
                    "orbit_of_iota": len(orbit), "single_class": single}
        ok = len(invs) == expected and single
        return ok, (f"Sz({ctx.q}) has exactly (q^2+1)(q-1) = {expected} "
                    "involutions forming a single conjugacy class"), findings
    return _timed(run, "involutions")


def _stage_rank4(ctx: SuzukiContext, group: gr.GroupSet,
                 jobs: int) -> Tuple[StageResult, Optional[tr.TripleReport]]:
    holder = {}

    def run():
        report = tr.search_rank4(ctx, group, jobs=jobs)
        holder["report"] = report
        inv_ok = tr.torus_inversion_check(ctx)
        comm_ok = tr.torus_commutation_check(ctx)
        findings = {
            "candidates": report.candidates,
            "successes": len(report.successes),
            "subgroup_orders": sorted({d.subgroup_order
                                       for d in report.details}),
            "all_solvable": all(d.solvable for d in report.details),
            "torus_inversion": inv_ok,
            "torus_commutation": comm_ok,
            "reduction_complete": report.reduction.fixed_set_equal,
            "generating_triples_outside_restriction": len(report.witnesses),
        }
        ok = report.certifies_nonexistence and inv_ok and comm_ok
        return ok, ("no generating triple with the three involution "
                    "conditions exists (restricted search plus "
                    "completeness audit)"), findings
    return _timed(run, "rank4"), holder.get("report")


def _write_report(path: Optional[str], payload: dict) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _ctx_for(args) -> SuzukiContext:
    return make_context(_E_FOR_Q[args.q])


def cmd_field_selftest(args) -> int:
    res = _stage_field(_ctx_for(args))
    _print_stage(res)
    _write_report(args.report, {"schema": "szverify-run v1", "q": args.q,
                                "stages": [res.to_json_dict()],
                                "overall": res.passed})
    return EXIT_PASS if res.passed else EXIT_THEOREM


def cmd_build_group(args) -> int:
    ctx = _ctx_for(args)
    res, group = _stage_group(ctx, args)
    _print_stage(res)
    if group is not None and args.cache_dir:
        print(f"cache: {os.path.join(args.cache_dir, f'sz{ctx.q}.grp')}")
    _write_report(args.report, {"schema": "szverify-run v1", "q": args.q,
                                "stages": [res.to_json_dict()],
                                "overall": res.passed})
    return EXIT_PASS if res.passed else EXIT_THEOREM


def cmd_enumerate_x(args) -> int:
    ctx = _ctx_for(args)
    closed = fs.closed_form_X(ctx)
    payload = {"schema": "szverify-fixed-set v1", "q": args.q,
               "mode": args.mode}
    status = EXIT_PASS
    if args.mode in ("closed-form", "both"):
        print(f"closed form ({len(closed)} matrices):")
        for x in closed:
            print("  " + la.mat_to_hex(x))
        payload["closed_form"] = [la.mat_to_hex(x) for x in closed]
    if args.mode in ("scan", "both"):
        group = gr.get_group(ctx, cache_dir=args.cache_dir, jobs=args.jobs,
                             ceiling=args.budget)
        scan = fs.brute_force_X(ctx, group)
        payload["scan_size"] = len(scan)
        payload["scan_sample"] = [la.mat_to_hex(x) for x in scan[:16]]
        print(f"scan: {len(scan)} matrices with x.iota.x = iota")
        if args.mode == "both":
            equal = closed == scan
            payload["equal"] = equal
            print(f"closed form == brute force: {str(equal).lower()}")
            if not equal:
                status = EXIT_THEOREM
    _write_report(args.report, payload)
    return status


def cmd_check_equations(args) -> int:
    ctx = _ctx_for(args)
    group = gr.get_group(ctx, cache_dir=args.cache_dir, jobs=args.jobs,
                         ceiling=args.budget)
    census = fs.equation_census(ctx, group)
    print(f"scan members: {census.total}")
    print(f"{'label':<6} {'satisfied':>9}  origin")
    for eq in fs.EQUATIONS:
        o = eq.origin
        if o.kind == "product":
            src = (f"product pair (e{o.i + 1}, e{o.j + 1}) coord {o.coord}"
                   + ("" if o.perpendicular else "  [not perpendicular]"))
        else:
            src = f"Gram position ({o.i + 1}, {o.j + 1})"
        print(f"{eq.label:<6} {census.per_label[eq.label]:>9}  {src}")
    print(f"full-system solutions: {len(census.full_solutions)} "
          f"(closed form size {len(census.closed_form)})")
    ok = (census.closed_form_satisfied and census.solutions_match_closed_form)
    print("closed form satisfies every equation: "
          f"{str(census.closed_form_satisfied).lower()}")
    payload = {"schema": "szverify-equations-census v1", "q": args.q,
               "scan_members": census.total, "per_label": census.per_label,
               "full_system_solutions": len(census.full_solutions),
               "closed_form_satisfied": census.closed_form_satisfied,
               "solutions_match_closed_form":
                   census.solutions_match_closed_form}
    _write_report(args.report, payload)
    return EXIT_PASS if ok else EXIT_THEOREM


def cmd_involutions(args) -> int:
    ctx = _ctx_for(args)
    stage_res, group = _stage_group(ctx, args)
    if group is None:
        _print_stage(stage_res)
        return EXIT_INTERNAL
    res = _stage_involutions(ctx, group)
    _print_stage(res)
    _write_report(args.report, {"schema": "szverify-run v1", "q": args.q,
                                "stages": [res.to_json_dict()],
                                "overall": res.passed})
    return EXIT_PASS if res.passed else EXIT_THEOREM


def cmd_search_rank4(args) -> int:
    ctx = _ctx_for(args)
    group = gr.get_group(ctx, cache_dir=args.cache_dir, jobs=args.jobs,
                         ceiling=args.budget)
    res, report = _stage_rank4(ctx, group, args.jobs)
    print(f"candidates: {report.candidates}, successes: "
          f"{len(report.successes)}")
    _print_stage(res)
    if report.witnesses:
        print(f"restriction incomplete: {len(report.witnesses)} generating "
              "triple(s) satisfy every involution condition outside the "
              "restricted space, e.g.:")
        w = report.witnesses[0]
        for name, m in zip(("sigma1", "sigma2", "sigma3"), w.triple.mats()):
            print(f"  {name} = {la.mat_to_hex(m)}")
        print(f"  subgroup order {w.subgroup_order}, sigma orders "
              f"{list(w.sigma_orders)}")
    _write_report(args.report, report.to_json_dict())
    return EXIT_PASS if res.passed else EXIT_THEOREM


def cmd_verify_all(args) -> int:
    ctx = _ctx_for(args)
    stages: List[StageResult] = []
    group = None
    rank4_report = None
    for name in STAGE_ORDER:
        if name == "field":
            res = _stage_field(ctx)
        elif name == "wilson":
            res = _stage_wilson(ctx)
        elif name == "group":
            res, group = _stage_group(ctx, args)
        elif name == "fixed-set":
            res = _stage_fixed_set(ctx, group)
        elif name == "involutions":
            res = _stage_involutions(ctx, group)
        else:
            res, rank4_report = _stage_rank4(ctx, group, args.jobs)
        stages.append(res)
        _print_stage(res)
        if name == "group" and group is None:
            break
    overall = all(s.passed for s in stages)
    print(f"overall: {'PASS' if overall else 'FAIL'}")
    payload = {"schema": "szverify-run v1", "q": args.q,
               "stages": [s.to_json_dict() for s in stages],
               "overall": overall}
    if rank4_report is not None:
        payload["rank4_report"] = rank4_report.to_json_dict()
    _write_report(args.report, payload)
    return EXIT_PASS if overall else EXIT_THEOREM


def _add_common(p: argparse.ArgumentParser, mode: bool = False) -> None:
    p.add_argument("--q", type=int, choices=(8, 32), default=8)
    p.add_argument("--cache-dir", default=os.environ.get("SUZUKI_CACHE_DIR"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", default=None)
    p.add_argument("--budget", type=int, default=None,
                   help="closure size ceiling override")
    if mode:
        p.add_argument("--mode", choices=("closed-form", "scan", "both"),
                       default="both")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="szverify",
        description="Exact verification of Sz(q) membership, fixed-set and "
                    "generating-triple claims.")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("field-selftest", cmd_field_selftest, False),
        ("build-group", cmd_build_group, False),
        ("enumerate-x", cmd_enumerate_x, True),
        ("check-equations", cmd_check_equations, False),
        ("involutions", cmd_involutions, False),
        ("search-rank4", cmd_search_rank4, False),
        ("verify-all", cmd_verify_all, False),
    )
    for name, fn, mode in specs:
        p = sub.add_parser(name)
        _add_common(p, mode=mode)
        p.set_defaults(fn=fn)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceededError as ex:
        print(f"budget exhausted: {ex}", file=sys.stderr)
        return EXIT_BUDGET
    except (VerificationError, SzVerifyError) as ex:
        print(f"verification error: {ex}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
