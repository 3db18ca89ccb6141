"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
also repeated at the end of the pytest report.
"""

from __future__ import annotations

import time

import mpmath

from oracles import f_direct, partitions_dp, partitions_durfee, pentagonal
from qradial import cli
from qradial.catalog import SeriesTag, expand
from qradial.exactnum import cyclo_const, cyclo_root
from qradial.series import qpoch
from qradial.identities import IdentityId, find_qzeta_relation, run_suite
from qradial.radial import (
    ForParams,
    RadialPath,
    RootSpec,
    decomposed_radial_check,
    for1_value,
    for2_value,
    for3_value,
    quotient_limit_check,
    radial_diff_report,
)

RESULTS: dict[int, tuple[bool, str]] = {}
W_LIST = [cyclo_root(2, 1), cyclo_root(3, 1), cyclo_root(4, 1), cyclo_root(6, 1)]


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"\nACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def fmt(x) -> str:
    return mpmath.nstr(x, 3) if x is not None else "n/a"


def test_criterion_1_identity_suite():
    t0 = time.perf_counter()
    reps = run_suite(200, W_LIST)
    dt = time.perf_counter() - t0
    bad = [f"{r.identity.value}@{r.first_mismatch.n}" for r in reps if not r.passed]
    ok = len(reps) == 16 and not bad and dt < 60
    record(1, ok, f"{sum(r.passed for r in reps)}/16 identity reports pass at N=200 "
                  f"in {dt:.1f}s (< 60s){'; failing: ' + ', '.join(bad) if bad else ''}")


def test_criterion_2_catalog_oracles():
    f_ok = list(expand(SeriesTag.F, 19).coeffs) == f_direct(19)
    rank = [c.to_rational() if hasattr(c, "to_rational") else c
            for c in expand(SeriesTag.RANK, 50, w=cyclo_const(1, 1)).coeffs]
    p_ok = rank == partitions_dp(50) == partitions_durfee(50)
    pent_ok = [int(c) for c in qpoch(1, 1, 1, None, 500).coeffs] == pentagonal(500)
    ok = f_ok and p_ok and pent_ok
    record(2, ok, f"F vs direct summation (20 coeffs): {f_ok}; RANK(w=1) vs partition "
                  f"oracles to 50: {p_ok}; (q;q)_inf vs pentagonal theorem to 500: {pent_ok}")


def test_criterion_3_cross_theorem_exactness():
    t0 = time.perf_counter()
    checks = 0
    bad = []
    for k in range(1, 7):
        for h in range(1, 2 * k):
            try:
                root = RootSpec(h, 2 * k)
            except ValueError:
                continue
            checks += 1
            if for2_value(k, root) != for1_value(k, root):
                bad.append(f"for2 k={k} h={h}")
            if k <= 5:
                checks += 1
                if for3_value(ForParams.make(1, 2, h, 2 * k)) != for1_value(k, root):
                    bad.append(f"for3 k={k} h={h}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    record(3, ok, f"{checks} exact comparisons, {len(bad)} mismatches, {dt:.2f}s (< 5s)"
                  + (f"; {bad}" if bad else ""))


def test_criterion_4_decomposed_route():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for k in (1, 2):
        rep = decomposed_radial_check(k, RadialPath(2, 10, 150))
        d = rep.diagnostics
        pref10 = d["prefactor_abs"].get(10)
        pref_ok = d["prefactor_monotone"] and pref10 is not None and pref10 < 1e-3
        window = [d["tr_sum"][t] for t in range(4, 11) if t in d["tr_sum"]]
        box = max(max(abs(v.real), abs(v.imag)) for v in window)
        steps = [abs(b - a) for a, b in zip(window, window[1:])]
        box_ok = len(window) == 7 and box < 10 and steps[-1] < steps[0]
        u10 = d["u_distance"].get(10)
        u_ok = u10 is not None and u10 < 1e-4
        ok = ok and pref_ok and box_ok and u_ok and rep.complete
        parts.append(
            f"k={k}: prefactor monotone={d['prefactor_monotone']} |(-q;q)^2|(t=10)={fmt(pref10)}"
            f" [{'ok' if pref_ok else 'FAIL'}]; TR{d['which_sum']} box max={fmt(box)}"
            f" [{'ok' if box_ok else 'FAIL'}]; |u(zeta r_10)-u(zeta)|={fmt(u10)} < 1e-4"
            f" [{'ok' if u_ok else 'FAIL'}]; extrapolated u distance="
            f"{fmt(d.get('u_extrapolated_distance'))}; recomposed agreement={fmt(rep.agreement)}"
        )
    dt = time.perf_counter() - t0
    ok = ok and dt < 60
    record(4, ok, " | ".join(parts) + f" | runtime {dt:.1f}s (< 60s)")


def test_criterion_5_direct_route():
    t0 = time.perf_counter()
    path = RadialPath(2, 12, 200)
    r1 = radial_diff_report("for1", 1, path)
    r2 = radial_diff_report("for1", 2, path)
    dt = time.perf_counter() - t0
    ok1 = r1.agreement is not None and r1.agreement < 1e-6
    ok2 = r2.agreement is not None and r2.agreement < 1e-4
    ok = ok1 and ok2 and dt < 180 and r1.complete and r2.complete
    record(5, ok, f"k=1 agreement {fmt(r1.agreement)} (< 1e-6, est. {fmt(r1.error_estimate)}); "
                  f"k=2 agreement {fmt(r2.agreement)} (< 1e-4, est. {fmt(r2.error_estimate)}); "
                  f"runtime {dt:.1f}s (< 180s)")


def test_criterion_6_quotient():
    parts = []
    ok = True
    for abhm in [(1, 2, 1, 2), (1, 2, 1, 4), (1, 3, 5, 6), (2, 3, 1, 6)]:
        rep = quotient_limit_check(ForParams.make(*abhm), RadialPath(2, 10, 150))
        good = rep.agreement is not None and rep.agreement < 1e-2
        ok = ok and good
        parts.append(f"{abhm}: {fmt(rep.agreement)}")
    record(6, ok, "quotient agreement (< 1e-2) " + "; ".join(parts))


def test_criterion_7_relations():
    t0 = time.perf_counter()
    r8 = find_qzeta_relation(8, 30, verify_order=400)
    r10 = find_qzeta_relation(10, 30, verify_order=400)
    r14 = find_qzeta_relation(14, 30, verify_order=400)
    r2 = find_qzeta_relation(2, 30, verify_order=400)
    dt = time.perf_counter() - t0
    ok8 = r8.found and r8.normalizing_constant == 480 and r8.monomials == ((2, 0, 1),)
    ok10 = r10.found and r10.normalizing_constant == -264 and r10.monomials == ((1, 1, 1),)
    ok14 = r14.found and r14.normalizing_constant == -24 and r14.monomials == ((2, 1, 1),)
    verified = all(r.verified_order == 400 for r in (r8, r10, r14))
    ok = ok8 and ok10 and ok14 and verified and not r2.found and dt < 60
    record(7, ok, f"1+480z(8)=Q^2: {ok8}; 1-264z(10)=QR: {ok10}; 1-24z(14)=Q^2R: {ok14}; "
                  f"verified to 400: {verified}; s=2 found={r2.found}; {dt:.1f}s (< 60s)")


def test_criterion_8_defect_detection(capsys):
    inject = {ident: (7 + 13 * i, 1) for i, ident in enumerate(IdentityId)}
    reps = run_suite(200, W_LIST, perturb=inject)
    located = all(not r.passed and r.first_mismatch.n == inject[r.identity][0] for r in reps)
    code = cli.run(["identities", "--order", "60", "--w", "-1",
                    "--inject", "BILATERAL_EVEN_WEIGHTED:17", "--format", "json"])
    capsys.readouterr()
    clean = cli.run(["identities", "--order", "60", "--w", "-1"])
    capsys.readouterr()
    ok = located and code == 1 and clean == 0
    record(8, ok, f"all {len(reps)} perturbed reports located at the injected index: {located}; "
                  f"CLI exit with defect={code} (want 1), without={clean} (want 0)")
