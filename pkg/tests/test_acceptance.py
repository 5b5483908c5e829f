"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import dataclasses
import itertools
import time
from collections import Counter

import pytest

from a4canon import checker, cli
from a4canon.cases import ExponentExpr, Inequality, LinForm, Region, coverage_stats
from a4canon.engine.pbw import PINNED, enumerate_pbw, pbw_system
from a4canon.engine.words import serre_holds
from a4canon.laurent import check_identity_i, check_identity_ii
from a4canon.quadform import LP1, LP2, LP3, QM, QP1, QP2, parse_form, region_implies_L_nonneg, weakly_positive

from oracles import interval_partitions

RESULTS = {}


def report(n, ok, detail):
    RESULTS[n] = ok
    print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


@pytest.fixture(scope="module", autouse=True)
def summary():
    yield
    print("\nacceptance summary: " + " ".join(f"{n}:{'PASS' if ok else 'FAIL'}" for n, ok in sorted(RESULTS.items())))


def test_criterion_1_identities():
    t0 = time.perf_counter()
    bad_i = [(m, k, d) for m in range(9) for k in range(m + 1) for d in range(6) if not check_identity_i(m, k, d)]
    bad_ii = [
        (m, k, n, d)
        for m in range(7)
        for k in range(m + 1)
        for n in range(5)
        for d in range(5)
        if not check_identity_ii(m, k, n, d)
    ]
    report(1, not bad_i and not bad_ii,
           f"identity (i) failures {len(bad_i)}, identity (ii) failures {len(bad_ii)} ({time.perf_counter() - t0:.1f}s)")


def test_criterion_2_engine():
    t0 = time.perf_counter()
    serre = serre_holds(PINNED.twist)
    mismatches = []
    count = 0
    for nu in itertools.product(range(7), repeat=4):
        if not 0 < sum(nu) <= 6:
            continue
        count += 1
        idx, _, solver = pbw_system(nu, PINNED)
        expected = interval_partitions(nu)
        if not (len(idx) == len(solver.pivot_columns) == expected == len(enumerate_pbw(nu))):
            mismatches.append(nu)
    report(2, serre and not mismatches,
           f"Serre {serre}; {count} weights of height <= 6, {len(mismatches)} rank/count mismatches "
           f"({time.perf_counter() - t0:.1f}s)")


def test_criterion_3_pinning():
    rec = checker.pin_conventions()
    ok = rec.accepted == PINNED and len(rec.sample_points) >= 3
    ok = ok and all(checker.index_height(A) <= 12 for A in rec.sample_points)
    report(3, ok, f"accepted {rec.accepted.label()} at {len(rec.sample_points)} points; "
                  f"gauge-equivalent {[c.label() for c in rec.equivalent]}")


def test_criterion_4_headline(capsys, table):
    t0 = time.perf_counter()
    code = cli.main(["verify", "--all", "--samples", "2", "--max-entry", "3", "--max-height", "12"])
    out = capsys.readouterr().out
    summary = checker.verify_all(table, samples=2, max_entry=3, max_height=12)
    one_var = {c.id for c in table.one_variable()}
    two_var = {c.id for c in table if len(c.vars) == 2}
    passed = Counter(r.case_id for r in summary.reports if r.passed)
    lattice = all(r.congruence.in_lattice for r in summary.reports if r.congruence)
    ok = (
        code == 0
        and not summary.failures
        and len(one_var) == 72
        and len(two_var) == 2
        and all(passed[i] == 2 for i in one_var | two_var)
        and lattice
    )
    with capsys.disabled():
        print("\n" + out.splitlines()[-1])
    report(4, ok, f"exit {code}; {summary.total('pass')} pass, {summary.total('fail')} fail, "
                  f"{summary.total('skip')} skip over {len(summary.counts)} cases ({time.perf_counter() - t0:.1f}s)")


def test_criterion_5_degeneration(table):
    checked = 0
    bad = []
    missing = []
    for c in table.one_variable():
        pts = checker.degeneration_points(c)
        if not pts:
            missing.append(c.id)
        for A in pts:
            checked += 1
            if not checker.degeneration_holds(c, A):
                bad.append((c.id, A))
    report(5, not bad and checked > 0,
           f"{checked} points over {72 - len(missing)} cases, {len(bad)} mismatches; no such point: {missing or 'none'}")


def test_criterion_6_table_shape(table):
    one = table.one_variable()
    sizes = Counter(Counter(c.id.split(".")[0] for c in one).values())
    report(6, len(one) == 72 and sizes == {3: 13, 2: 15, 1: 3},
           f"{len(one)} one-variable entries, group sizes {dict(sorted(sizes.items(), reverse=True))}")


def test_criterion_7_quadform(table):
    t0 = time.perf_counter()
    qm = weakly_positive(QM, 6)
    p1 = weakly_positive(QP1, 6)
    p2 = weakly_positive(QP2, 6)
    bad = weakly_positive(parse_form(["n=2", "q 1 2 -3"]), 1)
    regions = {
        "LP1/1.1": region_implies_L_nonneg(LP1, table.get("1.1").region, 2).holds,
        "LP2/1.2": region_implies_L_nonneg(LP2, table.get("1.2").region, 2).holds,
        "LP3/1.3": region_implies_L_nonneg(LP3, table.get("1.3").region, 2).holds,
    }
    ok = (
        qm.weakly_positive and qm.witness is None
        and p1 == qm == p2
        and bad.witness == (1, 1) and bad.witness_value == -1
        and all(regions.values())
    )
    report(7, ok, f"QM weakly positive at bound 6: {qm.weakly_positive}; QP1/QP2 identical: {p1 == qm == p2}; "
                  f"mutated witness {bad.witness}; {regions} ({time.perf_counter() - t0:.1f}s)")


def test_criterion_8_coverage(table):
    rep = coverage_stats(table, 2)
    report(8, not rep.interior_overlaps and rep.uncovered > 0,
           f"{rep.points} points, {rep.uncovered} uncovered, {len(rep.interior_overlaps)} interior overlaps")


def _mutants(c):
    for k, q in enumerate(c.region.inequalities):
        ineqs = list(c.region.inequalities)
        ineqs[k] = Inequality(-q.form, f"not ({q})")
        yield f"flip inequality {q}", dataclasses.replace(c, region=Region(tuple(ineqs)))
    for k, (i, e) in enumerate(c.pattern):
        variants = [("negate", ExponentExpr(-e.base, tuple((v, -x) for v, x in e.var_coeffs)))]
        for v, _ in e.var_coeffs:
            variants.append((f"flip {v}", ExponentExpr(e.base, tuple((w, -x if w == v else x) for w, x in e.var_coeffs))))
        for r, x in enumerate(e.base.coeffs):
            if x:
                co = list(e.base.coeffs)
                co[r] = -x
                variants.append((f"flip a{r + 1}", ExponentExpr(LinForm(tuple(co), e.base.const), e.var_coeffs)))
        for label, ne in variants:
            pat = list(c.pattern)
            pat[k] = (i, ne)
            yield f"{label} in exponent {k + 1} (e{i})", dataclasses.replace(c, pattern=tuple(pat))


def test_criterion_9_mutation(table):
    c = table.get("1.1")
    assert all(r.passed for r in checker.mutant_reports(c, c))
    survivors = []
    total = 0
    for label, m in _mutants(c):
        total += 1
        if not any(r.status == "fail" for r in checker.mutant_reports(c, m)):
            survivors.append(label)
    report(9, not survivors, f"{total} mutants of case 1.1, {len(survivors)} undetected {survivors or ''}")
