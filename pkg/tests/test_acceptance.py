"""Acceptance criteria 1-8, one PASS/FAIL line each.

Lines are printed in the pytest terminal summary, or directly when this
file is run as a script.
"""
import math
import sys
import time
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE, record  # noqa: E402

from netnl.behaviors import central_labels, check_box, default_box, make_box, optimal_provider
from netnl.bounds import (
    alpha,
    bounds,
    chain_T_bounds,
    plnl_delta,
    ratio_delta,
    star_c_bounds,
    star_c_threshold,
)
from netnl.functionals import FAMILIES, FunctionalSpec, evaluate
from netnl.observables import anticommutator_table, planar_family
from netnl.oracle import brute_hybrid_max, brute_local_max, lnl_term_decomposition
from netnl.report import validation_report
from netnl.soscert import nu_value, sos_residuals

GOLDEN = (math.sqrt(5) + 1) / 2


def test_criterion_1_closed_forms():
    start = time.perf_counter()
    worst = 0.0
    for family in FAMILIES:
        for n in (2, 3, 4):
            for m in range(2, 7):
                value = evaluate(FunctionalSpec(family, n, m), optimal_provider(family, n, m)).total
                worst = max(worst, abs(value - bounds(family, n, m).quantum_opt))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10
    record(1, ok, f"max |Q - closed form| = {worst:.2e} over 60 points in {elapsed:.2f} s")
    assert ok


def test_criterion_2_worked_example():
    spec = FunctionalSpec("star_c", 2, 3)
    local = brute_local_max(spec).best_value
    quantum = evaluate(spec, optimal_provider("star_c", 2, 3)).total
    hybrid = brute_hybrid_max(spec)
    terms = lnl_term_decomposition(spec, hybrid.argmax).terms
    split = ([terms[(j, 1)] for j in (1, 2, 3)], [terms[(j, 2)] for j in (1, 2, 3)])
    ok = (
        local == 8 == star_c_bounds(2, 3).local_bound
        and abs(quantum - 6 * math.sqrt(3)) <= 1e-9
        and abs(hybrid.best_value - 10) <= 1e-9
        and split == ([2, 2, 0], [2, 2, 2])
    )
    record(2, ok, f"local {local:g}, quantum {quantum:.12f}, LNL {hybrid.best_value:g}, terms {split}")
    assert ok


def test_criterion_3_oracle_equivalence():
    start = time.perf_counter()
    failures = []
    for m in range(2, 13):
        for family in ("star_delta", "chain_I"):
            if brute_local_max(FunctionalSpec(family, 2, m)).best_value != alpha(m):
                failures.append((family, 2, m))
    for n in (2, 3, 4):
        for m in range(2, 7):
            if brute_local_max(FunctionalSpec("star_c", n, m)).best_value != 2 * m * n - 2 * n:
                failures.append(("star_c", n, m))
            if brute_local_max(FunctionalSpec("chain_T", n, m)).best_value != 4 * m - 4:
                failures.append(("chain_T", n, m))
    worst = 0.0
    for n in (2, 3):
        for m in range(2, 6):
            for family in FAMILIES:
                got = brute_hybrid_max(FunctionalSpec(family, n, m)).best_value
                worst = max(worst, abs(got - bounds(family, n, m).lnl_value))
            for p in range(1, n + 1):
                got = brute_hybrid_max(FunctionalSpec("star_delta", n, m), local_edges=range(1, p + 1)).best_value
                worst = max(worst, abs(got - plnl_delta(n, m, p)))
    elapsed = time.perf_counter() - start
    ok = not failures and worst <= 1e-9 and elapsed < 60
    record(3, ok, f"local bounds exact ({len(failures)} mismatches); hybrid max error {worst:.2e}; {elapsed:.2f} s")
    assert ok


def _criterion_4_parts():
    grid = {(n, m): ratio_delta(n, m) for m in range(3, 9) for n in range(2, 8)}
    at_least_one = all(r >= 1 for r in grid.values())
    monotone = all(grid[(n + 1, m)] >= grid[(n, m)] for m in range(3, 9) for n in range(2, 7))
    r22 = ratio_delta(2, 2)
    limit = {m: abs(ratio_delta(10**6, m) - math.sqrt(m)) for m in range(3, 9)}
    return at_least_one, monotone, r22, limit


def test_criterion_4_ratio_grid():
    at_least_one, monotone, r22, limit = _criterion_4_parts()
    literal = all(v < 1e-6 for v in limit.values())
    worst = max(limit.values())
    record(4, at_least_one and monotone and abs(r22 - 1) <= 1e-15 and literal,
           f"R >= 1: {at_least_one}, monotone in n: {monotone}, R_2,2 = {r22!r}; "
           f"max |R_1e6,m - sqrt m| = {worst:.2e} (the O(1/n) term "
           f"sqrt(m) ln(m 2^(m-1)/alpha_m)/n exceeds 1e-6 for m >= 3; tolerance unattainable at n = 1e6)")
    assert at_least_one and monotone and abs(r22 - 1) <= 1e-15
    # the gap to sqrt(m) is the analytic first-order term, so it does vanish
    for m in range(3, 9):
        first_order = math.sqrt(m) * math.log(m * 2 ** (m - 1) / alpha(m)) / 10**6
        assert limit[m] == pytest.approx(first_order, rel=1e-5)


@pytest.mark.xfail(strict=True, reason="|R_{1e6,m} - sqrt(m)| is ~1.2e-6 to 3.7e-6 for m in 3..8 (analytic O(1/n) gap)")
def test_criterion_4_literal_limit_tolerance():
    assert all(v < 1e-6 for v in _criterion_4_parts()[3].values())


def test_criterion_5_fnn_thresholds():
    mpmath.mp.dps = 50
    independent = {}
    for m in range(3, 9):
        f = m * (1 - mpmath.cos(mpmath.pi / (2 * m)))
        independent[m] = int(mpmath.floor(1 / f))
    computed = {m: star_c_threshold(m) for m in range(3, 9)}
    flips = True
    for m in range(3, 9):
        f = m * (1 - mpmath.cos(mpmath.pi / (2 * m)))
        if (1 / f) == mpmath.floor(1 / f):
            continue
        for n in range(2, independent[m] + 4):
            flips &= star_c_bounds(n, m).fnn == (n <= independent[m])
    chain_t = all(chain_T_bounds(n, m).fnn for m in range(3, 13) for n in range(2, 9))
    ok = computed == independent and list(computed.values()) == [2, 3, 4, 4, 5, 6] and flips and chain_t
    record(5, ok, f"thresholds {list(computed.values())} (mpmath agrees: {computed == independent}); "
                  f"star_c flips at threshold: {flips}; chain_T fnn for all n in [2,8]: {chain_t}")
    assert ok


def test_criterion_6_sos_certificates():
    worst = 0.0
    for family in ("star_c", "star_delta"):
        for n in (2, 3):
            for m in range(2, 7):
                worst = max(worst, sos_residuals(family, n, m).max_residual)
    printed = {
        (1, 2): GOLDEN, (2, 3): GOLDEN, (3, 4): GOLDEN, (4, 5): GOLDEN,
        (1, 3): GOLDEN - 1, (3, 5): GOLDEN - 1, (2, 4): GOLDEN - 1,
        (1, 4): -(GOLDEN - 1), (2, 5): -(GOLDEN - 1), (1, 5): -GOLDEN,
    }
    table = anticommutator_table(planar_family(5))
    table_err = max(abs(table[k] - v) for k, v in printed.items())
    nu_err = max(
        abs(nu_value("star_c", m, j, planar_family(m)) - 2 * math.cos(math.pi / (2 * m)))
        for m in range(2, 7)
        for j in range(1, m + 1)
    )
    ok = worst <= 1e-9 and table_err <= 1e-12 and nu_err <= 1e-12
    record(6, ok, f"max residual {worst:.2e}; m=5 table error {table_err:.2e} over all {len(printed)} printed pairs; "
                  f"nu error {nu_err:.2e}")
    assert ok


def test_criterion_7_no_signaling_suite():
    boxes = []
    for m in range(2, 9):
        boxes += [make_box("zbit", m), make_box("shifted", m), make_box("chain_shifted", m)]
        for n in (2, 3, 4):
            boxes.append(make_box("shifted", m, n=n))
            for family in FAMILIES:
                for edge in range(1, n + 1):
                    boxes.append(default_box(family, n, m, edge))
            boxes.append(make_box("identity", labels=central_labels("chain_I", n, m)))
    problems = sum(len(check_box(b, 1e-12)) for b in boxes)
    extreme = all(abs(abs(b.correlator(y, x)) - 1) <= 1e-12 for b in boxes for y in b.y_labels for x in b.x_labels)
    ok = problems == 0 and extreme
    record(7, ok, f"{len(boxes)} boxes, {problems} constraint violations, all |correlator| = 1: {extreme}")
    assert ok


def test_criterion_8_discrepancy_ledger():
    findings = {f["key"]: f for f in validation_report()["findings"]}
    a, b, c = (findings[k]["computed"] for k in "abc")
    ok = (
        all(findings[k]["conflict"] and findings[k]["claim"] and findings[k]["locator"] for k in "abc")
        and a["terms_below_sqrt3"].get("1,1") == 1.5
        and abs(b["plnl_by_p"]["3"] - 7.135) < 1e-3 and b["plnl_by_p"]["3"] > 4 * math.sqrt(3)
        and abs(c["quantum"] - 5.657) < 1e-3 and c["lnl_oracle"] == 6
    )
    record(8, ok, f"(a) I_11 = {a['terms_below_sqrt3'].get('1,1')} < sqrt3; (b) pLNL(3,4,3) = {b['plnl_by_p']['3']:.4f} "
                  f"> 4 sqrt3; (c) quantum {c['quantum']:.4f} < LNL {c['lnl_oracle']:g}; plus (d) {findings['d']['title']}")
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_") and "literal" not in name:
            try:
                fn()
            except AssertionError:
                pass
    for criterion in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[criterion]
        print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
