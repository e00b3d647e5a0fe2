"""Acceptance criteria, each at its stated tolerance and size.

All checks run once under MASTER_SEED (module fixture) and are collected into
a RunReport; criterion 9 reruns everything and compares the JSON bytes.  One
PASS/FAIL line per criterion is printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from wignerkit.suites import (
    THEOREM_DIMS,
    Check,
    RunReport,
    check_circle_intersections,
    check_circle_membership,
    check_compatibility,
    check_interval_law,
    check_negative_detection,
    check_no_orthogonal_pair,
    check_round_trip,
    check_sphere_points,
    check_sphere_rotations,
    check_trace_identity,
    circle_overlaps,
)

MASTER_SEED = 20240601


def stated_margin_check(seed: int) -> Check:
    """min tr(P_i P_j) over 64 circle samples against min(t, 1-t)^2 - 1e-8, as written."""
    worst, bad = math.inf, None
    for i, (t, g) in enumerate(circle_overlaps(seed, trials=50, n=2, m=64)):
        margin = g - (min(t, 1 - t) ** 2 - 1e-8)
        worst = min(worst, margin)
        if (g <= 0 or margin < 0) and bad is None:
            bad = [seed, 1, i]
    return Check("no_orthogonal_pair_stated_margin", "min overlap >= min(t,1-t)^2 - 1e-8",
                 bad is None, float(worst), 50, bad)


def acceptance_checks(seed: int) -> tuple[dict, dict]:
    """Run every criterion's checks; returns ({criterion: [Check]}, {criterion: seconds})."""
    plan = {
        1: lambda: [check_round_trip(seed, THEOREM_DIMS, 100, u_tol=1e-8, p_tol=1e-9)],
        2: lambda: [
            check_circle_membership(seed, 50, 2, s_points=100, alpha_points=64, s_tol=1e-8),
            check_no_orthogonal_pair(seed, 50, 2, m=64, slack=1e-8),
            stated_margin_check(seed),
        ],
        3: lambda: [check_circle_intersections(seed, 50, 20, 2, m=720, sum_tol=1e-9, wz_tol=1e-8, ang_tol=1e-6)],
        4: lambda: [check_sphere_rotations(seed, 100, tol=1e-9)],
        5: lambda: [check_sphere_points(seed, 1000, 500, x0_tol=1e-12, r_tol=1e-10, ortho_tol=1e-10)],
        6: lambda: [check_compatibility(seed, 4, 2, 20), check_interval_law(seed, 4, 2, 20)],
        7: lambda: [check_negative_detection(seed, THEOREM_DIMS, 50, eps_values=(1e-3, 1e-5), ratio=0.1)],
        8: lambda: [check_trace_identity(seed, THEOREM_DIMS, 100, 20, tol=1e-8)],
    }
    checks, times = {}, {}
    for crit, run in plan.items():
        start = time.perf_counter()
        checks[crit] = run()
        times[crit] = time.perf_counter() - start
    return checks, times


def acceptance_report(checks: dict, seed: int) -> RunReport:
    flat = [c for crit in sorted(checks) for c in checks[crit]]
    return RunReport("acceptance", seed, list(THEOREM_DIMS), 100, flat)


@pytest.fixture(scope="module")
def run():
    checks, times = acceptance_checks(MASTER_SEED)
    return checks, times, acceptance_report(checks, MASTER_SEED)


@pytest.fixture
def record(request):
    def _record(crit: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {crit}: {detail}"
        request.config._acceptance_lines.append(line)
        print(line)
        return ok
    return _record


def _by_name(checks, name):
    return next(c for c in checks if c.name == name)


def test_criterion_1_round_trip(run, record):
    checks, times, _ = run
    c = checks[1][0]
    ok = c.passed and c.worst <= 1e-8 and c.count == 1200 and times[1] <= 30
    record("1", ok, f"round trip over {c.count} operators, worst error {c.worst:.2e}, {times[1]:.1f}s (<= 30s)")
    assert ok, c


def test_criterion_2_hole_suite(run, record):
    checks, times, _ = run
    member = _by_name(checks[2], "circle_membership_iff_s_equals_t")
    overlap = _by_name(checks[2], "small_circle_has_no_orthogonal_pair")
    ok = member.passed and member.worst == 0 and overlap.passed and times[2] <= 10
    record("2", ok, f"{member.count} grid points, {int(member.worst)} violations; no orthogonal pair "
                    f"(min overlap >= (2t-1)^2); {times[2]:.1f}s (<= 10s)")
    assert ok, (member, overlap)


def test_criterion_2_margin_as_stated(run, record):
    # The smallest overlap on a circle is (2t-1)^2, reached by antipodal samples,
    # which is below min(t,1-t)^2 for t in (1/2, 2/3).  Kept at the written
    # margin so the discrepancy stays visible.
    checks, _, _ = run
    c = _by_name(checks[2], "no_orthogonal_pair_stated_margin")
    record("2 (margin min(t,1-t)^2 as written)", c.passed,
           f"worst margin {c.worst:.3e}, first failing seed {c.failing_seed}")
    assert c.passed, c


def test_criterion_3_intersections(run, record):
    checks, times, _ = run
    c = checks[3][0]
    ok = c.passed and c.count == 1000 and c.worst <= 1e-8 and times[3] <= 20
    record("3", ok, f"{c.count} member pairs, worst |w+z| on same circle {c.worst:.2e}, {times[3]:.1f}s (<= 20s)")
    assert ok, c


def test_criterion_4_rotations(run, record):
    checks, _, _ = run
    c = checks[4][0]
    ok = c.passed and c.worst <= 1e-9 and c.count == 100
    record("4", ok, f"{c.count} unitary pairs, worst residual {c.worst:.2e}")
    assert ok, c


def test_criterion_5_sphere(run, record):
    checks, _, _ = run
    c = checks[5][0]
    ok = c.passed and c.count == 1500
    record("5", ok, f"1000 points and 500 pairs, worst deviation {c.worst:.2e}")
    assert ok, c


def test_criterion_6_subspaces(run, record):
    checks, _, _ = run
    comp, interval = checks[6]
    ok = comp.passed and interval.passed and comp.count == 40
    record("6", ok, f"compatibility on {comp.count} pairs, interval law on {interval.count} subspaces")
    assert ok, (comp, interval)


def test_criterion_7_negative_detection(run, record):
    checks, _, _ = run
    c = checks[7][0]
    ok = c.passed and c.worst >= 0.1
    record("7", ok, f"{c.count} operators, smallest defect/eps {c.worst:.3f} (>= 0.1)")
    assert ok, c


def test_criterion_8_trace_identity(run, record):
    checks, _, _ = run
    c = checks[8][0]
    ok = c.passed and c.worst <= 1e-8
    record("8", ok, f"{c.count} evaluations, worst scaled gap {c.worst:.2e}")
    assert ok, c


def test_criterion_9_determinism(run, record):
    _, _, report = run
    again = acceptance_report(acceptance_checks(MASTER_SEED)[0], MASTER_SEED)
    first, second = report.to_json().encode(), again.to_json().encode()
    ok = first == second
    record("9", ok, f"two acceptance reports, {len(first)} bytes each, identical={ok}")
    assert ok


def test_report_is_json_round_trippable(run):
    import json

    _, _, report = run
    doc = json.loads(report.to_json())
    assert doc["seed"] == MASTER_SEED and len(doc["checks"]) == 11
    assert np.isfinite([c["worst"] for c in doc["checks"] if c["worst"] is not None]).all()
