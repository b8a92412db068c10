"""Acceptance criteria, one test each, at the stated tolerances and runtime limits.

Every test prints a single ``[PASS]`` / ``[FAIL]`` line.  Run the module as a
script (``python3 tests/test_acceptance.py``) to get just those lines.
"""
import sys
import time

import pytest

from hlskit.consistency import (check_duality, check_known_regions, check_m1_closed_form,
                                check_omega_gamma, default_lattices)
from hlskit.suites import (blowup_suite, bracket_suite, dilation_suite, drift_suite,
                           kfun_oracle_suite, random_family)

pytestmark = pytest.mark.acceptance


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def criterion_1():
    rep, dt = _timed(check_m1_closed_form)
    ok = rep.passed and rep.checks_run == 81 and dt < 1.0
    return ok, f"{rep.checks_run} points, {len(rep.failures)} mismatches", dt, 1.0


def _lattice_criterion(check):
    def run():
        return [check(lat) for lat in default_lattices((1, 2, 3))]
    reps, dt = _timed(run)
    checks = sum(r.checks_run for r in reps)
    fails = sum(len(r.failures) for r in reps)
    return fails == 0 and dt < 60.0, f"{checks} checks over m = 1, 2, 3, {fails} exceptions", dt, 60.0


def criterion_2():
    return _lattice_criterion(check_duality)


def criterion_3():
    return _lattice_criterion(check_omega_gamma)


def criterion_4():
    rep, dt = _timed(check_known_regions)
    return (rep.passed and dt < 10.0,
            f"{rep.checks_run} points, {len(rep.failures)} exceptions", dt, 10.0)


def criterion_5():
    res, dt = _timed(lambda: dilation_suite(m=2, cells=128, tol=1e-8))
    worst = max(r["max_rel_error"] for r in res.rows)
    return (res.passed and len(res.rows) == 27 and dt < 30.0,
            f"27 cases, max relative error {worst:.3g} (< 1e-8)", dt, 30.0)


def criterion_6():
    res, dt = _timed(drift_suite)
    desc = ", ".join(f"slope {r['fitted_slope']:+.4f} vs defect {r['defect']}" for r in res.rows)
    return res.passed and dt < 60.0, desc, dt, 60.0


def criterion_7():
    res, dt = _timed(blowup_suite)
    return res.passed and dt < 30.0, "; ".join(res.notes[:2]), dt, 30.0


def criterion_8():
    res, dt = _timed(lambda: kfun_oracle_suite(random_family(100, max_pieces=8)))
    worst = res.rows[0]["worst"]
    return (res.passed and dt < 10.0,
            f"oracle worst rel error {worst:.3g} (<= 1e-6); concavity and growth "
            f"{'hold' if all(r['ok'] for r in res.rows[1:]) else 'VIOLATED'}", dt, 10.0)


def criterion_9():
    res, dt = _timed(lambda: bracket_suite(random_family(100, max_pieces=8), max_range=50.0))
    desc = ", ".join(f"({r['u']},{r['v']},{r['theta']},{r['q']}) C/c={r['C/c']:.3f}" for r in res.rows)
    return res.passed and dt < 10.0, desc, dt, 10.0


CRITERIA = [
    (1, "m=1 exactness", criterion_1),
    (2, "duality closure", criterion_2),
    (3, "omega-gamma equivalence", criterion_3),
    (4, "known regions (m=2)", criterion_4),
    (5, "dilation identity", criterion_5),
    (6, "scaling drift", criterion_6),
    (7, "blow-up vs stability", criterion_7),
    (8, "K-functional oracle", criterion_8),
    (9, "interpolation-Lorentz stability", criterion_9),
]


def _line(num, name, ok, detail, dt, limit):
    return (f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {name}: {detail}; "
            f"runtime {dt:.2f}s (limit {limit:g}s)")


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail, dt, limit = fn()
    with capsys.disabled():
        print("\n" + _line(num, name, ok, detail, dt, limit))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, name, fn in CRITERIA:
        ok, detail, dt, limit = fn()
        failed += not ok
        print(_line(num, name, ok, detail, dt, limit), flush=True)
    sys.exit(1 if failed else 0)
