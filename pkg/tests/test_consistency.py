import json
from fractions import Fraction

import pytest

from hlskit import IndexSpec, InputError, gamma_member
from hlskit.consistency import (DEFAULT_GRID, LatticeSpec, check_duality, check_known_regions,
                                check_m1_closed_form, check_omega_gamma, check_rule_order,
                                enumerate_lattice, parse_fix, scan_rows)

F = Fraction


def test_enumeration_sizes():
    assert len(list(enumerate_lattice(LatticeSpec((1,), (0, F(1, 4), F(1, 2), F(3, 4), 1))))) == 25
    assert len(list(enumerate_lattice(LatticeSpec((1, 1), (0, F(1, 2), 1))))) == 81


def test_single_point_flagged():
    [pt] = list(enumerate_lattice(LatticeSpec((1,), (F(1, 2),))))
    assert pt.flagged and pt.spec.lam == 1 and str(pt.spec.p[0]) == "2"


def test_enumeration_deterministic():
    lat = LatticeSpec((1, 1), (0, F(1, 3), 1))
    assert [str(p.spec) for p in enumerate_lattice(lat)] == [str(p.spec) for p in enumerate_lattice(lat)]


def test_lattice_validation():
    with pytest.raises(InputError):
        LatticeSpec((1,), ())
    with pytest.raises(InputError):
        LatticeSpec((1,), (F(3, 2),))
    with pytest.raises(InputError):
        LatticeSpec((0,), (F(1, 2),))


def test_explicit_lambda_rule():
    lat = LatticeSpec((1,), (F(1, 4), F(1, 2)), lambda_rule=("1/2", "3/4"))
    assert lat.size == 8 and len(list(enumerate_lattice(lat))) == 8


def test_duality_small():
    rep = check_duality(LatticeSpec((1,)))
    assert rep.passed and rep.checks_run + rep.skipped_flagged == 81
    rep = check_duality(LatticeSpec((1, 1), (0, F(1, 4), F(1, 2), F(3, 4), 1)))
    assert rep.passed and rep.checks_run > 0


def test_duality_hand_example():
    s = IndexSpec.parse("1,1", "2,1", "4,2", "5/4")
    d = IndexSpec.parse("1,1", "4/3,2", "2,inf", "5/4")
    assert s.dual() == d
    assert gamma_member(s).member == gamma_member(d).member is True


def test_omega_gamma_small():
    assert check_omega_gamma(LatticeSpec((1, 1))).passed


def test_known_regions():
    rep = check_known_regions()
    assert rep.passed and rep.checks_run > 1000


def test_known_region_examples():
    assert gamma_member(IndexSpec.parse("1,1", "2,2", "4,4", "3/2")).member
    assert not gamma_member(IndexSpec.parse("1,1", "2,3", "inf,3", "3/2")).member
    # counterexample (ii): homogeneity solves to lambda = 5/3
    s = IndexSpec.parse("1,1", "2,3", "2,inf", "5/3")
    from hlskit import homogeneity_defect
    assert homogeneity_defect(s) == 0 and not gamma_member(s).member


def test_m1_closed_form():
    rep = check_m1_closed_form()
    assert rep.passed and rep.checks_run == 81


def test_rule_order_m2():
    assert check_rule_order(LatticeSpec((1, 1), (0, F(1, 3), F(1, 2), 1))).passed


def test_workers_do_not_change_result():
    lat = LatticeSpec((1, 1), (0, F(1, 2), 1))
    a, b = check_duality(lat, workers=1), check_duality(lat, workers=2)
    assert a.to_dict() == b.to_dict()


def test_report_serialization():
    rep = check_duality(LatticeSpec((1,)))
    d = json.loads(rep.to_json())
    assert d["passed"] and d["failures"] == []
    assert rep.failures_csv() == "check_name,spec,expected,got\n"
    assert "0 flagged" not in rep.summary()


def test_parse_fix():
    assert parse_fix(["q1=inf"], 2) == {("q", 0): F(0)}
    assert parse_fix(["p2=3/2,q2=3"], 2) == {("p", 1): F(2, 3), ("q", 1): F(1, 3)}
    for bad in (["q1"], ["r1=2"], ["q3=2"], ["q1=abc"]):
        with pytest.raises(InputError):
            parse_fix(bad, 2)


def test_scan_rows_fix_counterexample_i():
    rows = list(scan_rows((1, 1), DEFAULT_GRID, parse_fix(["q1=inf"], 2)))
    assert len(rows) == 9 ** 3
    assert all(r["q1"] == "0" for r in rows)
    assert not any(r["member"] for r in rows if r["p2"] == r["q2"])


def test_scan_rows_m1_matches_closed_form():
    rows = list(scan_rows((1,), DEFAULT_GRID))
    assert len(rows) == 81
    for r in rows:
        a, b = F(r["p1"]), F(r["q1"])
        assert r["member"] == (0 < b < a < 1)
        assert r["rule"] == ("BASE" if r["member"] else "FAIL")
