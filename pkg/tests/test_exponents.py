import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hlskit import (INF, DomainError, Exponent, IndexSpec, InputError, conjugate,
                    format_rational, hls_exponent, homogeneity_defect, parse_exponent,
                    parse_exponent_list, parse_rational)

recips = st.fractions(min_value=0, max_value=1, max_denominator=24)


def test_parse_tokens():
    assert parse_exponent("inf") is INF
    assert parse_exponent("Infinity") == INF
    assert parse_exponent("∞").is_infinite
    assert parse_exponent("3/2").reciprocal == Fraction(2, 3)
    assert parse_exponent(" 4 ").value == 4
    assert parse_exponent_list("2,inf,3/2") == (Exponent.of(2), INF, Exponent.of("3/2"))


@pytest.mark.parametrize("bad", ["", "2x", "1/0", "abc", "2.5", "--1"])
def test_malformed_tokens_name_the_token(bad):
    with pytest.raises(InputError) as exc:
        parse_exponent(bad)
    if bad:
        assert bad in str(exc.value)


@pytest.mark.parametrize("bad", ["0", "-2", "-1/3"])
def test_nonpositive_exponents(bad):
    with pytest.raises(DomainError):
        parse_exponent(bad)


def test_floats_refused_except_inf():
    with pytest.raises(InputError):
        Exponent.of(2.5)
    assert Exponent.of(math.inf) is INF
    with pytest.raises(InputError):
        parse_rational(0.5)


def test_ordering_and_text():
    assert Exponent.of(2) < Exponent.of(3) < INF
    assert Exponent.of("1/2") < Exponent.of(1)
    assert str(INF) == "inf" and str(Exponent.of("3/2")) == "3/2" and str(Exponent.of(4)) == "4"
    assert float(Exponent.of("3/2")) == 1.5 and float(INF) == math.inf
    assert len({Exponent.of(2), parse_exponent("2"), Exponent.from_reciprocal("1/2")}) == 1


@pytest.mark.parametrize("p,want", [("1", "inf"), ("2", "2"), ("4/3", "4"), ("inf", "1")])
def test_conjugate_examples(p, want):
    assert conjugate(p) == parse_exponent(want)


def test_conjugate_below_one():
    with pytest.raises(DomainError, match="conjugate undefined below 1"):
        conjugate("1/2")


@given(recips)
def test_conjugate_involution(r):
    e = Exponent.from_reciprocal(r)
    assert conjugate(conjugate(e)) == e
    assert conjugate(e).reciprocal + e.reciprocal == 1


@given(st.fractions(min_value=-50, max_value=50, max_denominator=1000))
def test_rational_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@pytest.mark.parametrize("dims,p,q,lam", [
    ("1", "2", "4", "3/4"),
    ("1", "2", "2", "1"),
    ("1,1", "2,1", "4,2", "5/4"),
])
def test_homogeneity_defect_zero(dims, p, q, lam):
    assert homogeneity_defect(IndexSpec.parse(dims, p, q, lam)) == 0


def test_homogeneity_defect_needs_lambda():
    with pytest.raises(InputError):
        homogeneity_defect(IndexSpec.parse("1", "2", "4"))


@pytest.mark.parametrize("dims,p,q,want", [
    ("1", "3/2", "3/2", Fraction(2, 3)),
    ("1,1", "2,2", "2,2", Fraction(2)),
    ("1", "1", "1", Fraction(0)),
])
def test_hls_exponent_examples(dims, p, q, want):
    assert hls_exponent(IndexSpec.parse(dims, p, q)) == want


def test_hls_exponent_below_one():
    with pytest.raises(DomainError):
        hls_exponent(IndexSpec.parse("1", "1/2", "2"))


def test_index_spec_validation():
    with pytest.raises(InputError):
        IndexSpec.parse("1,1", "2", "2,2", "1")
    with pytest.raises(InputError):
        IndexSpec.parse("0", "2", "2", "1")
    with pytest.raises(InputError):
        IndexSpec.parse("a", "2", "2", "1")
    with pytest.raises(InputError):
        IndexSpec((1,), ("2",), ("2",), 0.5)


def test_index_spec_helpers():
    s = IndexSpec.parse("2,1", "2,inf", "4,inf", "5/2")
    assert s.m == 2 and s.total_dim == 3
    assert s.to_dict() == {"dims": [2, 1], "p": ["2", "inf"], "q": ["4", "inf"], "lambda": "5/2"}
    d = s.dual()
    assert d.p == (Exponent.of("4/3"), Exponent.of(1)) and d.q == (Exponent.of(2), Exponent.of(1))
    assert d.dual() == s
    assert s.with_lambda("1").lam == 1
    assert "lambda=5/2" in str(s)


@given(st.lists(st.tuples(recips, recips), min_size=1, max_size=3),
       st.fractions(min_value=0, max_value=4, max_denominator=24))
def test_dual_preserves_defect(pairs, lam):
    spec = IndexSpec(tuple(1 for _ in pairs), tuple(Exponent(a) for a, _ in pairs),
                     tuple(Exponent(b) for _, b in pairs), lam)
    assert homogeneity_defect(spec.dual()) == homogeneity_defect(spec)
