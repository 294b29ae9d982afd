from fractions import Fraction as F
from math import exp, log

import pytest
from hypothesis import given, settings, strategies as st

from chvatal_verify.binom import q_direct, q_table, theorem_check
from chvatal_verify.enclosure import (
    Enclosure,
    certified_compare,
    certified_q,
    certified_q_table,
    certified_theorem_check,
    enc_arith,
    enc_exp,
    enc_from_rational,
    enc_log1p,
    round_down,
    round_up,
)

small = st.fractions(min_value=-3, max_value=3, max_denominator=64)


def test_rational_enclosures():
    assert enc_from_rational(F(1, 2), 20) == Enclosure(F(1, 2), F(1, 2), 20)
    e = enc_from_rational(F(1, 3), 16)
    assert e.contains(F(1, 3)) and e.width <= F(1, 2 ** 15)
    with pytest.raises(ValueError):
        enc_from_rational(1, 4)


def test_arithmetic_examples():
    one, two = Enclosure.point(1), Enclosure.point(2)
    assert enc_arith(one, two, "add") == Enclosure(F(3), F(3), 53)
    sq = enc_arith(Enclosure(F(-1), F(1)), Enclosure(F(-1), F(1)), "mul")
    assert sq.lo <= -1 and sq.hi >= 1
    inv = enc_arith(Enclosure.point(1), Enclosure.point(F(1, 2)), "div")
    assert (inv.lo, inv.hi) == (2, 2)
    with pytest.raises(ZeroDivisionError):
        enc_arith(one, Enclosure(F(-1), F(1)), "div")
    assert enc_arith(Enclosure(F(-2), F(1)), 2, "pow_int").lo == 0


def test_elementary_anchors():
    assert (enc_log1p(0, 53).lo, enc_log1p(0, 53).hi) == (0, 0)
    assert (enc_exp(0, 53).lo, enc_exp(0, 53).hi) == (1, 1)
    l2 = enc_log1p(1, 60)
    assert F(69, 100) < l2.lo <= l2.hi < F(7, 10)
    assert l2.lo <= F(log(2)) + F(1, 2 ** 50) and l2.hi >= F(log(2)) - F(1, 2 ** 50)
    with pytest.raises(ValueError):
        enc_log1p(-1, 53)


@settings(max_examples=60, deadline=None)
@given(small, st.sampled_from([24, 53, 100]))
def test_exp_times_exp_of_negative_contains_one(x, p):
    assert (enc_exp(x, p) * enc_exp(-x, p)).contains(1)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=F(-9, 10), max_value=5, max_denominator=64))
def test_log1p_inverts_exp(x):
    back = enc_exp(enc_log1p(x, 80).mid, 80)
    assert abs(back.mid - (1 + x)) < F(1, 2 ** 60) * (2 + abs(x))


@settings(max_examples=60, deadline=None)
@given(small, small, small, small, st.sampled_from(["add", "sub", "mul"]))
def test_arithmetic_contains_exact_result(a, b, x, y, op):
    lo1, hi1 = min(a, b), max(a, b)
    lo2, hi2 = min(x, y), max(x, y)
    e = enc_arith(Enclosure(lo1, hi1, 24), Enclosure(lo2, hi2, 24), op)
    fn = {"add": lambda u, v: u + v, "sub": lambda u, v: u - v, "mul": lambda u, v: u * v}[op]
    for u in (lo1, hi1, (lo1 + hi1) / 2):
        for v in (lo2, hi2):
            assert e.contains(fn(u, v))


@given(small, st.integers(8, 80))
def test_directed_rounding(x, p):
    assert round_down(x, p) <= x <= round_up(x, p)


def test_compare():
    assert certified_compare(Enclosure(F(0), F(1)), Enclosure(F(2), F(3))) == "less"
    assert certified_compare(Enclosure(F(2), F(3)), Enclosure(F(0), F(1))) == "greater"
    assert certified_compare(Enclosure(F(0), F(2)), Enclosure(F(1), F(3))) == "undecided"
    a, b = certified_q(4, 2, 53), certified_q(4, 3, 53)
    assert certified_compare(a, b) in ("greater", "undecided")
    assert q_direct(4, 2) > q_direct(4, 3)


def test_certified_q_contains_exact():
    assert certified_q(9, 0, 53) == Enclosure(F(1), F(1), 53) or certified_q(9, 0, 53).contains(1)
    for p in (24, 53, 128):
        for n in (5, 17, 40):
            for m in range(n + 1):
                assert certified_q(n, m, p).contains(q_direct(n, m))


def test_certified_table_contains_exact():
    for p in (8, 24, 53):
        for n in (2, 3, 30, 77):
            lo, hi = certified_q_table(n, p)
            for m, q in enumerate(q_table(n).q):
                assert lo[m] <= q <= hi[m], (n, m, p)


@pytest.mark.parametrize("n,p", [(4, 53), (300, 53), (45, 8), (120, 12)])
def test_certified_verdict_matches_exact(n, p):
    res = certified_theorem_check(n, p)
    assert res.verdict == theorem_check(n)
    assert 0 <= res.fallback_fraction <= 1
