from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from chvatal_verify.binom import switch_predicate
from chvatal_verify.lemmas import h_of
from chvatal_verify.proofsteps import (
    H2_bound,
    H_of,
    I_bound_numerators,
    I_of,
    J1_bound,
    J_of,
    SCALAR_KINDS,
    bound_scan,
    cubic_truncation,
    gamma_closed_form,
    ineq8_first,
    log_exponent,
    proof_step_report,
    scalar_inequality_check,
    truncation_sign_scan,
)


def test_integral_anchors():
    assert ineq8_first(1) == F(13, 12)
    assert I_of(1) == F(19, 27)
    assert I_of(2) == F(5997, 6250)
    assert J_of(1, 1) == F(109, 108) == J1_bound(1)
    assert J_of(1, 2) == F(1141, 1080)
    assert H_of(1, 2) == F(1251, 1280)
    assert H_of(1, 1) == F(175, 256)


def test_domain_errors():
    with pytest.raises(ValueError):
        J_of(2, 3)
    with pytest.raises(ValueError):
        H_of(0, 1)
    with pytest.raises(ValueError):
        cubic_truncation(1, F(1, 2), "gamma")


def test_truncations():
    assert cubic_truncation(2, 1, "gamma") == F(-7, 25) == gamma_closed_form(2, 1)
    assert cubic_truncation(2, 1, "lambda") == F(-7, 27)
    assert cubic_truncation(5, 0, "gamma") == 0 == cubic_truncation(5, 0, "lambda")


def test_displayed_bounds():
    assert H2_bound(2) == F(15521, 15552)
    assert I_bound_numerators(3) == (-2231, F(-25515, 2))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 30))
def test_integrals_are_instances_of_h(s):
    assert ineq8_first(s) == h_of(3 * s, 2 * s - 1)
    assert I_of(s) == h_of(3 * s, 2 * s)
    for r in (1, 2):
        assert J_of(s, r) == h_of(3 * s + r, 2 * s)
        assert H_of(s, r) == h_of(3 * s + r, 2 * s + 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 60))
def test_case_analysis_reproduces_the_switch(s):
    # each integral sits on the side of 1 that the switch predicate demands
    assert (ineq8_first(s) >= 1) == switch_predicate(3 * s, 2 * s - 1)
    assert (I_of(s) >= 1) == switch_predicate(3 * s, 2 * s)
    for r in (1, 2):
        assert (J_of(s, r) >= 1) == switch_predicate(3 * s + r, 2 * s)
        assert (H_of(s, r) >= 1) == switch_predicate(3 * s + r, 2 * s + 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 80), st.fractions(min_value=0, max_value=1, max_denominator=50))
def test_gamma_closed_form_matches_sum(s, v):
    assert cubic_truncation(s, v, "gamma") == gamma_closed_form(s, v)


def test_reports_for_small_s():
    for s in range(1, 25):
        assert proof_step_report(s).passed, s
    assert "bound.J1.tight" in {r.name for r in proof_step_report(1).relations}
    assert bound_scan(20) == []
    assert truncation_sign_scan(40) == []


def test_spec_scalar_points():
    (c,) = [x for x in scalar_inequality_check("eq5", [1], [1])]
    assert c.passed and F(69, 100) < c.rhs < F(7, 10)
    c = scalar_inequality_check("eq7", [1], [1])[0]
    assert dict(c.params)["x"] == 1 and c.passed
    (c,) = scalar_inequality_check("recip_bound", [1], [1])
    assert c.passed and c.lhs == 2 and c.rhs == F(7, 4)
    (c,) = scalar_inequality_check("log_tail_I", [2], [1])
    assert c.passed and F(-43, 100) < log_exponent(2, F(1), "gamma", 64).lo < F(-42, 100)


def test_scalar_rendering_matches_status():
    for kind in SCALAR_KINDS:
        for c in scalar_inequality_check(kind, range(2, 6)):
            assert c.status in ("pass", "fail", "inconclusive")
            ops = {"<": c.lhs < c.rhs, "<=": c.lhs <= c.rhs, ">": c.lhs > c.rhs, ">=": c.lhs >= c.rhs}
            assert ops[c.op] == c.passed, (kind, c.params)
            assert c.passed, (kind, c.params)


def test_ratio_step_fails_at_s1_for_large_v():
    # the 5/4 ratio bound needs v <= (2s+1)/5, which rules out v > 3/5 at s = 1
    res = {c.params[1][1]: c.passed for c in scalar_inequality_check("ratio_5_4", [1])}
    assert not res[F(3, 4)] and not res[F(9, 10)]
    assert res[F(1, 2)]


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        scalar_inequality_check("eq99")
