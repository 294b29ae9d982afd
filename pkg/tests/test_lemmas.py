from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from chvatal_verify.binom import switch_predicate
from chvatal_verify.lemmas import (
    b_value,
    eq3_integral,
    g_of,
    h_of,
    lemma1_conditions,
    lemma2_scan,
    main_integral,
)


def test_b_values():
    assert b_value(4, 2) == F(1, 16)
    assert b_value(3, 1) == F(2, 27)
    assert all(b_value(n, 0) == 0 for n in range(2, 8))
    with pytest.raises(ValueError):
        b_value(4, 3)


def test_criteria_at_n4_m2():
    c = lemma1_conditions(4, 2)
    assert (c.main.lhs, c.main.rhs) == (F(65, 1024), F(1, 16))
    assert (c.eq3.lhs, c.eq3.rhs) == (F(65, 32), 2)
    assert (c.eq4.lhs, c.eq4.rhs) == (F(109, 108), 1)
    assert (c.direct.lhs, c.direct.rhs) == (F(11, 16), F(175, 256))
    assert all(c.booleans().values()) and c.consistent


def test_criteria_all_false_past_the_switch():
    c = lemma1_conditions(5, 3)
    assert not any(c.booleans().values()) and c.consistent


def test_m0_omits_substituted_form():
    c = lemma1_conditions(2, 0)
    assert c.eq3 is None
    assert c.main.lhs == F(1, 8) and c.main.rhs == 0
    assert c.eq4.lhs == F(3, 2)
    assert set(c.booleans()) == {"direct", "main", "eq4"}
    with pytest.raises(ValueError):
        eq3_integral(2, 0)


def test_criteria_at_n3_m1():
    c = lemma1_conditions(3, 1)
    assert main_integral(3, 1) == F(7, 81) and c.main.rhs == F(6, 81)
    assert c.consistent


def test_criteria_domain():
    with pytest.raises(ValueError):
        lemma1_conditions(4, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 2))))
def test_criteria_agree_with_predicate(nm):
    n, m = nm
    c = lemma1_conditions(n, m)
    assert c.consistent
    assert c.direct.holds == switch_predicate(n, m)


def test_g_and_h_values():
    assert g_of(4, 1, 1) == F(9, 8)
    assert g_of(4, 2, 1) == F(8, 9)
    assert all(g_of(9, m, 0) == 1 for m in range(1, 8))
    assert h_of(4, 1) == F(109, 96)
    assert h_of(4, 2) == F(109, 108)
    assert h_of(3, 1) == F(13, 12)
    with pytest.raises(ValueError):
        g_of(4, 3, F(1, 2))


def test_small_monotonicity_scans():
    s = lemma2_scan(4, [1])
    assert s.passed
    assert s.h_values == ((1, F(109, 96)), (2, F(109, 108)))
    assert lemma2_scan(5, [F(1, 2)]).strictly_decreasing
    assert lemma2_scan(40).passed


def test_scan_rejects_bad_grid():
    with pytest.raises(ValueError):
        lemma2_scan(6, [F(3, 2)])


def test_h_is_the_criterion_integral():
    # h(m) >= 1 is exactly the integral criterion for q_m >= q_{m+1}
    for n in range(4, 25):
        for m in range(1, n - 1):
            assert (h_of(n, m) >= 1) == lemma1_conditions(n, m).direct.holds
