from fractions import Fraction as F
from pathlib import Path

import pytest

from tautrel import (
    bernoulli_table,
    build_c_table,
    build_q_table,
    diag_ode_residual,
    expand_closed_form,
    expand_w_deriv_closed,
    ode_residual,
    p_series,
    q_functional_equation_residual,
    remark_identity_failures,
    solve_series_ode,
    verify_coeff_identities,
)

GOLDEN = Path(__file__).parent / "golden"


# ------------------------------------------------------------------ q table

def test_q_table_hand_values():
    q = build_q_table(3)
    assert q.get(0, 0) == 1
    assert q.get(1, 0) == 1 and q.get(1, 1) == 5
    assert (q.get(2, 0), q.get(2, 1), q.get(2, 2)) == (1, 18, 60)
    assert (q.get(3, 0), q.get(3, 1), q.get(3, 2), q.get(3, 3)) == (1, 47, 442, 1105)


def test_q_table_outside_triangle_and_sizing():
    q = build_q_table(2)
    assert q.get(1, 2) == 0
    assert q.get(-1, 0) == 0
    assert q.get(2, -1) == 0
    with pytest.raises(ValueError):
        q.get(3, 0)
    with pytest.raises(ValueError):
        build_q_table(-1)


def test_q_table_positivity_and_subdiagonal_ratio(q60):
    for k in range(61):
        for j in range(k + 1):
            assert q60.get(k, j) > 0
    for k in range(1, 61):
        assert 10 * q60.get(k, k - 1) == (k + 1) * q60.get(k, k)


# ------------------------------------------------------------------ c table

def test_c_table_hand_values():
    c = build_c_table(build_q_table(3))
    assert c.get(1, 1) == F(5, 6) and c.get(1, 0) == F(1, 12)
    assert (c.get(2, 0), c.get(2, 1), c.get(2, 2)) == (0, 1, 5)
    assert c.get(3, 3) == F(1105, 18)
    assert c.get(3, 2) == F(221, 12)
    assert c.get(3, 1) == F(61, 60)
    assert c.get(3, 0) == F(-1, 360)


def test_c_table_vanishes_above_diagonal():
    c = build_c_table(build_q_table(4))
    assert c.get(1, 2) == 0 and c.get(3, 7) == 0
    with pytest.raises(ValueError):
        c.get(0, 0)
    with pytest.raises(ValueError):
        c.get(5, 0)


def test_c_column_zero_is_bernoulli(q20, c20):
    bern = bernoulli_table(21)
    for k in range(1, 21):
        assert c20.get(k, 0) == bern[k + 1] / (k * (k + 1))


# ---------------------------------------------------------------- alpha table

def test_alpha_initial_slice_and_known_columns():
    a = solve_series_ode(8, 6)
    bern = bernoulli_table(8)
    assert a.get(0, 0) == 0 and a.get(1, 0) == 0
    for k in range(2, 9):
        assert a.get(k, 0) == -bern[k] / (k * (k - 1))
    assert a.get(2, 0) == F(-1, 12)
    # x^0 column: signed Catalan over j, alpha[0][j+1] = (-1)^j C_j/(j+1)
    assert [a.get(0, j) for j in range(1, 5)] == [F(1), F(-1, 2), F(2, 3), F(-5, 4)]
    # x^1 column: (1/4)(-1)^(j-1) 4^j / j
    assert a.get(1, 1) == 1 and a.get(1, 2) == -2 and a.get(1, 3) == F(16, 3)
    # w^1 column is constant 1
    assert all(a.get(k, 1) == 1 for k in range(9))


def test_alpha_defining_equation_residual():
    a = solve_series_ode(8, 8)
    assert ode_residual(a).is_zero()


def test_alpha_requires_positive_orders():
    with pytest.raises(ValueError):
        solve_series_ode(0, 4)


# ------------------------------------------------------------- closed forms

def test_w_deriv_closed_spot_values(q20):
    s = expand_w_deriv_closed(q20, 6, 6)
    assert s.coeff(0, 0) == 1
    assert s.coeff(1, 0) == 1


def test_closed_form_spot_values(c20):
    s = expand_closed_form(c20, 6, 6)
    assert s.coeff(2, 0) == F(-1, 12)
    assert s.coeff(1, 1) == 1


def test_closed_forms_match_ode_solution(q20, c20):
    a = solve_series_ode(10, 9)
    assert expand_closed_form(c20, 10, 9) == a.to_series()
    gw = expand_w_deriv_closed(q20, 10, 9)
    assert gw.truncate((10, 8)) == a.to_series().derivative(1)


def test_closed_forms_demand_big_enough_tables():
    q = build_q_table(3)
    c = build_c_table(q)
    with pytest.raises(ValueError):
        expand_w_deriv_closed(q, 5, 5)
    with pytest.raises(ValueError):
        expand_closed_form(c, 5, 5)


def test_w_deriv_closed_golden_dump():
    q = build_q_table(8)
    expected = (GOLDEN / "w_deriv_closed_4_4.txt").read_text().rstrip("\n")
    assert expand_w_deriv_closed(q, 4, 4).dump() == expected


# ----------------------------------------------------------------- p series

def test_p_series_values():
    p = p_series(3)
    assert p.coeff(0) == 1
    assert p.coeff(1) == F(5, 6)
    assert p.coeff(2) == F(385, 72)
    assert p.coeff(3) == F(85085, 1296)


def test_p_series_recurrence():
    p = p_series(20)
    for k in range(20):
        assert 6 * (k + 1) * p.coeff(k + 1) == (6 * k + 1) * (6 * k + 5) * p.coeff(k)


# ----------------------------------------------------------- residual checks

def test_q_functional_equation(q20):
    assert q_functional_equation_residual(q20, 8, 8).is_zero()


def test_diag_ode(q20):
    assert diag_ode_residual(q20, 20).is_zero()


def test_remark_identity(q20):
    assert remark_identity_failures(q20, bernoulli_table(21), 20) == []


# ------------------------------------------------------------ identity suite

def test_verify_identities_small():
    rep = verify_coeff_identities(2)
    assert rep.ok
    assert rep.checked > 10


def test_verify_identities_medium():
    rep = verify_coeff_identities(12)
    assert rep.ok, rep.failures[:3]


def test_verify_identities_rejects_bad_order():
    with pytest.raises(ValueError):
        verify_coeff_identities(0)
