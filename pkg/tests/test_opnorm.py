from __future__ import annotations

import math

from cayleybench import FiniteFunction, enumerate_ball, op_norm_lower, op_norm_matrix


def test_delta_is_isometry(free2):
    x = FiniteFunction.delta(free2.normalize("ab"))
    assert abs(op_norm_lower(x, 2) - 1.0) < 1e-9


def test_line_indicator_converges_to_two(z1):
    ball = enumerate_ball(z1, 51)
    chi = FiniteFunction.sphere_indicator(ball, 1)
    v = op_norm_lower(chi, 50, ball=ball)
    assert abs(v - 2.0) < 0.01
    assert v <= 2.0 + 1e-9


def test_power_iteration_matches_dense_svd(z1, free2):
    ball_z = enumerate_ball(z1, 11)
    chi_z = FiniteFunction.sphere_indicator(ball_z, 1)
    assert abs(op_norm_lower(chi_z, 10, ball=ball_z, tol=1e-12)
               - op_norm_matrix(chi_z, 10, ball=ball_z)) < 1e-6
    ball_f = enumerate_ball(free2, 5)
    chi_f = FiniteFunction.sphere_indicator(ball_f, 1)
    assert abs(op_norm_lower(chi_f, 4, ball=ball_f, tol=1e-12)
               - op_norm_matrix(chi_f, 4, ball=ball_f)) < 1e-6


def test_monotone_in_r_and_at_least_l2(free2):
    ball = enumerate_ball(free2, 7)
    chi = FiniteFunction.sphere_indicator(ball, 1)
    values = [op_norm_lower(chi, R, ball=ball) for R in range(1, 7)]
    assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
    assert values[0] >= chi.norm() - 1e-9
    # the tree bound caps everything at 2 sqrt(3)
    assert values[-1] <= 2 * math.sqrt(3) + 1e-9


def test_zero_function(free2):
    x = FiniteFunction(free2, {}, "nonneg")
    assert op_norm_lower(x, 3) == 0.0


def test_general_support_uses_full_multiplication(free2):
    ball = enumerate_ball(free2, 4)
    x = FiniteFunction(free2, {free2.normalize("ab"): 1, free2.normalize("A"): 2}, "nonneg")
    assert abs(op_norm_lower(x, 2, ball=ball, tol=1e-12)
               - op_norm_matrix(x, 2, ball=ball)) < 1e-6
