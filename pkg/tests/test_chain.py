from __future__ import annotations

import math
from fractions import Fraction

import pytest

from cayleybench import (FiniteFunction, StarConstants, complex_reduction_check,
                         enumerate_ball, fit_chain_constants, trace_proof_chain)
from cayleybench.seeds import rng


@pytest.fixture(scope="module")
def fitted(zz, zz_factors):
    constants = StarConstants(0, 1)
    c1, c2, k1, ws = fit_chain_constants(zz, zz_factors, constants, 2, 2)
    return zz, zz_factors, constants, c1, c2, k1, ws


def test_single_term_chain(fitted):
    zz, periph, constants, c1, c2, k1, ws = fitted
    x = FiniteFunction.delta(zz.normalize("a"))
    y = FiniteFunction.delta(zz.normalize("b"))
    rep = trace_proof_chain(x, y, 2, periph, constants, c1, c2, k1=k1, workspace=ws)
    assert rep.lhs_exact == 1
    assert rep.structural_ok
    assert rep.all_passed
    names = [s.name for s in rep.steps]
    assert names[0] == "decomposition_expansion"
    assert names[-1] == "cubic_envelope"


def test_zero_function_chain(fitted):
    zz, periph, constants, c1, c2, k1, ws = fitted
    x = FiniteFunction(zz, {}, "nonneg")
    y = FiniteFunction.delta(zz.normalize("b"))
    rep = trace_proof_chain(x, y, 1, periph, constants, c1, c2, k1=k1, workspace=ws)
    assert rep.all_passed
    assert rep.lhs_exact == 0
    assert all(s.lhs == 0.0 and s.rhs == 0.0 for s in rep.steps)


def test_seeded_chains_all_pass(fitted):
    zz, periph, constants, c1, c2, k1, ws = fitted
    ball = ws.ball
    gen = rng(42, "chain-test")
    for _ in range(4):
        r1 = int(gen.integers(1, 3))
        r2 = int(gen.integers(1, 3))
        def fn(r):
            vals = {}
            for i in ball.sphere_range(r):
                n = int(gen.integers(0, 5))
                if n:
                    vals[ball.element(i)] = Fraction(n, 4)
            return FiniteFunction(zz, vals, "nonneg")
        x, y = fn(r1), fn(r2)
        if x.is_zero() or y.is_zero():
            continue
        for p in range(abs(r1 - r2), r1 + r2 + 1):
            rep = trace_proof_chain(x, y, p, periph, constants, c1, c2, k1=k1, workspace=ws)
            assert rep.structural_ok
            assert rep.all_passed, [(s.name, s.lhs, s.rhs) for s in rep.steps if not s.passed]


def test_chain_regression_value(fitted):
    # frozen regression for one seeded instance
    zz, periph, constants, c1, c2, k1, ws = fitted
    ball = ws.ball
    gen = rng(0, "chain-regression")
    vals = {ball.element(i): Fraction(int(gen.integers(1, 4)), 2)
            for i in ball.sphere_range(2)}
    x = FiniteFunction(zz, vals, "nonneg")
    rep = trace_proof_chain(x, x, 2, periph, constants, c1, c2, k1=k1, workspace=ws)
    assert rep.all_passed
    assert rep.lhs_exact == Fraction(581, 8)


def test_undersized_count_envelope_fails_honestly(fitted):
    zz, periph, constants, _, _, _, ws = fitted
    x = FiniteFunction.delta(zz.normalize("a"))
    y = FiniteFunction.delta(zz.normalize("b"))
    rep = trace_proof_chain(x, y, 2, periph, constants, 0.0, 1.0, workspace=ws)
    failed = {s.name for s in rep.steps if not s.passed}
    assert "count_envelope" in failed


def test_chain_report_payload(fitted):
    zz, periph, constants, c1, c2, k1, ws = fitted
    x = FiniteFunction.delta(zz.normalize("a"))
    y = FiniteFunction.delta(zz.normalize("b"))
    rep = trace_proof_chain(x, y, 2, periph, constants, c1, c2, k1=k1, workspace=ws,
                            include_factors=True)
    payload = rep.to_payload()
    assert payload["all_pass"] is True
    assert payload["value"] == 1.0
    assert rep.x_factors and rep.y_factors


def test_complex_reduction_nonneg_is_slack(free2):
    ball = enumerate_ball(free2, 2)
    x = FiniteFunction.sphere_indicator(ball, 1)
    phi = FiniteFunction(free2, {ball.element(i): complex(1.0)
                                 for i in range(ball.size)}, "complex")
    p_value = float(x.l1()) / x.norm()  # Young constant for this x
    out = complex_reduction_check(x, phi, p_value)
    assert out["triangle_ok"] and out["doubled_ok"] and out["squares_add"]


def test_complex_reduction_sign_flip(free2):
    ball = enumerate_ball(free2, 1)
    x = FiniteFunction.sphere_indicator(ball, 1)
    psi = {ball.element(i): 1.0 for i in range(ball.size)}
    phi = FiniteFunction(free2, {e: complex(-v) for e, v in psi.items()}, "complex")
    p_value = float(x.l1()) / x.norm()
    out = complex_reduction_check(x, phi, p_value)
    # a global sign flip cannot change the convolution norm
    from cayleybench import convolve
    plain = convolve(x, FiniteFunction(free2, psi, "nonneg")).norm()
    assert out["norm_x_phi"] == pytest.approx(plain)
    assert out["doubled_ok"]


def test_complex_reduction_seeded(free2):
    ball = enumerate_ball(free2, 2)
    gen = rng(5, "cplx")
    x_vals = {ball.element(i): Fraction(int(gen.integers(0, 4)), 3)
              for i in range(ball.size)}
    x = FiniteFunction(free2, {e: v for e, v in x_vals.items() if v}, "nonneg")
    phi = FiniteFunction(free2, {ball.element(i): complex(gen.standard_normal(),
                                                          gen.standard_normal())
                                 for i in range(ball.size)}, "complex")
    p_value = math.sqrt(ball.size)
    out = complex_reduction_check(x, phi, p_value)
    assert out["triangle_ok"] and out["doubled_ok"]
