from __future__ import annotations

from fractions import Fraction

import pytest

from cayleybench import (FiniteFunction, ModelMismatchError, WorkbenchError, convolve,
                         enumerate_ball, restrict_sphere)
from cayleybench.seeds import rng


def test_delta_convolution(free2):
    a, b = free2.generator(0), free2.generator(1)
    conv = convolve(FiniteFunction.delta(a), FiniteFunction.delta(b))
    assert conv.values == {free2.normalize("ab"): 1}


def test_sphere_indicator_convolution_exact(free2_ball5, free2):
    chi = FiniteFunction.sphere_indicator(free2_ball5, 1)
    conv = convolve(chi, chi)
    # 16 ordered pairs, 4 cancel to the identity, 12 distinct length-2 products
    assert conv[free2.identity] == 4
    two = {e: v for e, v in conv.values.items() if e.length == 2}
    assert len(two) == 12
    assert set(two.values()) == {Fraction(1)}


def test_line_indicator_convolution(z1):
    ball = enumerate_ball(z1, 2)
    chi = FiniteFunction.sphere_indicator(ball, 1)
    conv = convolve(chi, chi)
    assert {str(e): v for e, v in conv.items_sorted()} == {
        "1": Fraction(2), "aa": Fraction(1), "AA": Fraction(1)}


def test_restrict_sphere(free2_ball5):
    chi = FiniteFunction.sphere_indicator(free2_ball5, 1)
    conv = convolve(chi, chi)
    part = restrict_sphere(conv, 2)
    assert len(part) == 12
    assert part.norm_sq() == 12
    assert restrict_sphere(conv, 3).is_zero()  # parity: no length-3 products
    zero = restrict_sphere(conv, 0)
    assert zero.norm_sq() == 16


def test_orthogonal_sphere_decomposition(free2_ball5):
    # ||x*y||^2 = sum over p of ||(x*y)_p||^2, exactly in rationals
    gen = rng(11, "orth")
    model = free2_ball5.model
    ball = free2_ball5
    def rand_fn():
        vals = {}
        for i in range(ball.growth(2)):
            n = int(gen.integers(0, 4))
            if n:
                vals[ball.element(i)] = Fraction(n, 3)
        return FiniteFunction(model, vals, "nonneg")
    for _ in range(5):
        x, y = rand_fn(), rand_fn()
        conv = convolve(x, y)
        total = conv.norm_sq()
        parts = sum(restrict_sphere(conv, p).norm_sq() for p in range(5))
        assert total == parts


def test_young_bound(free2_ball5):
    gen = rng(12, "young")
    ball = free2_ball5
    model = ball.model
    for _ in range(5):
        vals_x = {ball.element(int(i)): Fraction(int(gen.integers(1, 5)), 4)
                  for i in gen.integers(0, ball.growth(2), size=6)}
        vals_y = {ball.element(int(i)): Fraction(int(gen.integers(1, 5)), 4)
                  for i in gen.integers(0, ball.growth(2), size=6)}
        x = FiniteFunction(model, vals_x, "nonneg")
        y = FiniteFunction(model, vals_y, "nonneg")
        assert convolve(x, y).norm() <= float(x.l1()) * y.norm() * (1 + 1e-12)


def test_domain_validation(free2):
    a = free2.generator(0)
    with pytest.raises(WorkbenchError):
        FiniteFunction(free2, {a: -1}, "nonneg")
    with pytest.raises(WorkbenchError):
        FiniteFunction(free2, {a: 1 + 2j}, "real")
    f = FiniteFunction(free2, {a: 0}, "nonneg")
    assert f.is_zero()


def test_model_mismatch(free2, z2):
    fa = FiniteFunction.delta(free2.generator(0))
    fb = FiniteFunction.delta(z2.generator(0))
    with pytest.raises(ModelMismatchError):
        convolve(fa, fb)


def test_complex_norms(free2):
    a = free2.generator(0)
    f = FiniteFunction(free2, {a: 3 + 4j}, "complex")
    assert f.norm() == 5.0
    assert f.l1() == 5.0
