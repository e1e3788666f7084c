from __future__ import annotations

import math

import pytest

from cayleybench import (GridDimensionError, PolynomialBound, assemble_p, best_constant,
                         brute_constant, rd_profile)


def test_line_spheres_p0(z1):
    est = best_constant(z1, 1, 1, 0, restarts=10)
    # attained at the uniform pair
    assert abs(est.lower - 1.0) < 1e-9
    assert est.lower <= est.upper + 1e-12


def test_free_spheres_p2(free2):
    est = best_constant(free2, 1, 1, 2, restarts=10)
    assert abs(est.lower - 1.0) < 1e-9
    assert est.upper <= 1.0 + 1e-12  # the g-slice certificate is exact here


def test_inadmissible_p_gives_zero(z1):
    assert best_constant(z1, 1, 1, 3).lower == 0.0
    assert brute_constant(z1, 1, 1, 3) == 0.0


def test_argmax_reproduces_lower(z1):
    from cayleybench import convolve, restrict_sphere
    est = best_constant(z1, 2, 1, 1, restarts=10)
    conv = restrict_sphere(convolve(est.x.as_floats(), est.y.as_floats()), 1)
    assert abs(conv.norm() - est.lower) < 1e-6


def test_brute_matches_alternating(z1, free2):
    for (model, r1, r2) in [(z1, 1, 1), (z1, 2, 1), (free2, 1, 1)]:
        for p in range(abs(r1 - r2), r1 + r2 + 1):
            est = best_constant(model, r1, r2, p, restarts=20)
            grid = brute_constant(model, r1, r2, p)
            assert abs(est.lower - grid) < 1e-4, (model.key, r1, r2, p)
            assert est.lower <= est.upper + 1e-12


def test_brute_dimension_guard(free2):
    with pytest.raises(GridDimensionError):
        brute_constant(free2, 1, 3, 2)  # 4 + 108 dimensions


def test_profile_shapes(z1):
    prof = rd_profile(z1, 2, restarts=5)
    assert prof.profile[0] == {"r": 0, "c": pytest.approx(1.0)}
    cells = {(r.r1, r.r2, r.p) for r in prof.rows}
    assert (2, 2, 0) in cells and (2, 1, 3) in cells
    for row in prof.rows:
        assert row.lower <= row.upper + 1e-12


def test_profile_flat_plane_young_cap(z2):
    prof = rd_profile(z2, 2, restarts=5)
    for entry in prof.profile[1:]:
        assert entry["c"] <= math.sqrt(4 * entry["r"]) + 1e-9


def test_profile_deterministic(z1):
    a = rd_profile(z1, 1, restarts=5, seed=3)
    b = rd_profile(z1, 1, restarts=5, seed=3)
    assert [r.lower for r in a.rows] == [r.lower for r in b.rows]


def test_assemble_p_examples():
    p1 = PolynomialBound((1, 1), role="p")  # r + 1
    assert assemble_p([p1], 1)(2) == pytest.approx(26.0)
    ones = [PolynomialBound((1,)), PolynomialBound((1,))]
    assert assemble_p(ones, 5)(9) == pytest.approx(3.0)
    assert assemble_p([], 2)(7) == pytest.approx(1.0)


def test_assemble_p_degree():
    p1 = PolynomialBound((0, 1), role="p")  # r
    assert assemble_p([p1], 0).degree() == 2
