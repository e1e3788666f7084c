"""Operator-norm lower bounds for convolution by a fixed function.

``op_norm_lower(x, R)`` is the largest singular value of the linear map
phi -> x * phi from functions on the ball of radius R to functions on the
ball of radius r_x + R, where r_x bounds the support of x.  It is computed by
power iteration on the normal operator and is nondecreasing in R, a lower
bound of the true convolution operator norm.
"""

from __future__ import annotations

import math

import numpy as np

from .balls import BallIndex, DEFAULT_BALL_BUDGET, enumerate_ball
from .errors import WorkbenchError
from .functions import FiniteFunction
from .groups import Element


def _permutation_tables(ball: BallIndex, h: Element):
    """(t_div, t_mul): ball index i -> index of h^-1 * v_i (or -1), and of h * v_i."""
    model = ball.model
    word = h.word
    if len(word) == 1:
        letter = word[0]
        inv_letter = model.inverse_letter(letter)
        return ball.left_mult_table(inv_letter), ball.left_mult_table(letter)
    eng = model.engine
    hv = h.value
    hinv = eng.inv(hv)
    idx = ball.index
    n = ball.size
    t_div = np.empty(n, dtype=np.int64)
    t_mul = np.empty(n, dtype=np.int64)
    for i, v in enumerate(ball.values):
        t_div[i] = idx.get(eng.mul(hinv, v), -1)
        t_mul[i] = idx.get(eng.mul(hv, v), -1)
    return t_div, t_mul


def op_norm_lower(x: FiniteFunction, R: int, ball: BallIndex | None = None,
                  tol: float = 1e-8, max_iter: int = 200_000,
                  budget: int = DEFAULT_BALL_BUDGET) -> float:
    """Largest singular value of phi -> (x * phi)|_{B(r_x + R)} for phi on B(R).

    Power iteration on the normal operator, deterministic all-ones start,
    relative tolerance ``tol`` on successive estimates.  The estimate is a
    Rayleigh quotient, hence a valid lower bound at every iteration.
    """
    if x.is_zero():
        return 0.0
    model = x.model
    rx = x.max_length()
    radius = rx + R
    if ball is None or ball.radius < radius:
        ball = enumerate_ball(model, radius, budget=budget)
    n_dom = ball.growth(R)
    n_ran = ball.growth(min(radius, ball.radius))
    supp = x.items_sorted()
    coeffs = np.array([float(v) for _, v in supp])
    m_gather = []   # (coeff, positions in range, sources in domain)
    mt_gather = []  # (coeff, positions in domain, sources in range)
    for (e, v) in supp:
        t_div, t_mul = _permutation_tables(ball, e)
        t = t_div[:n_ran]
        pos = np.nonzero((t >= 0) & (t < n_dom))[0]
        m_gather.append((float(v), pos, t[pos]))
        t = t_mul[:n_dom]
        pos = np.nonzero((t >= 0) & (t < n_ran))[0]
        mt_gather.append((float(v), pos, t[pos]))

    def apply_m(phi):
        # (x*phi)(v) = sum_h x(h) phi(h^-1 v); positions are unique per h
        out = np.zeros(n_ran)
        for c, pos, src in m_gather:
            out[pos] += c * phi[src]
        return out

    def apply_mt(w):
        # (M^T w)(u) = sum_h x(h) w(h u)
        out = np.zeros(n_dom)
        for c, pos, src in mt_gather:
            out[pos] += c * w[src]
        return out

    v = np.full(n_dom, 1.0 / math.sqrt(n_dom))
    sigma = 0.0
    for _ in range(max_iter):
        w = apply_m(v)
        new_sigma = float(np.linalg.norm(w))
        if new_sigma == 0.0:
            return 0.0
        u = apply_mt(w)
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            return new_sigma
        v = u / nu
        if abs(new_sigma - sigma) <= tol * max(new_sigma, 1e-300):
            sigma = new_sigma
            break
        sigma = new_sigma
    return sigma


def op_norm_matrix(x: FiniteFunction, R: int, ball: BallIndex | None = None,
                   budget: int = DEFAULT_BALL_BUDGET) -> float:
    """Dense exact singular value of the same finite-rank map (small balls only).

    Independent cross-check for :func:`op_norm_lower`.
    """
    model = x.model
    rx = x.max_length()
    radius = rx + R
    if ball is None or ball.radius < radius:
        ball = enumerate_ball(model, radius, budget=budget)
    n_dom = ball.growth(R)
    n_ran = ball.growth(radius)
    if n_dom * n_ran > 40_000_000:
        raise WorkbenchError("ball too large for the dense cross-check")
    eng = model.engine
    m = np.zeros((n_ran, n_dom))
    idx = ball.index
    for h, c in x.items_sorted():
        hv = h.value
        for j in range(n_dom):
            g = eng.mul(hv, ball.values[j])
            i = idx.get(g)
            if i is not None and i < n_ran:
                m[i, j] += float(c)
    return float(np.linalg.svd(m, compute_uv=False)[0])
