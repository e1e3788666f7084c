"""Best-constant estimation for sphere-restricted convolution.

The cell (r1, r2, p) carries the nonnegative bilinear map
(x, y) -> (x*y)_p with x on S(r1) and y on S(r2).  ``best_constant`` brackets
sup ||(x*y)_p|| over nonnegative unit vectors: a lower bound from alternating
singular-vector maximization with restarts, and a certified upper bound from
the L1/Young estimate and the spectral norms of the tensor unfoldings (which
are diagonal Gram matrices here, so exact).
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .balls import BallIndex, DEFAULT_BALL_BUDGET, enumerate_ball
from .errors import GridDimensionError
from .functions import FiniteFunction
from .groups import GroupModel
from .seeds import rng as seeded_rng


class SphereCell:
    """Index tables of the map (x, y) -> (x*y)_p on spheres."""

    def __init__(self, model: GroupModel, r1: int, r2: int, p: int, ball: BallIndex):
        self.model = model
        self.r1, self.r2, self.p = r1, r2, p
        self.h_idx = list(ball.sphere_range(r1))
        self.k_idx = list(ball.sphere_range(r2))
        self.g_idx = list(ball.sphere_range(p))
        g_pos = {gi: t for t, gi in enumerate(self.g_idx)}
        eng = model.engine
        gi_list, hi_list, ki_list = [], [], []
        for a, hi in enumerate(self.h_idx):
            hv = ball.values[hi]
            for b, ki in enumerate(self.k_idx):
                g = eng.mul(hv, ball.values[ki])
                t = ball.index.get(g)
                if t is None:
                    continue
                t = g_pos.get(t)
                if t is None:
                    continue
                gi_list.append(t)
                hi_list.append(a)
                ki_list.append(b)
        self.tg = np.array(gi_list, dtype=np.int64)
        self.th = np.array(hi_list, dtype=np.int64)
        self.tk = np.array(ki_list, dtype=np.int64)
        self.ball = ball

    @property
    def m1(self):
        return len(self.h_idx)

    @property
    def m2(self):
        return len(self.k_idx)

    @property
    def mp(self):
        return len(self.g_idx)

    def objective(self, x: np.ndarray, y: np.ndarray) -> float:
        if len(self.tg) == 0:
            return 0.0
        w = np.bincount(self.tg, weights=x[self.th] * y[self.tk], minlength=self.mp)
        return float(np.linalg.norm(w))

    def matrix_for_y(self, y: np.ndarray) -> np.ndarray:
        a = np.zeros((self.mp, self.m1))
        np.add.at(a, (self.tg, self.th), y[self.tk])
        return a

    def matrix_for_x(self, x: np.ndarray) -> np.ndarray:
        a = np.zeros((self.mp, self.m2))
        np.add.at(a, (self.tg, self.tk), x[self.th])
        return a

    def certified_upper(self) -> float:
        """min of the Young/L1 bound and the three unfolding spectral norms."""
        young = math.sqrt(min(self.m1, self.m2))
        bounds = [young]
        if len(self.tg):
            for t in (self.tg, self.th, self.tk):
                counts = np.bincount(t)
                bounds.append(math.sqrt(float(counts.max())))
        else:
            bounds.append(0.0)
        return min(bounds)


@dataclass
class BestConstantEstimate:
    r1: int
    r2: int
    p: int
    lower: float
    upper: float
    x: Optional[FiniteFunction]
    y: Optional[FiniteFunction]
    restarts_used: int
    tol: float

    def to_payload(self) -> dict:
        return {
            "r1": self.r1, "r2": self.r2, "p": self.p,
            "lower": self.lower, "upper": self.upper,
            "restarts": self.restarts_used,
        }


def _top_singular_step(a: np.ndarray, warm: np.ndarray, iters: int = 60,
                       tol: float = 1e-12) -> np.ndarray:
    """Dominant right singular vector of the nonnegative matrix a.

    Power iteration on a^T a keeps a nonnegative start nonnegative; a final
    clip guards round-off.
    """
    v = warm.copy()
    nv = np.linalg.norm(v)
    if nv == 0:
        v = np.full(a.shape[1], 1.0 / math.sqrt(a.shape[1]))
    else:
        v /= nv
    prev = 0.0
    for _ in range(iters):
        u = a @ v
        s = np.linalg.norm(u)
        if s == 0:
            return v
        w = a.T @ u
        nw = np.linalg.norm(w)
        if nw == 0:
            return v
        v = w / nw
        if abs(s - prev) <= tol * max(s, 1e-300):
            break
        prev = s
    np.clip(v, 0.0, None, out=v)
    n = np.linalg.norm(v)
    return v / n if n else v


def _alternate(cell: SphereCell, x0: np.ndarray, y0: np.ndarray, tol: float,
               max_alt: int = 200):
    x, y = x0, y0
    obj = cell.objective(x, y)
    for _ in range(max_alt):
        a = cell.matrix_for_y(y)
        x = _top_singular_step(a, x)
        b = cell.matrix_for_x(x)
        y = _top_singular_step(b, y)
        new = cell.objective(x, y)
        if abs(new - obj) <= tol * max(new, 1e-300):
            obj = new
            break
        obj = new
    return obj, x, y


def best_constant(model: GroupModel, r1: int, r2: int, p: int, restarts: int = 50,
                  tol: float = 1e-9, seed: int = 0, ball: BallIndex | None = None,
                  budget: int = DEFAULT_BALL_BUDGET) -> BestConstantEstimate:
    """Bracket sup ||(x*y)_p|| over nonnegative unit x on S(r1), y on S(r2)."""
    radius = max(r1, r2, p)
    if p < abs(r1 - r2) or p > r1 + r2:
        return BestConstantEstimate(r1, r2, p, 0.0, 0.0, None, None, 0, tol)
    if ball is None or ball.radius < radius:
        ball = enumerate_ball(model, radius, budget=budget)
    cell = SphereCell(model, r1, r2, p, ball)
    if len(cell.tg) == 0:
        return BestConstantEstimate(r1, r2, p, 0.0, 0.0, None, None, 0, tol)
    gen = seeded_rng(seed, f"best_constant:{r1}:{r2}:{p}")
    best = (-1.0, None, None)
    used = 0
    for k in range(max(1, restarts)):
        if k == 0:
            x0 = np.full(cell.m1, 1.0 / math.sqrt(cell.m1))
            y0 = np.full(cell.m2, 1.0 / math.sqrt(cell.m2))
        else:
            x0 = np.abs(gen.standard_normal(cell.m1))
            y0 = np.abs(gen.standard_normal(cell.m2))
            x0 /= np.linalg.norm(x0)
            y0 /= np.linalg.norm(y0)
        obj, x, y = _alternate(cell, x0, y0, tol)
        used += 1
        if obj > best[0]:
            best = (obj, x, y)
    obj, x, y = best
    fx = FiniteFunction(model, {ball.element(i): float(v)
                                for i, v in zip(cell.h_idx, x) if v > 0}, "nonneg")
    fy = FiniteFunction(model, {ball.element(i): float(v)
                                for i, v in zip(cell.k_idx, y) if v > 0}, "nonneg")
    upper = cell.certified_upper()
    # the alternating estimate can drift above the exact certificate by
    # float round-off; the certificate wins
    return BestConstantEstimate(r1, r2, p, min(obj, upper), upper, fx, fy, used, tol)


def _nonneg_grid(dim: int, resolution: int):
    """Unit vectors from nonnegative integer compositions of ``resolution``.

    The resolution is lowered in high dimension to keep the grid below a few
    hundred points per side; the local ascent afterwards does the refinement.
    """
    while resolution > 1 and math.comb(resolution + dim - 1, dim - 1) > 400:
        resolution -= 1
    for comp in itertools.combinations_with_replacement(range(dim), resolution):
        v = np.zeros(dim)
        for i in comp:
            v[i] += 1.0
        yield v / np.linalg.norm(v)


def brute_constant(model: GroupModel, r1: int, r2: int, p: int, grid_resolution: int = 8,
                   ball: BallIndex | None = None,
                   budget: int = DEFAULT_BALL_BUDGET) -> float:
    """Dense grid search over the product of nonnegative unit spheres, refined
    by projected-gradient ascent.  Test oracle; dimensions capped at 36."""
    radius = max(r1, r2, p)
    if p < abs(r1 - r2) or p > r1 + r2:
        return 0.0
    if ball is None or ball.radius < radius:
        ball = enumerate_ball(model, radius, budget=budget)
    cell = SphereCell(model, r1, r2, p, ball)
    if cell.m1 + cell.m2 > 36:
        raise GridDimensionError(
            f"grid search limited to 36 total dimensions, got {cell.m1 + cell.m2}")
    if len(cell.tg) == 0:
        return 0.0
    xs = list(_nonneg_grid(cell.m1, grid_resolution))
    ys = list(_nonneg_grid(cell.m2, grid_resolution))
    best = (-1.0, None, None)
    for x in xs:
        xh = x[cell.th]
        for y in ys:
            w = np.bincount(cell.tg, weights=xh * y[cell.tk], minlength=cell.mp)
            obj = float(np.linalg.norm(w))
            if obj > best[0]:
                best = (obj, x, y)
    obj, x, y = best
    # local ascent, projected to the nonnegative unit spheres
    eta = 0.5
    for _ in range(400):
        a = cell.matrix_for_y(y)
        gx = a.T @ (a @ x)
        x2 = np.clip(x + eta * gx, 0.0, None)
        n = np.linalg.norm(x2)
        if n:
            x2 /= n
        b = cell.matrix_for_x(x2)
        gy = b.T @ (b @ y)
        y2 = np.clip(y + eta * gy, 0.0, None)
        n = np.linalg.norm(y2)
        if n:
            y2 /= n
        new = cell.objective(x2, y2)
        if new >= obj:
            x, y, obj = x2, y2, new
        else:
            eta *= 0.5
            if eta < 1e-8:
                break
    return obj


@dataclass
class RdProfile:
    r_max: int
    rows: list                   # BestConstantEstimate per cell
    profile: list                # [{"r": r, "c": max lower over cells with r1,r2 <= r}]

    def to_payload(self) -> dict:
        return {
            "r_max": self.r_max,
            "rows": [e.to_payload() for e in self.rows],
            "profile": self.profile,
        }


def rd_profile(model: GroupModel, r_max: int, restarts: int = 50, tol: float = 1e-9,
               seed: int = 0, ball: BallIndex | None = None, workers: int = 1,
               budget: int = DEFAULT_BALL_BUDGET) -> RdProfile:
    """best_constant over every cell with r1, r2 <= r_max and admissible p."""
    if ball is None or ball.radius < 2 * r_max:
        ball = enumerate_ball(model, 2 * r_max, budget=budget)
    cells = []
    for r1 in range(r_max + 1):
        for r2 in range(r_max + 1):
            for p in range(abs(r1 - r2), r1 + r2 + 1):
                cells.append((r1, r2, p))

    def run(args):
        r1, r2, p = args
        return best_constant(model, r1, r2, p, restarts=restarts, tol=tol, seed=seed, ball=ball)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, cells))
    else:
        rows = [run(c) for c in cells]
    profile = []
    for r in range(r_max + 1):
        c = max((row.lower for row in rows if row.r1 <= r and row.r2 <= r), default=0.0)
        profile.append({"r": r, "c": c})
    return RdProfile(r_max, rows, profile)
