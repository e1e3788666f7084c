"""Numerical tracer for the sphere-convolution inequality chain.

Starting from ||(x*y)_p||^2 the tracer computes each successive majorant:
the decomposition-expanded sum, the Cauchy-Schwarz step weighted by the
linear decomposition-count envelope, the split into subgroup-supported
factor functions, the subgroup convolution bound through the assembled
polynomial, and finally the multiplicity bounds yielding the cubic overall
envelope.  Every step is an actual inequality between two computed numbers
and is checked at relative tolerance 1e-9.

Decompositions are grouped by (left, middle, right, subgroup); the subgroup
tag keeps middle parts shared between subgroups (such as the identity) from
mixing factor functions across subgroups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .balls import BallIndex, DEFAULT_BALL_BUDGET, enumerate_ball
from .decomp import DecompositionContext, decomposition_table
from .fitting import fit_linear_envelope
from .functions import FiniteFunction, convolve, restrict_sphere
from .groups import Element, GroupModel
from .peripherals import PeripheralStructure
from .polynomials import PolynomialBound, assemble_p, linear_envelope_poly
from .triangles import StarConstants

REL_TOL = 1e-9


@dataclass
class ChainStep:
    name: str
    lhs: float
    rhs: float
    passed: bool

    def to_payload(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "pass": self.passed}


@dataclass
class ChainReport:
    r1: int
    r2: int
    p: int
    steps: list
    structural_ok: bool
    missing_pair: Optional[tuple]
    dg_max: int
    kx: int
    ky: int
    lhs_exact: object           # ||(x*y)_p||^2, exact when inputs rational
    final_bound: float
    universal_bound: Optional[float]
    x_factors: list = field(default_factory=list)
    y_factors: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.structural_ok and all(s.passed for s in self.steps)

    def to_payload(self) -> dict:
        return {
            "r1": self.r1, "r2": self.r2, "p": self.p,
            "steps": [s.to_payload() for s in self.steps],
            "structural_ok": self.structural_ok,
            "missing_pair": [str(e) for e in self.missing_pair] if self.missing_pair else None,
            "dg_max": self.dg_max, "kx": self.kx, "ky": self.ky,
            "value": float(self.lhs_exact),
            "final_bound": self.final_bound,
            "universal_bound": self.universal_bound,
            "all_pass": self.all_passed,
        }


class ChainWorkspace:
    """Shared balls, contexts, and decomposition tables across chain calls."""

    def __init__(self, model: GroupModel, peripherals: PeripheralStructure,
                 constants: StarConstants, radius: int,
                 budget: int = DEFAULT_BALL_BUDGET):
        self.model = model
        self.peripherals = peripherals
        self.constants = constants
        self.ball = enumerate_ball(model, radius, budget=budget)
        self.context = DecompositionContext(model, peripherals, constants)
        self.tables: dict = {}

    def table(self, r1: int, r2: int, p: int) -> dict:
        key = (r1, r2, p)
        got = self.tables.get(key)
        if got is None:
            got = decomposition_table(self.model, self.peripherals, self.constants,
                                      r1, r2, p, self.ball, self.context)
            self.tables[key] = got
        return got


def default_peripheral_bounds(peripherals: PeripheralStructure, rho_max: int,
                              ball: BallIndex) -> list[PolynomialBound]:
    """A valid degree-1 bound per peripheral from its measured growth.

    The Young estimate gives ||X*Y|| <= sqrt(|supp X|) ||X|| ||Y|| for X
    supported in the radius-rho section of the subgroup, so any polynomial
    dominating sqrt(growth) on [0, rho_max] works.
    """
    out = []
    for sub in peripherals:
        members = sub.elements_in_ball(ball)
        lengths = [ball.length_of_index(i) for i in members]
        values = []
        for rho in range(rho_max + 1):
            values.append(math.sqrt(sum(1 for L in lengths if L <= rho)))
        out.append(linear_envelope_poly(values, role=f"peripheral:{sub.name}"))
    return out


def _passes(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1.0 + REL_TOL) + 1e-12


def trace_proof_chain(x: FiniteFunction, y: FiniteFunction, p: int,
                      peripherals: PeripheralStructure, constants: StarConstants,
                      c1: float, c2: float, k1: Optional[float] = None,
                      p_bounds: Optional[list[PolynomialBound]] = None,
                      workspace: Optional[ChainWorkspace] = None,
                      include_factors: bool = False,
                      budget: int = DEFAULT_BALL_BUDGET) -> ChainReport:
    """Trace and verify the full majorization chain for one (x, y, p) instance.

    ``x`` and ``y`` must be nonnegative and sphere-supported; ``c1, c2`` are
    the fitted linear envelope for decomposition counts, ``k1`` the fitted
    slope for the x-side multiplicity (optional; enables the closing cubic
    bound Q(r) = (c1*r + c2)^2 * k1 * r).
    """
    model = x.model
    if x.domain != "nonneg" or y.domain != "nonneg":
        raise ValueError("chain tracing needs nonnegative functions")
    if x.is_zero() or y.is_zero():
        names = ["decomposition_expansion", "cauchy_schwarz", "count_envelope",
                 "factor_split", "subgroup_convolution", "peripheral_bound",
                 "assembled_polynomial", "pair_regroup", "pair_product", "multiplicity"]
        steps = [ChainStep(n, 0.0, 0.0, True) for n in names]
        if k1 is not None:
            steps.append(ChainStep("cubic_envelope", 0.0, 0.0, True))
        return ChainReport(x.max_length(), y.max_length(), p, steps, True, None,
                           0, 0, 0, Fraction(0), 0.0, 0.0 if k1 is not None else None)
    r1 = x.max_length()
    r2 = y.max_length()
    if any(e.length != r1 for e in x.values) or any(e.length != r2 for e in y.values):
        raise ValueError("chain tracing needs sphere-supported functions")
    if workspace is None:
        radius = max(r1 + r2, p, r1, r2)
        workspace = ChainWorkspace(model, peripherals, constants, radius, budget=budget)
    ball = workspace.ball
    eng = model.engine
    kappa = constants.kappa
    count_bound = c1 * r1 + c2

    xv = {e.value: float(v) for e, v in x.values.items()}
    yv = {e.value: float(v) for e, v in y.values.items()}
    norm_x_sq = float(x.norm_sq())
    norm_y_sq = float(y.norm_sq())

    # exact left-hand side
    conv = restrict_sphere(convolve(x, y), p)
    lhs_exact = conv.norm_sq()
    v0 = float(lhs_exact)

    table = workspace.table(r1, r2, p)

    # group tagged tuples per g by (g1, mid_g, g2, subgroup)
    structural_ok = True
    missing_pair = None
    v1 = 0.0
    per_g_groups = {}
    for gi, tuples in table.items():
        groups: dict = {}
        for sub, g1, g2, g3, mid_g, mid_h, mid_k in tuples:
            groups.setdefault((g1, mid_g, g2, sub), []).append((mid_h, mid_k, g3))
        per_g_groups[gi] = groups
        g_value = ball.values[gi]
        total = 0.0
        covered = set()
        for (g1, mid_g, g2, sub), fibers in groups.items():
            for mid_h, mid_k, g3 in fibers:
                h = eng.mul(eng.mul(g1, mid_h), g3)
                k = eng.mul(eng.mul(eng.inv(g3), mid_k), g2)
                cx = xv.get(h)
                if cx is None:
                    continue
                cy = yv.get(k)
                if cy is None:
                    continue
                total += cx * cy
                covered.add(h)
        v1 += total * total
        if structural_ok:
            for hv, cx in xv.items():
                kv = eng.mul(eng.inv(hv), g_value)
                if yv.get(kv) and hv not in covered:
                    structural_ok = False
                    missing_pair = (Element(model, hv), Element(model, kv))
                    break

    steps = [ChainStep("decomposition_expansion", v0, v1, _passes(v0, v1))]

    # Cauchy-Schwarz over the decomposition groups, then the count envelope
    v1b = 0.0
    sum_sq = 0.0
    dg_max = 0
    inner_sums = {}
    for gi, groups in per_g_groups.items():
        n_d = len(groups)
        dg_max = max(dg_max, n_d)
        sq = 0.0
        sums = {}
        for d, fibers in groups.items():
            g1, mid_g, g2, sub = d
            s = 0.0
            for mid_h, mid_k, g3 in fibers:
                h = eng.mul(eng.mul(g1, mid_h), g3)
                k = eng.mul(eng.mul(eng.inv(g3), mid_k), g2)
                s += xv.get(h, 0.0) * yv.get(k, 0.0)
            sums[d] = s
            sq += s * s
        inner_sums[gi] = sums
        v1b += n_d * sq
        sum_sq += sq
    steps.append(ChainStep("cauchy_schwarz", v1, v1b, _passes(v1, v1b)))
    v2 = count_bound * sum_sq
    steps.append(ChainStep("count_envelope", v1b, v2, _passes(v1b, v2)))

    # factor functions X, Y per decomposition group
    x_factors = {}
    y_factors = {}
    for gi, groups in per_g_groups.items():
        for d, fibers in groups.items():
            g1, mid_g, g2, sub = d
            by_e: dict = {}
            for mid_h, mid_k, g3 in fibers:
                by_e.setdefault((mid_h, mid_k), []).append(g3)
            xf: dict = {}
            yf: dict = {}
            for (mid_h, mid_k), g3s in by_e.items():
                sx = 0.0
                sy = 0.0
                for g3 in g3s:
                    h = eng.mul(eng.mul(g1, mid_h), g3)
                    k = eng.mul(eng.mul(eng.inv(g3), mid_k), g2)
                    sx += xv.get(h, 0.0) ** 2
                    sy += yv.get(k, 0.0) ** 2
                xf[mid_h] = math.sqrt(sx)
                yf[mid_k] = math.sqrt(sy)
            x_factors[(gi, d)] = xf
            y_factors[(gi, d)] = yf

    # split step: bracket sums of X*Y dominate the plain sums
    v3_inner = 0.0
    for (gi, d), xf in x_factors.items():
        g1, mid_g, g2, sub = d
        yf = y_factors[(gi, d)]
        bracket = 0.0
        for mid_h in xf:
            mid_k = eng.mul(eng.inv(mid_h), mid_g)
            bracket += xf[mid_h] * yf.get(mid_k, 0.0)
        v3_inner += bracket * bracket
    v3 = count_bound * v3_inner
    steps.append(ChainStep("factor_split", v2, v3, _passes(v2, v3)))

    # subgroup convolution bound
    if p_bounds is None:
        p_bounds = default_peripheral_bounds(peripherals, r1 + 2 * kappa, ball)
    p_poly = assemble_p(p_bounds, kappa)
    s_conv = 0.0
    s_pi = 0.0
    rho = r1 + 2 * kappa
    conv_ok = True
    for (gi, d), xf in x_factors.items():
        g1, mid_g, g2, sub = d
        yf = y_factors[(gi, d)]
        fx = FiniteFunction(model, {Element(model, v): c for v, c in xf.items() if c > 0},
                            "nonneg")
        fy = FiniteFunction(model, {Element(model, v): c for v, c in yf.items() if c > 0},
                            "nonneg")
        nxy = convolve(fx, fy).norm() if (len(fx) and len(fy)) else 0.0
        pi_val = p_bounds[sub](rho)
        nx = fx.norm()
        ny = fy.norm()
        s_conv += nxy * nxy
        s_pi += (pi_val * nx * ny) ** 2
        if not _passes(nxy, pi_val * nx * ny):
            conv_ok = False
    steps.append(ChainStep("subgroup_convolution", v3, count_bound * s_conv,
                           _passes(v3, count_bound * s_conv)))
    steps.append(ChainStep("peripheral_bound", count_bound * s_conv, count_bound * s_pi,
                           conv_ok and _passes(count_bound * s_conv, count_bound * s_pi)))

    sum_norms = sum(
        (sum(c * c for c in xf.values())) * (sum(c * c for c in y_factors[key].values()))
        for key, xf in x_factors.items()
    )
    s3 = count_bound * p_poly(r1) * sum_norms
    steps.append(ChainStep("assembled_polynomial", count_bound * s_pi, s3,
                           _passes(count_bound * s_pi, s3)))

    # regroup by (left, right) pair, then multiplicity
    a_bar: dict = {}
    b_bar: dict = {}
    for (gi, d), xf in x_factors.items():
        g1, mid_g, g2, sub = d
        key = (g1, g2)
        a_bar[key] = a_bar.get(key, 0.0) + sum(c * c for c in xf.values())
        b_bar[key] = b_bar.get(key, 0.0) + sum(c * c for c in y_factors[(gi, d)].values())
    v4 = count_bound * p_poly(r1) * sum(a_bar[k] * b_bar[k] for k in a_bar)
    steps.append(ChainStep("pair_regroup", s3, v4, _passes(s3, v4)))
    fx_tot = sum(a_bar.values())
    fy_tot = sum(b_bar.values())
    v5 = count_bound * p_poly(r1) * fx_tot * fy_tot
    steps.append(ChainStep("pair_product", v4, v5, _passes(v4, v5)))

    # structural multiplicities: how often each x(h)^2 / y(k)^2 term appears
    mx: dict = {}
    my: dict = {}
    for gi, groups in per_g_groups.items():
        for d, fibers in groups.items():
            g1, mid_g, g2, sub = d
            for mid_h, mid_k, g3 in fibers:
                h = eng.mul(eng.mul(g1, mid_h), g3)
                k = eng.mul(eng.mul(eng.inv(g3), mid_k), g2)
                mx[h] = mx.get(h, 0) + 1
                my[k] = my.get(k, 0) + 1
    kx = max(mx.values(), default=0)
    ky = max(my.values(), default=0)
    final_bound = count_bound * p_poly(r1) * kx * ky * norm_x_sq * norm_y_sq
    steps.append(ChainStep("multiplicity", v5, final_bound, _passes(v5, final_bound)))

    universal = None
    if k1 is not None:
        q_r1 = (c1 * r1 + c2) ** 2 * k1 * max(r1, 1)
        universal = q_r1 * p_poly(r1) * norm_x_sq * norm_y_sq
        ok = (kx <= k1 * max(r1, 1) + 1e-9) and (ky <= count_bound + 1e-9)
        steps.append(ChainStep("cubic_envelope", final_bound, universal,
                               ok and _passes(final_bound, universal)))

    report = ChainReport(
        r1, r2, p, steps, structural_ok, missing_pair, dg_max, kx, ky,
        lhs_exact, final_bound, universal,
    )
    if include_factors:
        report.x_factors = _factor_payload(model, ball, x_factors)
        report.y_factors = _factor_payload(model, ball, y_factors)
    return report


def _factor_payload(model, ball, factors):
    out = []
    for (gi, d), f in sorted(factors.items(), key=lambda t: t[0][0]):
        g1, mid_g, g2, sub = d
        out.append({
            "g": model.word_str(ball.word_of_index(gi)),
            "left": str(Element(model, g1)),
            "right": str(Element(model, g2)),
            "peripheral": sub,
            "values": {str(Element(model, v)): c for v, c in sorted(
                f.items(), key=lambda t: (model.engine.length(t[0]),))},
        })
    return out


def fit_chain_constants(model: GroupModel, peripherals: PeripheralStructure,
                        constants: StarConstants, r1_max: int, r2_max: int,
                        workspace: Optional[ChainWorkspace] = None,
                        budget: int = DEFAULT_BALL_BUDGET):
    """Fit (c1, c2, k1) so that decomposition-group counts, y-multiplicities
    (vs c1*r1 + c2) and x-multiplicities (vs k1*r1) hold on all cells with
    1 <= r1 <= r1_max, 1 <= r2 <= r2_max.

    Returns (c1, c2, k1, workspace); the workspace carries the cached tables.
    """
    if workspace is None:
        radius = r1_max + r2_max
        workspace = ChainWorkspace(model, peripherals, constants, radius, budget=budget)
    ball = workspace.ball
    eng = model.engine
    per_r1_ky: dict[int, int] = {}
    k1 = 0.0
    for r1 in range(1, r1_max + 1):
        worst_count = 0
        worst_ky = 0
        worst_kx = 0
        for r2 in range(1, r2_max + 1):
            for p in range(abs(r1 - r2), r1 + r2 + 1):
                table = workspace.table(r1, r2, p)
                mx: dict = {}
                my: dict = {}
                for gi, tuples in table.items():
                    groups = set()
                    for sub, g1, g2, g3, mid_g, mid_h, mid_k in tuples:
                        groups.add((g1, mid_g, g2, sub))
                        h = eng.mul(eng.mul(g1, mid_h), g3)
                        k = eng.mul(eng.mul(eng.inv(g3), mid_k), g2)
                        mx[h] = mx.get(h, 0) + 1
                        my[k] = my.get(k, 0) + 1
                    worst_count = max(worst_count, len(groups))
                worst_kx = max(worst_kx, max(mx.values(), default=0))
                worst_ky = max(worst_ky, max(my.values(), default=0))
        per_r1_ky[r1] = max(worst_count, worst_ky)
        k1 = max(k1, worst_kx / r1)
    xs = sorted(per_r1_ky)
    ys = [per_r1_ky[r] for r in xs]
    c1, c2 = fit_linear_envelope(xs, ys)
    return c1, c2, k1, workspace


def complex_reduction_check(x: FiniteFunction, phi: FiniteFunction, p_value: float) -> dict:
    """Check the reduction of a complex test function to nonnegative parts.

    phi splits as phi1 - phi2 + i(phi3 - phi4) with disjoint nonnegative
    parts, so the squared norms add.  Verifies the triangle-inequality bound
    ||x*phi|| <= sum ||x*phi_i||, that each part satisfies the supplied
    constant (||x*phi_i|| <= p_value * ||x|| * ||phi_i||), and the closing
    doubled bound ||x*phi|| <= 2 * p_value * ||x|| * ||phi||.
    """
    model = x.model
    parts = [dict(), dict(), dict(), dict()]
    for e, v in phi.values.items():
        c = complex(v)
        if c.real > 0:
            parts[0][e] = c.real
        elif c.real < 0:
            parts[1][e] = -c.real
        if c.imag > 0:
            parts[2][e] = c.imag
        elif c.imag < 0:
            parts[3][e] = -c.imag
    fns = [FiniteFunction(model, d, "nonneg") for d in parts]
    norm_phi = phi.norm()
    norm_x = x.norm()
    sq_sum = sum(float(f.norm_sq()) for f in fns)
    conv_full = convolve(x, phi)
    lhs = conv_full.norm()
    part_norms = [convolve(x, f).norm() if len(f) else 0.0 for f in fns]
    triangle_rhs = sum(part_norms)
    part_bounds_ok = all(
        _passes(pn, p_value * norm_x * f.norm()) for pn, f in zip(part_norms, fns)
    )
    doubled = 2.0 * p_value * norm_x * norm_phi
    return {
        "norm_x_phi": lhs,
        "part_norms": part_norms,
        "triangle_ok": _passes(lhs, triangle_rhs),
        "parts_within_p": part_bounds_ok,
        "squares_add": _passes(abs(float(phi.norm_sq()) - sq_sum), 1e-9 * max(sq_sum, 1.0)),
        "doubled_bound": doubled,
        "doubled_ok": _passes(lhs, doubled),
    }
