"""Acceptance suite: one test per criterion, with stated runtime caps.

Each criterion prints a single PASS/FAIL line.  Every report-producing config
is stashed; the final reproducibility criterion reruns them all (plus the
library-computed payloads) and requires byte-identical serialized reports.
"""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from cayleybench import (FiniteFunction, GroupModel, StarConstants, best_constant,
                         brute_constant, complex_reduction_check, convolve, enumerate_ball,
                         find_central_coset, load_config, peripheral_structure,
                         restrict_sphere, run_experiment)
from cayleybench.reports import report_json_bytes
from cayleybench.seeds import rng

REPORTS: dict = {}     # label -> (config dict | None, bytes)
CACHE: dict = {}


@pytest.fixture(scope="module")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("ballcache")


def run_cfg(label: str, raw: dict, cache_dir) -> dict:
    report = run_experiment(load_config(dict(raw)), cache_dir=cache_dir)
    REPORTS[label] = (raw, report_json_bytes(report))
    return report


def stash_payload(label: str, payload: dict):
    REPORTS[label] = (None, report_json_bytes(payload))


@contextmanager
def criterion(num: int, desc: str, budget_s: float):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE C{num:02d} FAIL: {desc}")
        raise
    elapsed = time.monotonic() - start
    print(f"ACCEPTANCE C{num:02d} PASS: {desc} ({elapsed:.1f}s / budget {budget_s:.0f}s)")
    assert elapsed < budget_s, f"criterion {num} exceeded its runtime budget"


GROUPS = {
    "free2": "free(2)",
    "z2": "free-abelian(2)",
    "zz": "free-product(free-abelian(1),free-abelian(1))",
}


def axioms_payload(name: str, radius: int) -> dict:
    """Exhaustive length-axiom check on the ball; returns a summary payload."""
    model = GroupModel(GROUPS[name])
    ball = enumerate_ball(model, radius)
    eng = model.engine
    values = ball.values
    subadditive = True
    for gv in values:
        for hv in values:
            if eng.length(eng.mul(gv, hv)) > eng.length(gv) + eng.length(hv):
                subadditive = False
    symmetric = all(eng.length(eng.inv(v)) == eng.length(v) for v in values)
    bfs_matches = all(
        eng.length(values[i]) == k
        for k in range(radius + 1) for i in ball.sphere_range(k)
    )
    identity_zero = eng.length(eng.identity()) == 0
    return {
        "group": GROUPS[name],
        "radius": radius,
        "ball": ball.size,
        "subadditive": subadditive,
        "inverse_symmetric": symmetric,
        "identity_zero": identity_zero,
        "bfs_distance_equals_length": bfs_matches,
    }


def test_c01_length_axioms(cache_dir):
    with criterion(1, "length axioms hold exhaustively on B(5)", 60):
        for name in ("free2", "z2", "zz"):
            payload = axioms_payload(name, 5)
            assert payload["subadditive"], name
            assert payload["inverse_symmetric"], name
            assert payload["identity_zero"], name
            assert payload["bfs_distance_equals_length"], name
            stash_payload(f"c01-axioms-{name}", payload)
            run_cfg(f"c01-ball-{name}", {"kind": "ball", "group": GROUPS[name],
                                         "radius": 5}, cache_dir)


def test_c02_star_positive(cache_dir):
    with criterion(2, "free product passes the center property at (0,1), radius 5", 300):
        verify = run_cfg("c02-verify", {
            "kind": "star-verify", "group": GROUPS["zz"], "peripherals": "factors",
            "sigma": 0, "delta": 1, "radius": 5}, cache_dir)
        assert verify["status"] == "pass"
        assert verify["payload"]["pass"] is True
        assert verify["payload"]["counterexample"] is None
        calibrate = run_cfg("c02-calibrate", {
            "kind": "calibrate", "group": GROUPS["zz"], "peripherals": "factors",
            "radius": 5, "sigma_max": 1, "delta_max": 2}, cache_dir)
        assert calibrate["payload"]["result"] == {"sigma": 0, "delta": 1}


def test_c03_star_negative(cache_dir):
    with criterion(3, "flat rank-2 lattice fails at (1,1), radius 4, reproducibly", 60):
        report = run_cfg("c03-verify", {
            "kind": "star-verify", "group": GROUPS["z2"], "peripherals": "trivial",
            "sigma": 1, "delta": 1, "radius": 4}, cache_dir)
        assert report["status"] == "fail"
        words = report["payload"]["counterexample"]
        assert words is not None
        model = GroupModel(GROUPS["z2"])
        periph = peripheral_structure(model, "trivial")
        triangle = [model.normalize(w) for w in words]
        again = find_central_coset(triangle[0], triangle[1], triangle[2],
                                   StarConstants(1, 1), periph)
        assert again is None  # the counterexample reproduces


def test_c04_count_bound(cache_dir):
    with criterion(4, "decomposition counts fit a dominating linear envelope", 600):
        report = run_cfg("c04-counts", {
            "kind": "decomp-count", "group": GROUPS["zz"], "peripherals": "factors",
            "sigma": 0, "delta": 1, "p_max": 5, "r1_max": 4}, cache_dir)
        assert report["status"] == "pass"
        payload = report["payload"]
        c1, c2 = payload["c1"], payload["c2"]
        for row in payload["max_table"]:
            assert row["max_count"] <= c1 * row["r1"] + c2 + 1e-9
        # independent re-enumeration of the witness cell agrees
        assert payload["recheck_ok"] is True
        assert payload["recheck_count"] == max(r["max_count"] for r in payload["max_table"])


def convolution_payload() -> dict:
    model = GroupModel(GROUPS["free2"])
    ball = enumerate_ball(model, 3)
    chi = FiniteFunction.sphere_indicator(ball, 1)
    conv = convolve(chi, chi)
    identity_value = conv[model.identity]
    length_two = {str(e): str(v) for e, v in conv.items_sorted() if e.length == 2}
    gen = rng(2026, "c05")
    orthogonal = True
    for _ in range(100):
        def fn():
            vals = {}
            for i in gen.integers(0, ball.size, size=8):
                vals[ball.element(int(i))] = Fraction(int(gen.integers(1, 9)), 8)
            return FiniteFunction(model, vals, "nonneg")
        x, y = fn(), fn()
        product = convolve(x, y)
        total = product.norm_sq()
        parts = sum(restrict_sphere(product, p).norm_sq() for p in range(7))
        if total != parts:
            orthogonal = False
    return {
        "identity_value": str(identity_value),
        "n_length_two": len(length_two),
        "length_two_values": sorted(set(length_two.values())),
        "orthogonal_exact_100": orthogonal,
    }


def test_c05_convolution_exactness():
    with criterion(5, "sphere convolution is exact in rational arithmetic", 60):
        payload = convolution_payload()
        assert payload["identity_value"] == "4"
        assert payload["n_length_two"] == 12
        assert payload["length_two_values"] == ["1"]
        assert payload["orthogonal_exact_100"] is True
        stash_payload("c05-convolution", payload)


def test_c06_opnorm_convergence(cache_dir):
    with criterion(6, "operator-norm lower bounds converge monotonically", 300):
        free_report = run_cfg("c06-free2", {
            "kind": "opnorm", "group": GROUPS["free2"], "x": {"type": "sphere", "r": 1},
            "r_values": list(range(2, 13))}, cache_dir)
        values = [row["value"] for row in free_report["payload"]["rows"]]
        assert all(b >= a - 1e-9 for a, b in zip(values, values[1:]))
        limit = 2 * math.sqrt(3)
        assert values[-1] >= 0.95 * limit
        assert values[-1] <= limit * (1 + 1e-9)
        line_report = run_cfg("c06-line", {
            "kind": "opnorm", "group": "free-abelian(1)", "x": {"type": "sphere", "r": 1},
            "r_values": [50]}, cache_dir)
        assert line_report["payload"]["rows"][0]["value"] >= 1.99


def bracket_payload() -> dict:
    z1 = GroupModel("free-abelian(1)")
    free2 = GroupModel(GROUPS["free2"])
    rows = []
    instances = [(z1, r1, r2, p) for r1 in range(1, 4) for r2 in range(1, 4)
                 for p in range(abs(r1 - r2), r1 + r2 + 1)]
    instances += [(free2, 1, 1, p) for p in range(0, 3)]
    for model, r1, r2, p in instances:
        est = best_constant(model, r1, r2, p, restarts=50)
        grid = brute_constant(model, r1, r2, p)
        rows.append({
            "group": model.key.split("|")[0], "r1": r1, "r2": r2, "p": p,
            "lower": est.lower, "upper": est.upper, "grid": grid,
            "gap": abs(est.lower - grid),
        })
    return {"instances": rows}


def test_c07_best_constant_bracketing(cache_dir):
    with criterion(7, "alternating maximization matches the grid oracle and its certificates", 900):
        payload = bracket_payload()
        for row in payload["instances"]:
            assert row["gap"] < 1e-4, row
            assert row["lower"] <= row["upper"] + 1e-12, row
        stash_payload("c07-instances", payload)
        free_prof = run_cfg("c07-profile-free2", {
            "kind": "rd-profile", "group": GROUPS["free2"], "r_max": 3}, cache_dir)
        for entry in free_prof["payload"]["profile"]:
            assert entry["c"] <= 1 + 1e-6
        flat_prof = run_cfg("c07-profile-z2", {
            "kind": "rd-profile", "group": GROUPS["z2"], "r_max": 5}, cache_dir)
        for entry in flat_prof["payload"]["profile"]:
            if entry["r"] >= 1:
                assert entry["c"] <= math.sqrt(4 * entry["r"]) + 1e-9


def test_c08_proof_chain(cache_dir):
    with criterion(8, "every majorization step of the convolution chain passes", 600):
        report = run_cfg("c08-trace", {
            "kind": "trace", "group": GROUPS["zz"], "peripherals": "factors",
            "sigma": 0, "delta": 1, "r1_max": 3, "r2_max": 3, "samples": 50,
            "seed": 7}, cache_dir)
        assert report["status"] == "pass"
        payload = report["payload"]
        assert payload["all_pass"] is True
        assert len({rec["sample"] for rec in payload["samples"]}) == 50
        step_names = {s["name"] for rec in payload["samples"] for s in rec["steps"]}
        assert "assembled_polynomial" in step_names  # bound composed per peripheral
        assert "cubic_envelope" in step_names
        for rec in payload["samples"]:
            assert rec["structural_ok"] is True
            assert all(s["pass"] for s in rec["steps"])


def complex_payload() -> dict:
    model = GroupModel(GROUPS["free2"])
    ball = enumerate_ball(model, 2)
    gen = rng(2026, "c09")
    rows = []
    for i in range(50):
        x_vals = {}
        for j in range(ball.size):
            n = int(gen.integers(0, 4))
            if n:
                x_vals[ball.element(j)] = Fraction(n, 3)
        if not x_vals:
            x_vals[ball.element(0)] = Fraction(1)
        x = FiniteFunction(model, x_vals, "nonneg")
        phi = FiniteFunction(model, {
            ball.element(j): complex(gen.standard_normal(), gen.standard_normal())
            for j in range(ball.size)}, "complex")
        p_value = float(x.l1()) / x.norm()
        out = complex_reduction_check(x, phi, p_value)
        rows.append({"sample": i, "triangle_ok": out["triangle_ok"],
                     "parts_within_p": out["parts_within_p"],
                     "squares_add": out["squares_add"], "doubled_ok": out["doubled_ok"]})
    return {"samples": rows}


def test_c09_complex_reduction():
    with criterion(9, "the doubled bound covers complex test functions", 60):
        payload = complex_payload()
        for row in payload["samples"]:
            assert row["triangle_ok"] and row["squares_add"]
            assert row["parts_within_p"] and row["doubled_ok"]
        stash_payload("c09-complex", payload)


def test_c10_center_maps(cache_dir):
    with criterion(10, "center maps verify (i)-(iii) at the stated bounds", 600):
        median = run_cfg("c10-median", {
            "kind": "tmap-verify", "group": GROUPS["z2"], "tmap": "z2-median",
            "radius": 6}, cache_dir)
        payload = median["payload"]
        assert payload["condition_i"]["pass"] is True
        assert payload["condition_ii"]["pass"] is True  # middles trivial: bound 0
        assert all(row["max_mid_length"] == 0 for row in payload["condition_ii"]["table"])
        for row in payload["condition_iii"]["max_by_r"]:
            assert row["max_count"] <= 2 * row["r"] + 2
        # the claimed 2r bound is exceeded at small radii; the report flags the
        # excess without failing
        assert payload["condition_iii"]["claim_holds"] is False
        assert payload["condition_iii"]["excess"]

        poly = run_cfg("c10-polygrowth", {
            "kind": "tmap-verify", "group": GROUPS["z2"],
            "tmap": "polygrowth-shortest-side", "radius": 4}, cache_dir)
        assert poly["payload"]["condition_i"]["pass"] is True
        assert poly["payload"]["condition_iii"]["claim_holds"] is True  # <= 2 f(r) + 2

        star = run_cfg("c10-from-star", {
            "kind": "tmap-verify", "group": GROUPS["zz"], "tmap": "derived-from-star",
            "peripherals": "factors", "sigma": 0, "delta": 1, "radius": 4}, cache_dir)
        sp = star["payload"]
        assert sp["condition_i"]["pass"] is True
        assert sp["condition_ii"]["pass"] is True
        assert len(sp["condition_ii"]["envelope"]) == 2   # linear middle-length envelope
        assert len(sp["condition_iii"]["envelope"]) == 2  # linear count envelope


def test_c11_reproducibility(cache_dir):
    rerun_helpers = {
        "c01-axioms-free2": lambda: axioms_payload("free2", 5),
        "c01-axioms-z2": lambda: axioms_payload("z2", 5),
        "c01-axioms-zz": lambda: axioms_payload("zz", 5),
        "c05-convolution": convolution_payload,
        "c07-instances": bracket_payload,
        "c09-complex": complex_payload,
    }
    with criterion(11, "identical configs and seeds give byte-identical reports", 1800):
        assert REPORTS, "earlier criteria must run first"
        for label in sorted(REPORTS):
            raw, first_bytes = REPORTS[label]
            if raw is not None:
                report = run_experiment(load_config(dict(raw)), cache_dir=cache_dir)
                again = report_json_bytes(report)
            else:
                again = report_json_bytes(rerun_helpers[label]())
            assert again == first_bytes, f"report for {label} not reproducible"
