"""Geodesic triangles, entrance/exit points, and central-coset detection.

Triangle convention: the sides of a triangle (A, B, C) are the canonical
geodesics [A->B], [B->C], [C->A], where the geodesic from x to y is the
translate x * q(x^-1 y) of the canonical word of x^-1 y.  Sides translate
exactly under the left action, so triangle properties are verified on the
translation classes (1, u, v).

Entrance and exit points of a side into the closed sigma-neighborhood of a
coset are the first and last vertices of the side inside the neighborhood;
interior excursions are ignored but flagged in reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .balls import BallIndex, DEFAULT_BALL_BUDGET, enumerate_ball
from .errors import GeodesicRangeError
from .groups import Element, GroupModel, all_geodesic_words
from .peripherals import Coset, PeripheralStructure


@dataclass(frozen=True)
class StarConstants:
    """Neighborhood radius sigma and matching tolerance delta; kappa = sigma + delta."""

    sigma: int
    delta: int

    @property
    def kappa(self) -> int:
        return self.sigma + self.delta


@dataclass
class EntryExitRecord:
    """The six labelled entrance/exit points of a triangle's sides.

    Side [A,B] enters at a1 and exits at b2; side [B,C] at b1/c2; side [C,A]
    at c1/a2.  Entrance precedes exit along each side.
    """

    a1: Element
    b2: Element
    b1: Element
    c2: Element
    c1: Element
    a2: Element


@dataclass
class CentralCosetHit:
    coset: Coset
    record: EntryExitRecord
    pair_distances: dict  # {"A": d(a1,a2), "B": d(b1,b2), "C": d(c1,c2)}
    coset_distances: dict  # each of the six points -> distance to the coset
    excursions: int


# ---------------------------------------------------------------------------
# sides


def geodesic_path_values(model: GroupModel, x_value, y_value) -> list:
    """Vertex values of the canonical geodesic from x to y: x * q(x^-1 y)."""
    w = model.engine.mul(model.engine.inv(x_value), y_value)
    word = model.engine.emit(w, model._letter_of_atom)
    return model.path_values(x_value, word)


def triangle_side_values(model: GroupModel, a: Element, b: Element, c: Element):
    """The three side vertex lists [A->B], [B->C], [C->A]."""
    return (
        geodesic_path_values(model, a.value, b.value),
        geodesic_path_values(model, b.value, c.value),
        geodesic_path_values(model, c.value, a.value),
    )


# ---------------------------------------------------------------------------
# neighborhood scanning


class _KeyInterner:
    """Per-subgroup interning of coset keys, with ShortLex sort keys."""

    def __init__(self, model: GroupModel, n_subgroups: int):
        self.model = model
        self.ids: list[dict] = [dict() for _ in range(n_subgroups)]
        self.sort_keys: list[list] = [[] for _ in range(n_subgroups)]
        self.key_values: list[list] = [[] for _ in range(n_subgroups)]

    def intern(self, sub: int, key_value) -> int:
        d = self.ids[sub]
        got = d.get(key_value)
        if got is not None:
            return got
        kid = len(d)
        d[key_value] = kid
        eng = self.model.engine
        word = tuple(eng.emit(key_value, self.model._letter_of_atom))
        self.sort_keys[sub].append((len(word), word))
        self.key_values[sub].append(key_value)
        return kid


class StarScanner:
    """Reusable scanner for central-coset detection at a fixed sigma."""

    def __init__(self, model: GroupModel, peripherals: PeripheralStructure, sigma: int):
        self.model = model
        self.peripherals = peripherals
        self.sigma = sigma
        self.interner = _KeyInterner(model, len(peripherals))
        self.zs = model.small_ball_values(sigma)  # identity first, lengths ascending
        self._vk_memo: dict = {}

    def vertex_keys(self, v) -> tuple:
        """Per subgroup: tuple of interned key ids within sigma of vertex v."""
        got = self._vk_memo.get(v)
        if got is not None:
            return got
        eng = self.model.engine
        out = []
        for s, sub in enumerate(self.peripherals):
            if self.sigma == 0:
                out.append((self.interner.intern(s, sub.coset_rep_value(v)),))
            else:
                seen = []
                for z in self.zs:
                    kid = self.interner.intern(s, sub.coset_rep_value(eng.mul(v, z)))
                    if kid not in seen:
                        seen.append(kid)
                out.append(tuple(seen))
        result = tuple(out)
        self._vk_memo[v] = result
        return result

    def side_keys(self, side_values) -> list:
        return [self.vertex_keys(v) for v in side_values]

    def candidates(self, keyed_sides) -> list[tuple[int, int]]:
        """All (subgroup, key id) whose neighborhood meets every side, sorted by
        (ShortLex key, subgroup index)."""
        per_side = []
        for keys in keyed_sides:
            ids = set()
            for vk in keys:
                for s in range(len(self.peripherals)):
                    for kid in vk[s]:
                        ids.add((s, kid))
            per_side.append(ids)
        common = per_side[0]
        for ids in per_side[1:]:
            common = common & ids
        sk = self.interner.sort_keys
        return sorted(common, key=lambda t: (sk[t[0]][t[1]], t[0]))

    @staticmethod
    def entrance_exit_indices(keys, sub: int, kid: int) -> Optional[tuple[int, int, int]]:
        """(entrance, exit, excursion count) of a side for coset (sub, kid)."""
        first = last = -1
        misses = 0
        inside = 0
        for i, vk in enumerate(keys):
            if kid in vk[sub]:
                if first < 0:
                    first = i
                last = i
                inside += 1
        if first < 0:
            return None
        excursions = (last - first + 1) - inside
        return first, last, excursions

    def scan(self, side_values, keyed_sides, delta: Optional[int]):
        """Iterate candidates in order; yield evaluated hits.

        Each yield is (sub, kid, entries, max_pair_distance, excursions) where
        entries = ((e1, x1), (e2, x2), (e3, x3)) are entrance/exit indices per
        side.  If ``delta`` is given, iteration stops at the first candidate
        whose three pair distances are all < delta.
        """
        model = self.model
        dist = model.distance_values
        for sub, kid in self.candidates(keyed_sides):
            entries = []
            ok = True
            excursions = 0
            for keys in keyed_sides:
                got = self.entrance_exit_indices(keys, sub, kid)
                if got is None:
                    ok = False
                    break
                entries.append((got[0], got[1]))
                excursions += got[2]
            if not ok:
                continue
            (e1, x1), (e2, x2), (e3, x3) = entries
            d_a = dist(side_values[0][e1], side_values[2][x3])  # A1 vs A2
            d_b = dist(side_values[1][e2], side_values[0][x1])  # B1 vs B2
            d_c = dist(side_values[2][e3], side_values[1][x2])  # C1 vs C2
            m = max(d_a, d_b, d_c)
            yield sub, kid, tuple(entries), (d_a, d_b, d_c), m, excursions
            if delta is not None and m < delta:
                return


# ---------------------------------------------------------------------------
# public operations


def entrance_exit(side: list[Element], coset: Coset, sigma: int,
                  peripherals: PeripheralStructure) -> Optional[tuple[Element, Element]]:
    """First and last vertex of the side within sigma of the coset, or None."""
    if not side:
        return None
    model = side[0].model
    sub = peripherals[coset.peripheral]
    eng = model.engine
    zs = model.small_ball_values(sigma)
    hits = []
    for i, el in enumerate(side):
        member = any(sub.coset_rep_value(eng.mul(el.value, z)) == coset.key_value for z in zs)
        if member:
            hits.append(i)
    if not hits:
        return None
    return side[hits[0]], side[hits[-1]]


def _hit_from_scan(model, side_values, scan_item, peripherals, interner, sigma):
    sub, kid, entries, dists, _, excursions = scan_item
    (e1, x1), (e2, x2), (e3, x3) = entries
    record = EntryExitRecord(
        a1=Element(model, side_values[0][e1]),
        b2=Element(model, side_values[0][x1]),
        b1=Element(model, side_values[1][e2]),
        c2=Element(model, side_values[1][x2]),
        c1=Element(model, side_values[2][e3]),
        a2=Element(model, side_values[2][x3]),
    )
    coset = Coset(sub, interner.key_values[sub][kid])
    struct = peripherals
    coset_distances = {
        label: struct.distance_to_coset(getattr(record, label).value, coset, sigma)
        for label in ("a1", "b2", "b1", "c2", "c1", "a2")
    }
    pair = {"A": dists[0], "B": dists[1], "C": dists[2]}
    return CentralCosetHit(coset, record, pair, coset_distances, excursions)


def find_central_coset(a: Element, b: Element, c: Element, constants: StarConstants,
                       peripherals: PeripheralStructure,
                       return_all: bool = False):
    """First coset (in ShortLex key order, then peripheral index) whose
    sigma-neighborhood meets all three sides with all pair distances < delta.

    With ``return_all`` every qualifying coset is returned, in order.
    """
    model = a.model
    side_values = triangle_side_values(model, a, b, c)
    scanner = StarScanner(model, peripherals, constants.sigma)
    keyed = [scanner.side_keys(sv) for sv in side_values]
    hits = []
    for item in scanner.scan(side_values, keyed, None if return_all else constants.delta):
        if item[4] < constants.delta:
            hit = _hit_from_scan(model, side_values, item, peripherals, scanner.interner,
                                 constants.sigma)
            if not return_all:
                return hit
            hits.append(hit)
    return hits if return_all else None


@dataclass
class StarVerifyResult:
    passed: bool
    constants: StarConstants
    ball_radius: int
    triangles_checked: int
    counterexample: Optional[tuple[Element, Element, Element]]
    excursions_seen: int
    max_delta_needed: Optional[int]  # max over triangles of 1 + min-max pair distance
    all_geodesics: bool = False

    def to_payload(self) -> dict:
        ce = None
        if self.counterexample is not None:
            ce = [str(x) for x in self.counterexample]
        return {
            "pass": self.passed,
            "sigma": self.constants.sigma,
            "delta": self.constants.delta,
            "ball_radius": self.ball_radius,
            "triangles_checked": self.triangles_checked,
            "counterexample": ce,
            "excursions_seen": self.excursions_seen,
            "max_delta_needed": self.max_delta_needed,
            "all_geodesics": self.all_geodesics,
        }


class _TriangleSweep:
    """Shared enumeration of basepoint triangles (1, u, v) over a ball."""

    def __init__(self, model: GroupModel, peripherals: PeripheralStructure, sigma: int,
                 ball: BallIndex):
        self.model = model
        self.ball = ball
        self.scanner = StarScanner(model, peripherals, sigma)
        eng = model.engine
        n = ball.size
        # side [A->B] for u: the canonical path of u, from the ball's parents
        self.side1 = [[ball.values[j] for j in ball.path_indices(i)] for i in range(n)]
        # side [C->A] for v: v * q(v^-1)
        inv_idx = ball.inverse_index()
        self.side3 = []
        for i in range(n):
            vv = ball.values[i]
            inv_path = ball.path_indices(int(inv_idx[i]))
            self.side3.append([eng.mul(vv, ball.values[j]) for j in inv_path])
        self.side1_keys = [self.scanner.side_keys(sv) for sv in self.side1]
        self.side3_keys = [self.scanner.side_keys(sv) for sv in self.side3]

    def side2(self, ui: int, vi: int):
        model = self.model
        eng = model.engine
        u = self.ball.values[ui]
        w = eng.mul(eng.inv(u), self.ball.values[vi])
        word = eng.emit(w, model._letter_of_atom)
        vals = [u]
        cur = u
        for letter in word:
            cur = eng.right_atom(cur, model._atoms_by_letter[letter])
            vals.append(cur)
        return vals

    def triangle(self, ui: int, vi: int):
        side2 = self.side2(ui, vi)
        sides = (self.side1[ui], side2, self.side3[vi])
        keyed = (self.side1_keys[ui], self.scanner.side_keys(side2), self.side3_keys[vi])
        return sides, keyed


def verify_star(model: GroupModel, peripherals: PeripheralStructure, constants: StarConstants,
                ball_radius: int, ball: BallIndex | None = None,
                all_geodesics: bool = False,
                budget: int = DEFAULT_BALL_BUDGET) -> StarVerifyResult:
    """Check the central-coset property on every basepoint triangle (1, u, v)
    with u, v in the ball of ``ball_radius``.

    Sides are canonical geodesics and translate exactly under the left action,
    so basepoint triangles represent all triangles (A, Au, Av) up to
    translation.  On failure the ShortLex-first failing triangle is returned.
    With ``all_geodesics`` (radius <= 4) every combination of geodesic words
    for the three sides is checked, not only the canonical one.
    """
    if all_geodesics and ball_radius > 4:
        raise GeodesicRangeError("all-geodesics verification is capped at radius 4")
    if ball is None or ball.radius < ball_radius:
        ball = enumerate_ball(model, ball_radius, budget=budget)
    if all_geodesics:
        return _verify_star_all_geodesics(model, peripherals, constants, ball_radius, ball)
    sweep = _TriangleSweep(model, peripherals, constants.sigma, ball)
    n = ball.growth(ball_radius)
    checked = 0
    excursions = 0
    max_delta = 0
    for ui in range(n):
        for vi in range(n):
            checked += 1
            sides, keyed = sweep.triangle(ui, vi)
            best = None
            for item in sweep.scanner.scan(sides, keyed, constants.delta):
                excursions += item[5]
                m = item[4]
                if best is None or m < best:
                    best = m
                if m < constants.delta:
                    break
            if best is None or best >= constants.delta:
                return StarVerifyResult(
                    False, constants, ball_radius, checked,
                    (model.identity, ball.element(ui), ball.element(vi)),
                    excursions, None,
                )
            max_delta = max(max_delta, best + 1)
    return StarVerifyResult(True, constants, ball_radius, checked, None, excursions, max_delta)


def _verify_star_all_geodesics(model, peripherals, constants, ball_radius, ball):
    eng = model.engine
    scanner = StarScanner(model, peripherals, constants.sigma)
    memo: dict = {}
    n = ball.growth(ball_radius)
    checked = 0
    excursions = 0
    max_delta = 0

    def variants(start_value, g):
        out = []
        for word in all_geodesic_words(model, g, memo):
            side = model.path_values(start_value, word)
            out.append((side, scanner.side_keys(side)))
        return out

    side1_variants = [variants(eng.identity(), ball.element(ui)) for ui in range(n)]
    side3_variants = [variants(ball.element(vi).value,
                               model.inverse(ball.element(vi))) for vi in range(n)]
    for ui in range(n):
        u = ball.element(ui)
        for vi in range(n):
            v = ball.element(vi)
            w = model.multiply(model.inverse(u), v)
            side2_variants = variants(u.value, w)
            for side1, keys1 in side1_variants[ui]:
                for side2, keys2 in side2_variants:
                    for side3, keys3 in side3_variants[vi]:
                        checked += 1
                        sides = (side1, side2, side3)
                        keyed = (keys1, keys2, keys3)
                        best = None
                        for item in scanner.scan(sides, keyed, constants.delta):
                            excursions += item[5]
                            m = item[4]
                            if best is None or m < best:
                                best = m
                            if m < constants.delta:
                                break
                        if best is None or best >= constants.delta:
                            return StarVerifyResult(
                                False, constants, ball_radius, checked,
                                (model.identity, u, v), excursions, None, True,
                            )
                        max_delta = max(max_delta, best + 1)
    return StarVerifyResult(True, constants, ball_radius, checked, None, excursions,
                            max_delta, True)


def calibrate_constants(model: GroupModel, peripherals: PeripheralStructure, ball_radius: int,
                        sigma_max: int, delta_max: int, ball: BallIndex | None = None,
                        budget: int = DEFAULT_BALL_BUDGET) -> Optional[StarConstants]:
    """Lexicographically minimal (sigma, delta) passing verify_star, or None."""
    constants, _ = calibrate_with_table(model, peripherals, ball_radius, sigma_max, delta_max,
                                        ball=ball, budget=budget)
    return constants


def calibrate_with_table(model: GroupModel, peripherals: PeripheralStructure, ball_radius: int,
                         sigma_max: int, delta_max: int, ball: BallIndex | None = None,
                         budget: int = DEFAULT_BALL_BUDGET):
    """Calibration plus the per-sigma table of minimal feasible delta."""
    if ball is None or ball.radius < ball_radius:
        ball = enumerate_ball(model, ball_radius, budget=budget)
    table = []
    result = None
    for sigma in range(sigma_max + 1):
        sweep = _TriangleSweep(model, peripherals, sigma, ball)
        n = ball.growth(ball_radius)
        worst = 0  # max over triangles of (1 + min over cosets of max pair distance)
        feasible = True
        for ui in range(n):
            if not feasible:
                break
            for vi in range(n):
                sides, keyed = sweep.triangle(ui, vi)
                best = None
                for item in sweep.scanner.scan(sides, keyed, None):
                    m = item[4]
                    if best is None or m < best:
                        best = m
                        if best == 0:
                            break
                if best is None:
                    feasible = False
                    break
                worst = max(worst, best + 1)
        if feasible and worst <= delta_max:
            table.append({"sigma": sigma, "delta_needed": worst})
            if result is None:
                result = StarConstants(sigma, worst)
            break
        table.append({"sigma": sigma, "delta_needed": worst if feasible else None})
    return result, table
