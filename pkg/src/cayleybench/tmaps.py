"""Triangle-center maps T and their exhaustive verification.

A center map sends a pair (g, h), read as the triangle (1, g, h), to a point
a together with middle parts (g', h') in a peripheral subgroup, subject to:

  (i)   permutation consistency: T(h, g) = (a, h', g') and
        T(h^-1, h^-1 g) = (h^-1 a h', h'^-1, h'^-1 g');
  (ii)  L(h') bounded by a polynomial in L(h);
  (iii) for fixed g, few distinct (a, g') over h of a given length.

All built-in maps factor through a corner assignment on triangles that is
invariant under vertex permutations and equivariant under translation: the
ordered triple is canonicalized to its ShortLex-least based pair, a frame
rule picks the three corners there, and the corners are transported back.
Condition (i) is then an identity; it is still checked exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .balls import BallIndex, DEFAULT_BALL_BUDGET, enumerate_ball
from .decomp import DecompositionContext
from .errors import PeripheralError, WorkbenchError
from .fitting import fit_linear_envelope
from .groups import Element, FreeAbelian, GroupModel
from .peripherals import PeripheralStructure
from .polynomials import PolynomialBound
from .triangles import StarConstants

_PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


@dataclass(frozen=True)
class TMapValue:
    a: Element
    g_mid: Element
    h_mid: Element
    peripheral: int

    def astuple(self):
        return (self.a, self.g_mid, self.h_mid, self.peripheral)


class TMap:
    """A center map with its claimed bound polynomials."""

    def __init__(self, kind: str, model: GroupModel, frame_rule: Callable,
                 q1: Optional[PolynomialBound], q2: Optional[PolynomialBound],
                 claimed_q2: Optional[Callable[[int], float]], peripheral_default: int = 0):
        self.kind = kind
        self.model = model
        self._frame_rule = frame_rule
        self.q1 = q1
        self.q2 = q2
        self.claimed_q2 = claimed_q2
        self._memo: dict = {}

    def _frame_corners(self, u_value, w_value):
        key = (u_value, w_value)
        got = self._memo.get(key)
        if got is None:
            got = self._frame_rule(u_value, w_value)
            self._memo[key] = got
        return got

    def corners(self, v1: Element, v2: Element, v3: Element):
        """Corner at each vertex of the (ordered) triangle, slot for slot."""
        model = self.model
        eng = model.engine
        vs = (v1.value, v2.value, v3.value)
        sl = lambda v: (eng.length(v), tuple(eng.emit(v, model._letter_of_atom)))
        best = None
        for perm in _PERMS:
            i, j, k = perm
            base_inv = eng.inv(vs[i])
            u = eng.mul(base_inv, vs[j])
            w = eng.mul(base_inv, vs[k])
            key = (sl(u), sl(w))
            if best is None or key < best[0]:
                best = (key, perm, u, w)
        _, perm, u, w = best
        frame = self._frame_corners(u, w)
        base = vs[perm[0]]
        out = [None, None, None]
        for slot, corner in zip(perm, frame):
            out[slot] = eng.mul(base, corner)
        return out, frame[3] if len(frame) > 3 else 0

    def evaluate(self, g: Element, h: Element) -> TMapValue:
        model = self.model
        eng = model.engine
        (c0, cg, ch), peripheral = self.corners(model.identity, g, h)
        a_inv = eng.inv(c0)
        return TMapValue(
            Element(model, c0),
            Element(model, eng.mul(a_inv, cg)),
            Element(model, eng.mul(a_inv, ch)),
            peripheral,
        )

    def __repr__(self):
        return f"TMap({self.kind})"


# ---------------------------------------------------------------------------
# built-in constructions


def make_tmap_z2(model: GroupModel) -> TMap:
    """Rank-2 free-abelian center map: a is the coordinatewise median of the
    three vertex vectors; middles are trivial.  The median lies on a monotone
    geodesic between every pair of vertices and is permutation-invariant and
    translation-equivariant, so condition (i) is exact."""
    if not (isinstance(model.family, FreeAbelian) and model.family.rank == 2):
        raise WorkbenchError("the median map needs the free-abelian(2) model")
    eng = model.engine

    def frame_rule(u_value, w_value):
        a = tuple(sorted((0, u_value[i], w_value[i]))[1] for i in range(2))
        return (a, a, a, 0)

    return TMap("z2-median", model, frame_rule,
                q1=PolynomialBound((0,), role="middle-bound"),
                q2=PolynomialBound((0, 2), role="claimed-count-bound"),
                claimed_q2=lambda r: 2.0 * r)


def make_tmap_polygrowth(model: GroupModel, ball: BallIndex | None = None,
                         budget: int = DEFAULT_BALL_BUDGET) -> TMap:
    """Shortest-side center map for models of modest growth: in the canonical
    frame, a is the frame's second vertex u when u lies on the chosen
    shortest side, the identity otherwise; middles are trivial."""
    eng = model.engine
    growth_cache: dict[int, int] = {}
    ball_box = [ball]

    def growth(r: int) -> int:
        got = growth_cache.get(r)
        if got is None:
            b = ball_box[0]
            if b is None or b.radius < r:
                b = enumerate_ball(model, r, budget=budget)
                ball_box[0] = b
            got = b.growth(r)
            growth_cache[r] = got
        return got

    def frame_rule(u_value, w_value):
        lu = eng.length(u_value)
        lw = eng.length(w_value)
        ld = eng.length(eng.mul(eng.inv(u_value), w_value))
        # sides [1,u], [1,w], [u,w] with a fixed tie-break
        shortest = min((lu, 0), (lw, 1), (ld, 2))[1]
        a = u_value if shortest in (0, 2) else eng.identity()
        return (a, a, a, 0)

    q2 = None
    if isinstance(model.family, FreeAbelian) and model.family.rank == 2:
        # growth of the rank-2 lattice: 2r^2 + 2r + 1
        q2 = PolynomialBound((4, 4, 4), role="claimed-count-bound")
    return TMap("polygrowth-shortest-side", model, frame_rule,
                q1=PolynomialBound((0,), role="middle-bound"),
                q2=q2,
                claimed_q2=lambda r: 2.0 * growth(r) + 2.0)


def make_tmap_from_star(model: GroupModel, peripherals: PeripheralStructure,
                        constants: StarConstants) -> TMap:
    """Center map induced by central decompositions: in the canonical frame
    the ShortLex-first decomposition of the triangle supplies the corner
    triple (left part, left*g-middle, left*h-middle)."""
    context = DecompositionContext(model, peripherals, constants)
    eng = model.engine
    identity = eng.identity()

    def frame_rule(u_value, w_value):
        # canonical frame triangle (1, u, w): decompose u over the triangle
        # with sides to w; tuples_raw(g=u, h=w)
        tuples = context.tuples_raw(u_value, w_value)
        if not tuples:
            raise WorkbenchError(
                "no central decomposition for a triangle; the model fails the "
                "central-coset property at these constants")
        # duplicate vertices must receive equal corners, or permutation
        # consistency breaks on degenerate triangles; the matching anchor
        # point sets coincide there, so a tuple with trivial middle exists
        chosen = tuples[0]
        for tup in tuples:
            sub, g1, g2, g3, mid_g, mid_h, mid_k = tup
            if u_value == identity and mid_g != identity:
                continue
            if w_value == identity and mid_h != identity:
                continue
            if u_value == w_value and mid_k != identity:
                continue
            chosen = tup
            break
        sub, g1, g2, g3, mid_g, mid_h, mid_k = chosen
        return (g1, eng.mul(g1, mid_g), eng.mul(g1, mid_h), sub)

    return TMap("derived-from-star", model, frame_rule, q1=None, q2=None, claimed_q2=None)


def make_tmap(kind: str, model: GroupModel, peripherals: PeripheralStructure | None = None,
              constants: StarConstants | None = None) -> TMap:
    if kind == "z2-median":
        return make_tmap_z2(model)
    if kind == "polygrowth-shortest-side":
        return make_tmap_polygrowth(model)
    if kind == "derived-from-star":
        if peripherals is None or constants is None:
            raise PeripheralError("derived-from-star needs peripherals and constants")
        return make_tmap_from_star(model, peripherals, constants)
    raise WorkbenchError(f"unknown tmap kind {kind!r}")


# ---------------------------------------------------------------------------
# verification


@dataclass
class TMapReport:
    kind: str
    ball_radius: int
    pairs_checked: int
    cond1_pass: bool
    cond1_counterexample: Optional[tuple]
    cond2_pass: bool
    cond2_table: list          # {"r": L(h), "max_mid_length": n, "bound": q1(r)}
    cond3_rows: list           # {"g": word, "r": r, "count": n, "claim": value or None}
    cond3_max_by_r: list       # {"r": r, "max_count": n, "claim": value or None}
    cond3_envelope: tuple      # fitted (c1, c2)
    cond3_excess: list         # rows where count exceeds the claimed bound
    q1_fit: tuple
    q2_claim_holds: bool

    def to_payload(self) -> dict:
        return {
            "kind": self.kind,
            "ball_radius": self.ball_radius,
            "pairs_checked": self.pairs_checked,
            "condition_i": {
                "pass": self.cond1_pass,
                "counterexample": [str(e) for e in self.cond1_counterexample]
                if self.cond1_counterexample else None,
            },
            "condition_ii": {"pass": self.cond2_pass, "table": self.cond2_table,
                             "envelope": list(self.q1_fit)},
            "condition_iii": {
                "max_by_r": self.cond3_max_by_r,
                "envelope": list(self.cond3_envelope),
                "claim_holds": self.q2_claim_holds,
                "excess": self.cond3_excess,
            },
        }

    def csv_rows(self):
        rows = []
        for row in self.cond3_rows:
            rows.append([row["g"], row["r"], row["count"],
                        "" if row["claim"] is None else row["claim"]])
        return rows


def verify_tmap(tmap: TMap, ball_radius: int, ball: BallIndex | None = None,
                budget: int = DEFAULT_BALL_BUDGET) -> TMapReport:
    """Exhaustive check of conditions (i)-(iii) over pairs (g, h) whose
    triangle fits the ball: g, h, and h^-1 g all of length <= ball_radius."""
    model = tmap.model
    eng = model.engine
    if ball is None or ball.radius < ball_radius:
        ball = enumerate_ball(model, ball_radius, budget=budget)
    n = ball.growth(ball_radius)
    elements = [ball.element(i) for i in range(n)]
    pairs_checked = 0
    cond1_pass = True
    cond1_ce = None
    cond2_max: dict[int, int] = {}
    counts: dict[tuple[int, int], set] = {}
    for gi in range(n):
        g = elements[gi]
        for hi in range(n):
            h = elements[hi]
            hg = model.multiply(model.inverse(h), g)
            if hg.length > ball_radius:
                continue
            pairs_checked += 1
            t = tmap.evaluate(g, h)
            if cond1_pass:
                ts = tmap.evaluate(h, g)
                h_inv = model.inverse(h)
                tt = tmap.evaluate(h_inv, hg)
                a, gp, hp = t.a, t.g_mid, t.h_mid
                ok = (
                    ts.a == a and ts.g_mid == hp and ts.h_mid == gp
                    and tt.a == model.multiply(model.multiply(h_inv, a), hp)
                    and tt.g_mid == model.inverse(hp)
                    and tt.h_mid == model.multiply(model.inverse(hp), gp)
                )
                if not ok:
                    cond1_pass = False
                    cond1_ce = (g, h)
            r = h.length
            cond2_max[r] = max(cond2_max.get(r, 0), t.h_mid.length)
            counts.setdefault((gi, r), set()).add((t.a.value, t.g_mid.value))

    cond2_table = []
    cond2_pass = True
    for r in sorted(cond2_max):
        bound = tmap.q1(r) if tmap.q1 is not None else None
        row = {"r": r, "max_mid_length": cond2_max[r], "bound": bound}
        if bound is not None and cond2_max[r] > bound + 1e-9:
            cond2_pass = False
        cond2_table.append(row)
    q1_fit = fit_linear_envelope(sorted(cond2_max), [cond2_max[r] for r in sorted(cond2_max)])

    cond3_rows = []
    max_by_r: dict[int, int] = {}
    excess = []
    claim_holds = True
    for (gi, r), pairs in sorted(counts.items()):
        c = len(pairs)
        claim = tmap.claimed_q2(r) if tmap.claimed_q2 is not None else None
        row = {"g": model.word_str(ball.word_of_index(gi)), "r": r, "count": c, "claim": claim}
        cond3_rows.append(row)
        max_by_r[r] = max(max_by_r.get(r, 0), c)
        if claim is not None and c > claim + 1e-9:
            excess.append(row)
            claim_holds = False
    envelope = fit_linear_envelope(sorted(max_by_r), [max_by_r[r] for r in sorted(max_by_r)])
    max_rows = [{"r": r, "max_count": max_by_r[r],
                 "claim": tmap.claimed_q2(r) if tmap.claimed_q2 is not None else None}
                for r in sorted(max_by_r)]
    return TMapReport(
        tmap.kind, ball_radius, pairs_checked, cond1_pass, cond1_ce, cond2_pass,
        cond2_table, cond3_rows, max_rows, envelope, excess, q1_fit, claim_holds,
    )
