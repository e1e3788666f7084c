"""Central decompositions of geodesic triangles and their counting views.

For a pair (g, h) with k = h^-1 g, the triangle (1, h, g) has sides q_h
(from 1 to h, entrance A1 / exit B2), h*q_k (from h to g, entrance B1 / exit
C2) and q_g (from 1 to g, entrance A2 near 1 / exit C1 near g).  A central
decomposition is a tuple (g1, g2, g3, mid_g, mid_h, mid_k, i) with

    g = g1 * mid_g * g2,   h = g1 * mid_h * g3,   k = g3^-1 * mid_k * g2,
    mid_g = mid_h * mid_k,  all three middles in subgroup H_i,

where g1 lies within kappa of A1 and A2, g1*mid_g within kappa of C1 and C2,
and g1*mid_h within kappa of B1 and B2, for the coset g1*H_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .balls import BallIndex, DEFAULT_BALL_BUDGET, enumerate_ball
from .errors import GeodesicRangeError
from .fitting import fit_linear_envelope
from .groups import Element, GroupModel
from .peripherals import PeripheralStructure
from .triangles import EntryExitRecord, StarConstants, StarScanner, geodesic_path_values


@dataclass(frozen=True)
class CentralDecomposition:
    g1: Element
    g2: Element
    g3: Element
    mid_g: Element
    mid_h: Element
    mid_k: Element
    peripheral: int
    witness: EntryExitRecord = None

    def triple(self):
        """The (left, middle, right) decomposition of g."""
        return (self.g1, self.mid_g, self.g2)

    def check_identities(self, g: Element, h: Element) -> bool:
        model = g.model
        k = model.multiply(model.inverse(h), g)
        return (
            model.multiply(model.multiply(self.g1, self.mid_g), self.g2) == g
            and model.multiply(model.multiply(self.g1, self.mid_h), self.g3) == h
            and model.multiply(model.multiply(model.inverse(self.g3), self.mid_k), self.g2) == k
            and model.multiply(self.mid_h, self.mid_k) == self.mid_g
        )


class DecompositionContext:
    """Reusable state for enumerating decompositions at fixed constants."""

    def __init__(self, model: GroupModel, peripherals: PeripheralStructure,
                 constants: StarConstants):
        self.model = model
        self.peripherals = peripherals
        self.constants = constants
        self.scanner = StarScanner(model, peripherals, constants.sigma)
        self.kappa_ball = model.small_ball_values(constants.kappa)

    def _coset_points(self, sub, key_value, near_value, other_value):
        """Coset points within kappa of both anchor points, ShortLex sorted."""
        model = self.model
        eng = model.engine
        kappa = self.constants.kappa
        subgroup = self.peripherals[sub]
        pts = []
        for z in self.kappa_ball:
            p = eng.mul(near_value, z)
            if subgroup.coset_rep_value(p) != key_value:
                continue
            if model.distance_values(p, other_value) <= kappa:
                pts.append(p)
        pts.sort(key=lambda v: (eng.length(v), tuple(eng.emit(v, model._letter_of_atom))))
        return pts

    def tuples_raw(self, g_value, h_value, with_witness: bool = False):
        """All decomposition tuples for the triangle (1, h, g), as values.

        Returns a list of (sub, g1, g2, g3, mid_g, mid_h, mid_k) sorted by
        (coset key, peripheral, g1, mid_h, mid_k) in ShortLex.  With
        ``with_witness`` each entry carries an eighth component: the coset's
        entrance/exit points (a1, b2, b1, c2, c1, a2) as values.
        """
        model = self.model
        eng = model.engine
        identity = eng.identity()
        side1 = geodesic_path_values(model, identity, h_value)       # q_h
        side2 = geodesic_path_values(model, h_value, g_value)        # h * q_k
        side3 = geodesic_path_values(model, identity, g_value)       # q_g
        sides = (side1, side2, side3)
        keyed = [self.scanner.side_keys(sv) for sv in sides]
        out = []
        interner = self.scanner.interner
        sl = lambda v: (eng.length(v), tuple(eng.emit(v, model._letter_of_atom)))
        for sub, kid in self.scanner.candidates(keyed):
            spans = []
            ok = True
            for keys in keyed:
                got = self.scanner.entrance_exit_indices(keys, sub, kid)
                if got is None:
                    ok = False
                    break
                spans.append((got[0], got[1]))
            if not ok:
                continue
            key_value = interner.key_values[sub][kid]
            a1 = side1[spans[0][0]]
            b2 = side1[spans[0][1]]
            b1 = side2[spans[1][0]]
            c2 = side2[spans[1][1]]
            a2 = side3[spans[2][0]]   # entrance of q_g, near 1
            c1 = side3[spans[2][1]]   # exit of q_g, near g
            pts_a = self._coset_points(sub, key_value, a1, a2)
            if not pts_a:
                continue
            pts_c = self._coset_points(sub, key_value, c1, c2)
            if not pts_c:
                continue
            pts_b = self._coset_points(sub, key_value, b2, b1)
            if not pts_b:
                continue
            key_sl = interner.sort_keys[sub][kid]
            witness = (a1, b2, b1, c2, c1, a2) if with_witness else None
            for pa in pts_a:
                pa_inv = eng.inv(pa)
                g1_sl = sl(pa)
                for pb in pts_b:
                    mid_h = eng.mul(pa_inv, pb)
                    g3 = eng.mul(eng.inv(pb), h_value)
                    mh_sl = sl(mid_h)
                    for pc in pts_c:
                        mid_g = eng.mul(pa_inv, pc)
                        mid_k = eng.mul(eng.inv(pb), pc)
                        g2 = eng.mul(eng.inv(pc), g_value)
                        record = (sub, pa, g2, g3, mid_g, mid_h, mid_k)
                        if with_witness:
                            record = record + (witness,)
                        out.append(((key_sl, sub, g1_sl, mh_sl, sl(mid_k)), record))
        out.sort(key=lambda t: t[0])
        return [t[1] for t in out]


def central_decompositions(g: Element, h: Element, constants: StarConstants,
                           peripherals: PeripheralStructure,
                           context: DecompositionContext | None = None) -> list[CentralDecomposition]:
    """All central decompositions of the triangle (1, h, g), in deterministic
    order (coset key, then g1, then h-middle, in ShortLex)."""
    model = g.model
    if context is None:
        context = DecompositionContext(model, peripherals, constants)
    out = []
    for sub, g1, g2, g3, mid_g, mid_h, mid_k, points in context.tuples_raw(
            g.value, h.value, with_witness=True):
        a1, b2, b1, c2, c1, a2 = (Element(model, v) for v in points)
        out.append(CentralDecomposition(
            Element(model, g1), Element(model, g2), Element(model, g3),
            Element(model, mid_g), Element(model, mid_h), Element(model, mid_k), sub,
            EntryExitRecord(a1, b2, b1, c2, c1, a2),
        ))
    return out


@dataclass
class DecompositionIndex:
    """Counting views of the decompositions of a fixed g over all (h, k) pairs
    with h in S(r1) and k = h^-1 g in S(r2)."""

    g: Element
    p: int
    r1: int
    r2: int
    d_g: list          # triples (g1, mid_g, g2), deduped, sorted
    l_g: list          # left parts
    r_g: list          # right parts
    lr_g: list         # (left, right) pairs
    c_d: dict          # triple -> list of (mid_h, mid_k, g3, peripheral)
    tuples: list       # every tagged tuple

    def e_d(self, d):
        return sorted({(mh, mk) for mh, mk, _, _ in self.c_d[d]})

    def e1_d(self, d):
        return sorted({mh for mh, _, _, _ in self.c_d[d]})

    def e2_d(self, d):
        return sorted({mk for _, mk, _, _ in self.c_d[d]})

    def u_d(self, d):
        return sorted({g3 for _, _, g3, _ in self.c_d[d]})

    def check_projections(self) -> bool:
        for d in self.d_g:
            pairs = self.e_d(d)
            if set(self.e1_d(d)) != {mh for mh, _ in pairs}:
                return False
            if set(self.e2_d(d)) != {mk for _, mk in pairs}:
                return False
        return True


def decomposition_index(g: Element, p: int, r1: int, r2: int, constants: StarConstants,
                        peripherals: PeripheralStructure,
                        ball: BallIndex | None = None,
                        context: DecompositionContext | None = None,
                        budget: int = DEFAULT_BALL_BUDGET) -> DecompositionIndex:
    """Aggregate central decompositions of g over all h in S(r1) with
    h^-1 g in S(r2).  Outside the admissible interval the index is empty."""
    model = g.model
    if g.length != p:
        raise GeodesicRangeError(f"g has length {g.length}, expected p={p}")
    empty = DecompositionIndex(g, p, r1, r2, [], [], [], [], {}, [])
    if p < abs(r1 - r2) or p > r1 + r2:
        return empty
    if ball is None or ball.radius < r1:
        ball = enumerate_ball(model, r1, budget=budget)
    if context is None:
        context = DecompositionContext(model, peripherals, constants)
    eng = model.engine
    g_inv = eng.inv(g.value)
    tuples = []
    for i in ball.sphere_range(r1):
        h_value = ball.values[i]
        k_value = eng.mul(eng.inv(h_value), g.value)
        if eng.length(k_value) != r2:
            continue
        tuples.extend(context.tuples_raw(g.value, h_value))
    return _index_from_tuples(g, p, r1, r2, tuples, model)


def _index_from_tuples(g, p, r1, r2, tuples, model):
    eng = model.engine
    sl = lambda v: (eng.length(v), tuple(eng.emit(v, model._letter_of_atom)))
    d_set = {}
    c_d: dict = {}
    for sub, g1, g2, g3, mid_g, mid_h, mid_k in tuples:
        d = (g1, mid_g, g2)
        d_set.setdefault(d, (sl(g1), sl(mid_g), sl(g2)))
        c_d.setdefault(d, []).append((mid_h, mid_k, g3, sub))
    d_sorted = sorted(d_set, key=lambda d: d_set[d])
    l_g = sorted({d[0] for d in d_sorted}, key=sl)
    r_g = sorted({d[2] for d in d_sorted}, key=sl)
    lr_g = sorted({(d[0], d[2]) for d in d_sorted}, key=lambda t: (sl(t[0]), sl(t[1])))
    return DecompositionIndex(g, p, r1, r2, d_sorted, l_g, r_g, lr_g, c_d, tuples)


def decomposition_table(model: GroupModel, peripherals: PeripheralStructure,
                        constants: StarConstants, r1: int, r2: int, p: int,
                        ball: BallIndex, context: DecompositionContext | None = None) -> dict:
    """For every g in S(p): the list of tagged decomposition tuples over all
    h in S(r1) with h^-1 g in S(r2).  Keys are ball indices of g."""
    if context is None:
        context = DecompositionContext(model, peripherals, constants)
    eng = model.engine
    out: dict[int, list] = {}
    if p < abs(r1 - r2) or p > r1 + r2 or p > ball.radius or r1 > ball.radius:
        return out
    h_values = [ball.values[i] for i in ball.sphere_range(r1)]
    for gi in ball.sphere_range(p):
        g_value = ball.values[gi]
        tuples = []
        for h_value in h_values:
            k_value = eng.mul(eng.inv(h_value), g_value)
            if eng.length(k_value) != r2:
                continue
            tuples.extend(context.tuples_raw(g_value, h_value))
        out[gi] = tuples
    return out


@dataclass
class CountBoundFit:
    c1: float
    c2: float
    max_table: list      # rows {"r1": r1, "max_count": n}
    witness: Optional[dict]  # {"r1", "p", "r2", "g"} achieving the global max
    recheck_count: Optional[int]

    def dominates(self) -> bool:
        return all(row["max_count"] <= self.c1 * row["r1"] + self.c2 + 1e-9
                   for row in self.max_table)

    def to_payload(self) -> dict:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "max_table": self.max_table,
            "witness": self.witness,
            "recheck_count": self.recheck_count,
        }


def count_bound_fit(model: GroupModel, peripherals: PeripheralStructure,
                    constants: StarConstants, p_max: int, r1_max: int,
                    ball: BallIndex | None = None, recheck: bool = True,
                    budget: int = DEFAULT_BALL_BUDGET) -> CountBoundFit:
    """Max |D_g| per r1 over all tested cells, with a linear envelope
    c1*r1 + c2 dominating every observed count."""
    radius = max(p_max, r1_max)
    if ball is None or ball.radius < radius:
        ball = enumerate_ball(model, radius, budget=budget)
    context = DecompositionContext(model, peripherals, constants)
    eng = model.engine
    best: dict[int, int] = {r1: 0 for r1 in range(r1_max + 1)}
    witness = None
    global_max = -1
    for p in range(p_max + 1):
        for gi in ball.sphere_range(p):
            g_value = ball.values[gi]
            for r1 in range(r1_max + 1):
                cells: dict[int, set] = {}
                for hi in ball.sphere_range(r1):
                    h_value = ball.values[hi]
                    r2 = eng.length(eng.mul(eng.inv(h_value), g_value))
                    bucket = cells.setdefault(r2, set())
                    for sub, g1, g2, g3, mid_g, mid_h, mid_k in context.tuples_raw(g_value, h_value):
                        bucket.add((g1, mid_g, g2))
                for r2, triples in cells.items():
                    n = len(triples)
                    if n > best[r1]:
                        best[r1] = n
                    if n > global_max:
                        global_max = n
                        witness = {"r1": r1, "p": p, "r2": r2,
                                   "g": model.word_str(ball.word_of_index(gi))}
    rows = [{"r1": r1, "max_count": best[r1]} for r1 in sorted(best)]
    c1, c2 = fit_linear_envelope([r["r1"] for r in rows], [r["max_count"] for r in rows])
    recheck_count = None
    if recheck and witness is not None:
        recheck_count = _recount_witness(model, peripherals, constants, witness, ball, context)
    return CountBoundFit(c1, c2, rows, witness, recheck_count)


def _recount_witness(model, peripherals, constants, witness, ball, context) -> int:
    """Independent re-enumeration of the witness cell, iterating everything in
    reversed order and recollecting the triple set from scratch."""
    eng = model.engine
    g = model.normalize(witness["g"])
    fresh = DecompositionContext(model, peripherals, constants)
    triples = set()
    h_indices = list(ball.sphere_range(witness["r1"]))
    for hi in reversed(h_indices):
        h_value = ball.values[hi]
        if eng.length(eng.mul(eng.inv(h_value), g.value)) != witness["r2"]:
            continue
        raw = fresh.tuples_raw(g.value, h_value)
        for item in reversed(raw):
            sub, g1, g2, g3, mid_g, mid_h, mid_k = item
            triples.add((g1, mid_g, g2))
    return len(triples)
