"""Point sets whose longest path, cycle or matching is unique and noncrossing.

Every construction starts from points on the x-axis, where the optimal
structures form a large family, and lifts points one at a time to tiny
heights so that exactly one family member survives.  Each lift is bounded by
a certified threshold: the height difference that still lets the anchor's
nearest plausible neighbour out-gain every alternative.  The thresholds,
heights and the claimed optimum are recorded in a :class:`Certificate` so a
verifier can replay them.

Notation in this module: the *excess* of an edge with horizontal extent
``dx`` and vertical extent ``dy`` is ``sqrt(dx^2 + dy^2) - dx``, the amount
by which lifting lengthens it.  It is evaluated as
``dy^2 / (sqrt(dx^2 + dy^2) + dx)``, which has no cancellation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactnum import (
    Cmp,
    compare_radical_sums,
    format_rat,
    parse_rat,
    sci,
    sqrt_interval,
    truncate_down,
)
from .geometry import Kind, Point, PointSet, Structure, dist2
from .line1d import LineSet, median

log = logging.getLogger(__name__)

MAX_GAP_BITS = 1 << 17
FIXPOINT_ROUNDS = 10


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Step:
    """One lifted point.

    ``rule`` says how ``threshold`` is recomputed from the frozen coordinates:
    ``path`` and ``cycle`` re-run the threshold formulas from ``anchors`` over
    ``candidates`` with ``n`` points, ``forced`` is the lowest anchor height,
    ``pair`` is the cycle bound restricted to two candidates, ``fixed`` has no
    threshold.
    """
    label: str
    y: Fraction
    threshold: Fraction
    provenance: str
    rule: str = "fixed"
    anchors: tuple = ()
    candidates: tuple = ()
    n: int = 0

    def to_json(self) -> dict:
        return {"label": self.label, "y": format_rat(self.y),
                "threshold": format_rat(self.threshold), "provenance": self.provenance,
                "rule": self.rule, "anchors": list(self.anchors),
                "candidates": list(self.candidates), "n": self.n}

    @classmethod
    def from_json(cls, d: dict) -> "Step":
        return cls(d["label"], parse_rat(d["y"]), parse_rat(d["threshold"]), d["provenance"],
                   d.get("rule", "fixed"), tuple(d.get("anchors", ())),
                   tuple(d.get("candidates", ())), int(d.get("n", 0)))


@dataclass
class Certificate:
    kind: str
    k: int
    epsilon: Fraction
    steps: list[Step]
    claimed_optimum: Structure
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "epsilon": format_rat(self.epsilon),
            "steps": [s.to_json() for s in self.steps],
            "claimed_optimum": self.claimed_optimum.to_json(),
            "checks": self.checks,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        return cls(d["kind"], int(d["k"]), parse_rat(d["epsilon"]),
                   [Step.from_json(s) for s in d["steps"]],
                   Structure.from_json(d["claimed_optimum"]), dict(d.get("checks") or {}))

    def summary(self) -> str:
        lines = [f"{self.kind} k={self.k} epsilon={sci(self.epsilon)}"]
        for s in self.steps:
            lines.append(f"  {s.label:>8}  y={sci(s.y):>14}  threshold={sci(s.threshold):>14}"
                         f"  [{s.provenance}]")
        order = self.checks.get("order")
        lines.append(f"  claimed: {','.join(order) if order else self.claimed_optimum}")
        return "\n".join(lines)


# -- certified excess bounds -----------------------------------------------------

def _excess_bounds(dx: Fraction, dy: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    dx, dy = abs(Fraction(dx)), abs(Fraction(dy))
    if dy == 0:
        return Fraction(0), Fraction(0)
    s = sqrt_interval(dx * dx + dy * dy, bits)
    num = dy * dy
    return num / (s.hi + dx), num / (s.lo + dx)


def excess(dx, dy, bits: int = 256) -> Fraction:
    """Midpoint approximation of the excess, for diagnostics."""
    lo, hi = _excess_bounds(Fraction(dx), Fraction(dy), bits)
    return (lo + hi) / 2


def _gap_lower(near: tuple, far: tuple, divisor: Fraction) -> Fraction:
    """Certified dyadic lower bound of (excess(near) - excess(far)) / divisor.

    ``near`` and ``far`` are ``(dx, dy)`` pairs.  Precision grows until the
    bound is positive and within 1/64 of the true value.
    """
    bits = 128
    while bits <= MAX_GAP_BITS:
        nlo, nhi = _excess_bounds(*near, bits)
        flo, fhi = _excess_bounds(*far, bits)
        if nhi <= flo:
            # provably non-positive, or both excesses are zero
            if nhi == 0 or nhi < flo or bits > 4096:
                raise ConstructionError(
                    f"threshold is not positive (near {near}, far {far})")
        lo, hi = nlo - fhi, nhi - flo
        if lo > 0 and hi - lo <= lo / 64:
            return truncate_down(lo / divisor)
        bits *= 2
    raise ConstructionError("threshold could not be certified within the precision budget")


def compute_delta_path(anchor: Point, candidates: Sequence[Point], n: int) -> Fraction:
    """Height bound that makes ``anchor``'s nearest candidate its path neighbour.

    Candidates are the plausible next neighbours, evaluated as if resting on
    the x-axis.  The excess of the nearest candidate minus that of the second
    nearest, split over the ``n - 1`` path edges, bounds every later height.
    """
    if len(candidates) < 2:
        raise ValueError("need at least two candidates")
    if anchor.y == 0:
        raise ConstructionError("anchor at height 0 cannot discriminate its neighbours")
    cs = sorted(candidates, key=lambda c: (abs(c.x - anchor.x), c.label))
    near = (cs[0].x - anchor.x, anchor.y)
    far = (cs[1].x - anchor.x, anchor.y)
    return _gap_lower(near, far, Fraction(n - 1))


def compute_delta_cycle(anchor: Point, candidates: Sequence[Point], n: int) -> Fraction:
    """Cycle variant: the anchor keeps its two nearest candidates.

    Half of (second-nearest excess minus third-nearest excess) over the
    ``n`` cycle edges.
    """
    if len(candidates) < 3:
        raise ValueError("need at least three candidates")
    if anchor.y == 0:
        raise ConstructionError("anchor at height 0 cannot discriminate its neighbours")
    cs = sorted(candidates, key=lambda c: (abs(c.x - anchor.x), c.label))
    second = (cs[1].x - anchor.x, anchor.y)
    third = (cs[2].x - anchor.x, anchor.y)
    return _gap_lower(second, third, Fraction(2 * n))


# -- generic alternating chain ----------------------------------------------------

def _alternating_chain(xs: dict[str, Fraction], top: str, bottom: str, y_top: Fraction,
                       n_edges_total: int, tag: str, cap: Fraction | None = None):
    """Heights for a path that zigzags across the median from ``top`` to ``bottom``.

    At each step the anchor picks the nearest unused point on the other side
    of the median (``bottom`` only when nothing else is left).  The next
    height is half the certified threshold; steps with a single plausible
    neighbour halve the anchor's height instead.  Returns
    ``(order, ys, steps)``.
    """
    med = median(LineSet(tuple(xs.values())))
    left = {l for l, x in xs.items() if x < med}
    right = {l for l, x in xs.items() if x > med}
    if len(left) != len(right) or len(left) + len(right) != len(xs):
        raise ConstructionError("median must separate the points into equal halves")
    ys = {top: Fraction(y_top)}
    order = [top]
    used = {top}
    steps: list[Step] = []
    cur = top
    step_no = 0
    ceiling = cap
    while len(order) < len(xs):
        side = right if cur in left else left
        plausible = [l for l in side if l not in used and l != bottom]
        if not plausible:
            plausible = [bottom]
        step_no += 1
        anchor = Point(cur, xs[cur], ys[cur])
        if len(plausible) >= 2:
            cands = [Point(l, xs[l], 0) for l in plausible]
            delta = compute_delta_path(anchor, cands, n_edges_total + 1)
            prov, rule = f"{tag}-step{step_no}", "path"
            nxt = min(plausible, key=lambda l: (abs(xs[l] - xs[cur]), l))
        else:
            delta = ys[cur]
            prov, rule = f"{tag}-step{step_no}-forced", "forced"
            nxt = plausible[0]
        if ceiling is not None:
            delta = min(delta, ceiling)
            ceiling = None
        y = Fraction(0) if nxt == bottom else delta / 2
        ys[nxt] = y
        steps.append(Step(nxt, y, delta, prov, rule, (cur,), tuple(sorted(plausible)),
                          n_edges_total + 1))
        order.append(nxt)
        used.add(nxt)
        cur = nxt
    return order, ys, steps


# -- paths -----------------------------------------------------------------------

def _path_even_xs(k: int) -> dict[str, Fraction]:
    xs = {"p1": Fraction(0), "p-1": Fraction(-1)}
    for i in range(2, k + 1):
        xs[f"p{i}"] = Fraction(i)
        xs[f"p-{i}"] = Fraction(-i)
    return xs


def claimed_path_order(k: int) -> list[str]:
    order = ["p1"]
    for i in range(2, k + 1):
        order += [f"p-{i}", f"p{i}"]
    return order + ["p-1"]


def construct_path_even(k: int) -> tuple[PointSet, Certificate]:
    if k < 3:
        raise ValueError("the even path construction needs k >= 3")
    xs = _path_even_xs(k)
    y1 = Fraction(1, 8 * k)
    order, ys, steps = _alternating_chain(xs, "p1", "p-1", y1, 2 * k - 1, "L5")
    if order != claimed_path_order(k):
        raise ConstructionError(f"chain produced {order}")
    # the bottom endpoint is fixed at 0 by construction, not by a threshold
    steps = [s for s in steps if s.label != "p-1"]
    pts = tuple(Point(l, xs[l], ys[l]) for l in _path_labels(k))
    ps = PointSet(pts, {"construction": "path-even", "k": k})
    cert = Certificate("path-even", k, Fraction(0), steps, Structure.path(order),
                       {"y_top": format_rat(y1), "order": order})
    _check_chain(cert)
    return ps, cert


def _path_labels(k: int) -> list[str]:
    labels = [f"p-{i}" for i in range(k, 0, -1)] + ["p1"]
    return labels + [f"p{i}" for i in range(2, k + 1)]


def construct_path_odd(k: int) -> tuple[PointSet, Certificate]:
    ps, cert = construct_path_even(k)
    odd = ps.without("p1")
    odd.metadata.update({"construction": "path-odd", "k": k})
    order = claimed_path_order(k)[1:]
    # the first threshold was anchored at the removed point; keep it as a fixed top height
    first = cert.steps[0]
    steps = [Step(first.label, first.y, first.threshold, first.provenance + "-inherited")]
    steps += cert.steps[1:]
    c = Certificate("path-odd", k, Fraction(0), steps, Structure.path(order),
                    {**cert.checks, "removed": "p1", "order": order})
    return odd, c


def construct_path_general(xs: Sequence, delta) -> tuple[PointSet, Certificate]:
    """Lift an even set of x-coordinates so the longest path is unique and noncrossing.

    Heights stay in ``[0, delta]``; the path runs from the point just left of
    the median (height ``delta``) to the point just right of it (height 0).
    """
    ls = LineSet(tuple(Fraction(x) for x in xs))
    delta = Fraction(delta)
    n = len(ls)
    if n % 2 or n < 2:
        raise ValueError("need an even, positive number of x-coordinates")
    if delta <= 0:
        raise ValueError("delta must be positive")
    med = median(ls)
    if any(abs(v - med) <= delta for v in ls.values):
        raise ValueError("the delta-neighbourhood of the median must be empty")
    labels = {format_rat(v): v for v in ls.values}
    top = format_rat(ls.values[n // 2 - 1])
    bottom = format_rat(ls.values[n // 2])
    if n == 2:
        order, ys, steps = [top, bottom], {top: delta, bottom: Fraction(0)}, []
    else:
        # heights must also stay under the 1-D separation margin, see the ledger
        cap = delta * 2 / (8 * n)
        order, ys, steps = _general_chain(labels, top, bottom, delta, n - 1, cap)
    pts = tuple(Point(l, x, ys[l]) for l, x in labels.items())
    ps = PointSet(pts, {"construction": "path-general", "delta": format_rat(delta)})
    cert = Certificate("general-path", n // 2, Fraction(0), steps, Structure.path(order),
                       {"delta": format_rat(delta), "top": top, "bottom": bottom})
    return ps, cert


def _general_chain(xs, top, bottom, y_top, n_edges, cap):
    order, ys, steps = _alternating_chain(xs, top, bottom, y_top, n_edges, "L11", cap)
    return order, ys, [s for s in steps if s.label != bottom]


def _check_chain(cert: Certificate):
    prev = None
    for s in cert.steps:
        if s.rule != "fixed" and s.y > s.threshold:
            raise ConstructionError(f"{s.label}: height above its threshold")
        if prev is not None and not s.y < prev:
            raise ConstructionError(f"{s.label}: heights must strictly decrease")
        prev = s.y


# -- matching ------------------------------------------------------------------------

def construct_matching(k: int) -> tuple[PointSet, Certificate]:
    """Mirror pairs p-i p_i with heights y1 >> y-1 = y2 >> ... = yk >> y-k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ys = {"p1": Fraction(1, 8 * k)}
    steps: list[Step] = []
    for i in range(1, k):
        anchor = Point(f"p{i}", i, ys[f"p{i}"])
        cands = [Point(f"p-{j}", -j, 0) for j in range(i, k + 1)]
        delta = compute_delta_path(anchor, cands, k + 1)
        y = delta / 2
        ys[f"p-{i}"] = y
        ys[f"p{i + 1}"] = y
        meta = ("path", (f"p{i}",), tuple(c.label for c in cands), k + 1)
        steps.append(Step(f"p-{i}", y, delta, f"M-step{i}", *meta))
        steps.append(Step(f"p{i + 1}", y, delta, f"M-step{i}-tie", *meta))
    ys[f"p-{k}"] = Fraction(0)
    pts = tuple(Point(f"p{s}{i}", s_i * i, ys[f"p{s}{i}"])
                for i in range(1, k + 1) for s, s_i in (("-", -1), ("", 1)))
    ps = PointSet(pts, {"construction": "matching", "k": k})
    claimed = Structure.matching([(f"p-{i}", f"p{i}") for i in range(1, k + 1)])
    cert = Certificate("matching", k, Fraction(0), steps, claimed,
                       {"nested": _nested(ps, claimed)})
    return ps, cert


def _nested(ps: PointSet, m: Structure) -> bool:
    # p-i p_i for increasing i: each segment's x-span contains the previous one
    spans = sorted((min(ps[a].x, ps[b].x), max(ps[a].x, ps[b].x)) for a, b in m.pairs)
    return all(a[0] > b[0] and a[1] < b[1]
               for a, b in zip(sorted(spans, key=lambda s: s[1] - s[0]),
                               sorted(spans, key=lambda s: s[1] - s[0])[1:]))


# -- even cycles -----------------------------------------------------------------------

def _cycle_even_xs(n: int, eps: Fraction) -> tuple[int, dict[str, Fraction]]:
    if n % 2 or n < 6:
        raise ValueError("even cycle construction needs an even n >= 6")
    four_k = n % 4 == 0
    k = n // 4 if four_k else (n + 2) // 4
    xs: dict[str, Fraction] = {}
    for i in range(1, k + 1):
        xs[f"p{i}"] = Fraction(i)
        xs[f"p-{i}"] = Fraction(-i)
    primes = [-1] + [s * i for i in range(2, k) for s in (1, -1)] + [k]
    for i in primes:
        xs[f"p'{i}"] = i + eps
    if four_k:
        xs[f"p{k + 1}"] = Fraction(k + 1)
        xs[f"p'-{k}"] = -k + eps
    return k, xs


def claimed_cycle_even(n: int) -> list[str]:
    """p1,p-1,p2,p-2,...,p-k then back through p'k,...,p'2,p'-1 (via p_{k+1} when 4 | n)."""
    four_k = n % 4 == 0
    k = n // 4 if four_k else (n + 2) // 4
    a = ["p1"]
    for i in range(1, k + 1):
        a.append(f"p-{i}")
        if i < k:
            a.append(f"p{i + 1}")
    b = []
    for i in range(1, k):
        b += [f"p'-{i}", f"p'{i + 1}"]
    if four_k:
        b.append(f"p'-{k}")
        return a + [f"p{k + 1}"] + b[::-1]
    return a + b[::-1]


def _height_on(a: Point, b: Point, x: Fraction) -> Fraction:
    t = (x - a.x) / (b.x - a.x)
    return a.y + t * (b.y - a.y)


def _eq1_holds(ps_pts: dict, keep: tuple, swap: tuple) -> Cmp:
    """Compare |keep edges| against |swapped edges| exactly."""
    def terms(edges):
        return [(Fraction(1), dist2(ps_pts[u], ps_pts[v])) for u, v in edges]
    return compare_radical_sums(terms(keep), terms(swap))


def _even_cycle_chain(n: int, eps: Fraction):
    k, xs = _cycle_even_xs(n, eps)
    four_k = n % 4 == 0
    P: dict[str, Point] = {}
    steps: list[Step] = []
    eq1: list[dict] = []
    thresholds: list[Fraction] = []

    def place(label, y):
        P[label] = Point(label, xs[label], y)

    def side_unused(right: bool):
        return [l for l in xs if l not in P and ((xs[l] > 0) == right)]

    place("p1", Fraction(1, 16 * k))
    # first split: p1 keeps p-1 and p'-1
    cands = [Point(l, xs[l], 0) for l in side_unused(False)]
    delta = compute_delta_cycle(P["p1"], cands, n)
    thresholds.append(delta)
    place("p-1", delta / 2)
    h = _height_on(P["p1"], P["p-1"], xs["p'-1"])
    place("p'-1", h - (h - P["p-1"].y) / 4)
    meta = ("cycle", ("p1",), tuple(c.label for c in cands), n)
    steps += [Step("p'-1", P["p'-1"].y, delta, "L9-near", *meta),
              Step("p-1", P["p-1"].y, delta, "L9", *meta)]

    # then pairs (p_a, p'_a) hand over to targets on the other side
    anchors = ("p-1", "p'-1")
    step_no = 0
    while True:
        right = xs[anchors[0]] < 0
        remaining = side_unused(right)
        if not remaining:
            break
        step_no += 1
        if len(remaining) == 1:
            # both chains close on the last point
            last = remaining[0]
            place(last, Fraction(0))
            lowest = min(P[a].y for a in anchors)
            steps.append(Step(last, Fraction(0), lowest, f"L10-step{step_no}-forced",
                              "forced", anchors, (last,), n))
            thresholds.append(lowest)
            break
        a_plain, a_prime = anchors
        # targets: the two nearest unused points on the other side
        tgt = sorted(remaining, key=lambda l: (abs(xs[l] - xs[a_plain]), l))[:2]
        if right:
            # left anchors p-i, p'-i reach p_{i+1} (placed near p'-i p'_{i+1}) and p'_{i+1}
            t_plain = next(l for l in tgt if "'" not in l)
            t_prime = next(l for l in tgt if "'" in l)
            t_delta, t_near, near_from, other = t_prime, t_plain, a_prime, a_plain
        else:
            # right anchors p_i, p'_i reach p-i (by threshold) and p'-i (placed near p_i p-i)
            t_plain = next(l for l in tgt if "'" not in l)
            t_prime = next(l for l in tgt if "'" in l)
            t_delta, t_near, near_from, other = t_plain, t_prime, a_plain, a_prime
        if len(remaining) >= 3:
            c = [Point(l, xs[l], 0) for l in remaining]
            delta = min(compute_delta_cycle(P[a_plain], c, n), compute_delta_cycle(P[a_prime], c, n))
            prov, rule = f"L10-step{step_no}", "cycle"
        else:
            delta = min(P[a_plain].y, P[a_prime].y)
            prov, rule = f"L10-step{step_no}-forced", "forced"
        meta = (rule, anchors, tuple(sorted(remaining)), n)
        thresholds.append(delta)
        place(t_delta, delta / 2)
        # near placement inside the triangle (anchors, t_delta), close to the side near_from-t_delta
        x = xs[t_near]
        h_near = _height_on(P[near_from], P[t_delta], x)
        h_far = _height_on(P[other], P[t_delta], x)
        offset = (h_far - h_near) / 4
        keep = ((other, t_near), (near_from, t_delta))
        swap = ((other, t_delta), (near_from, t_near))
        for _ in range(64):
            place(t_near, h_near + offset)
            verdict = _eq1_holds(P, keep, swap)
            if verdict is Cmp.GREATER:
                break
            offset /= 2
        else:
            raise ConstructionError(f"placement of {t_near}: exchange inequality fails")
        eq1.append({"keep": [list(e) for e in keep], "swap": [list(e) for e in swap],
                    "verdict": verdict.value})
        y_near = P[t_near].y
        near_step = Step(t_near, y_near, delta, prov + "-near", *meta)
        delta_step = Step(t_delta, P[t_delta].y, delta, prov, *meta)
        steps += sorted([near_step, delta_step], key=lambda s: -s.y)
        # next anchors: plain chain continues from the target joined to the plain anchor
        if right:
            anchors = (t_near, t_delta)
        else:
            anchors = (t_delta, t_near)
    missing = [l for l in xs if l not in P]
    if missing:
        raise ConstructionError(f"unplaced points {missing}")
    return k, xs, P, steps, eq1, thresholds


def construct_cycle_even(n: int) -> tuple[PointSet, Certificate]:
    """Even n = 4k-2 or 4k; epsilon settled by a fixpoint against the last threshold."""
    if n % 2 or n < 6:
        raise ValueError("even cycle construction needs an even n >= 6")
    k = n // 4 if n % 4 == 0 else (n + 2) // 4
    eps = Fraction(1, 16 * k * k)
    for rnd in range(FIXPOINT_ROUNDS):
        k, xs, P, steps, eq1, thresholds = _even_cycle_chain(n, eps)
        final = min(thresholds)
        if eps <= final:
            break
        eps = truncate_down(min(eps, final) / 2)
    else:
        raise ConstructionError("epsilon fixpoint did not settle")
    order_labels = sorted(xs, key=lambda l: (xs[l], l))
    ps = PointSet(tuple(P[l] for l in order_labels),
                  {"construction": "cycle-even", "n": n, "k": k, "epsilon": format_rat(eps)})
    order = claimed_cycle_even(n)
    claimed = Structure.cycle(order)
    kind = "cycle-even-4k" if n % 4 == 0 else "cycle-even-4k-2"
    head = Step("p1", P["p1"].y, P["p1"].y, "fixed")
    cert = Certificate(kind, k, eps, [head] + steps, claimed,
                       {"order": order, "exchange_inequality": eq1, "fixpoint_rounds": rnd + 1,
                        "final_threshold": format_rat(final)})
    _check_chain(Certificate(kind, k, eps, steps, claimed))
    return ps, cert


# -- odd cycles ---------------------------------------------------------------------------

def _cluster_label(i: int) -> str:
    if i == 0:
        return "p0"
    if i == 1:
        return "p-eps"
    return f"p-{i}eps"


def construct_cycle_odd(k: int) -> tuple[PointSet, Certificate]:
    """n = 2k+1: a low point p-k, a cluster near the origin and p1..pk."""
    if k < 2:
        raise ValueError("odd cycle construction needs k >= 2")
    n = 2 * k + 1
    Y = Fraction(1, 16 * k)
    bottom = Point(f"p-{k}", -k, -Y)
    # p-k keeps p1 over p2: compare excesses at horizontal extents k+1 and k+2
    delta = _gap_lower((Fraction(k + 1), Y), (Fraction(k + 2), Y), Fraction(2 * n))
    y0 = delta
    # the edge p-k p0 must out-gain everything below delta1
    probe = delta / 4
    gain = _gap_lower((Fraction(k), Y + y0), (Fraction(k), Y + probe), Fraction(2 * n))
    delta1 = min(probe, gain)
    eps = min(truncate_down(delta1 / 2), Fraction(1, 32 * k * k))
    xs = {_cluster_label(i): -i * eps for i in range(k)}
    for i in range(1, k + 1):
        xs[f"p{i}"] = Fraction(i)
    order, ys, steps = _alternating_chain(xs, "p0", "p1", y0, 2 * k - 1, "L11", cap=delta1)
    steps = [s for s in steps if s.label != "p1"]
    pts = [bottom] + [Point(l, xs[l], ys[l]) for l in sorted(xs, key=lambda l: xs[l])]
    ps = PointSet(tuple(pts), {"construction": "cycle-odd", "k": k, "epsilon": format_rat(eps)})
    claimed = Structure.cycle([bottom.label] + order)
    below = all(_strictly_below(bottom, ps["p0"], ps[l]) for l in xs if l != "p0")
    head = [Step("p0", y0, delta, "L5-odd-anchor", "pair", (bottom.label,), ("p1", "p2"), n)]
    tail = [Step("p1", Fraction(0), Fraction(0), "fixed"), Step(bottom.label, -Y, -Y, "fixed")]
    cert = Certificate("cycle-odd", k, eps, head + steps + tail, claimed,
                       {"order": [bottom.label] + order, "delta": format_rat(delta),
                        "delta1": format_rat(delta1),
                        "cluster_below_segment": below})
    if not below:
        raise ConstructionError("cluster point on or above the segment p-k p0")
    return ps, cert


def _strictly_below(a: Point, b: Point, p: Point) -> bool:
    """p lies strictly below the line through a and b (a.x < b.x)."""
    return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0


# -- small cases --------------------------------------------------------------------------

SMALL_POINTS = [(0, 0), (4, 0), (2, 3), (2, 1), (1, 5)]


def construct_small(kind: str, n: int) -> tuple[PointSet, Certificate]:
    """Hand-picked sets below the general constructions' size ranges."""
    kind = Kind(kind).value
    if kind == "path" and not 1 <= n <= 5:
        raise ValueError("small paths cover n = 1..5")
    if kind == "cycle" and n not in (3, 4):
        raise ValueError("small cycles cover n = 3, 4")
    if kind == "matching":
        raise ValueError("use construct_matching for matchings")
    coords = SMALL_POINTS[:n] if n != 3 else [(0, 0), (4, 0), (2, 3)]
    labels = [f"s{i}" for i in range(n)]
    ps = PointSet.from_xy(coords, labels, construction=f"small-{kind}", n=n)
    from .maxsolvers import solve

    if kind == "path" and n == 1:
        claimed = Structure.path(labels)
        verdict = "proven"
    else:
        res = solve(ps, kind)
        claimed, verdict = res.best, res.unique.value
    cert = Certificate(f"small-{kind}", 0, Fraction(0), [], claimed, {"uniqueness": verdict})
    return ps, cert


# -- verification helpers ---------------------------------------------------------------

def replay_certificate(ps: PointSet, cert: Certificate) -> list[dict]:
    """Recompute every recorded threshold from the frozen coordinates.

    Each row carries ``ok``: the recomputed bound is at least the recorded
    one and the point's height does not exceed it.
    """
    rows = []
    for st in cert.steps:
        if st.rule == "fixed" or not st.anchors:
            continue
        if st.rule == "forced":
            again = min(ps[a].y for a in st.anchors)
        elif st.rule == "path":
            a = ps[st.anchors[0]]
            again = compute_delta_path(a, [Point(c, ps[c].x, 0) for c in st.candidates], st.n)
        elif st.rule == "cycle":
            again = min(compute_delta_cycle(ps[a], [Point(c, ps[c].x, 0) for c in st.candidates],
                                            st.n) for a in st.anchors)
        elif st.rule == "pair":
            a = ps[st.anchors[0]]
            c1, c2 = (ps[c] for c in st.candidates)
            again = _gap_lower((c1.x - a.x, a.y), (c2.x - a.x, a.y), Fraction(2 * st.n))
        else:
            raise ValueError(f"unknown rule {st.rule!r}")
        rows.append({"label": st.label, "recorded": st.threshold, "recomputed": again,
                     "ok": again >= st.threshold and ps[st.label].y <= again})
    return rows


def check_chain(cert: Certificate) -> dict:
    """Heights decrease along the steps (ties only where the matching pairs them)
    and every height is under its threshold."""
    st = cert.steps
    dec = all(a.y > b.y or (a.y == b.y and b.provenance.endswith("-tie"))
              for a, b in zip(st, st[1:]))
    return {
        "decreasing": dec,
        "under_threshold": all(s.y <= s.threshold for s in st if s.rule != "fixed"),
    }


def extension_misses(path: Structure, ps: PointSet) -> list[tuple]:
    """Pairs (edge, later edge) where the ray extending the directed edge misses.

    The path is taken in the stored direction.  Edges sharing the ray's far
    endpoint are met trivially and skipped.
    """
    from .geometry import ray_hits_segment

    e = path.edges()
    out = []
    for i, (a, b) in enumerate(e):
        for c, d in e[i + 1:]:
            if b in (c, d):
                continue
            if not ray_hits_segment(ps[a], ps[b], (ps[c], ps[d])):
                out.append(((a, b), (c, d)))
    return out


def check_general_path(ps: PointSet, cert: Certificate, ls: LineSet, delta: Fraction,
                       opts=None) -> dict:
    """The five properties promised for a lifted general path."""
    from .line1d import is_longest_path_1d
    from .maxsolvers import Uniqueness, max_path
    from .geometry import is_noncrossing

    delta = Fraction(delta)
    coords = {p.label: p.x for p in ps}
    out = {
        "x_projection": sorted(coords.values()) == list(ls.values),
        "y_range": all(0 <= p.y <= delta for p in ps),
    }
    res = max_path(ps, opts)
    out["projection_is_1d_optimum"] = is_longest_path_1d(res.best, ls, coords)
    out["unique_noncrossing"] = res.unique is Uniqueness.PROVEN and is_noncrossing(res.best, ps)
    ends = sorted(ps[l].y for l in (res.best.order[0], res.best.order[-1]))
    out["endpoint_heights"] = ends == [0, delta]
    out["matches_claim"] = res.best == cert.claimed_optimum
    return out


def verify_construction(ps: PointSet, cert: Certificate, opts=None) -> dict:
    """Solve exactly and compare against the claim; reports capacity skips."""
    from .geometry import crossing_pairs
    from .maxsolvers import CapacityError, Uniqueness, solve

    kind = cert.claimed_optimum.kind.value
    try:
        res = solve(ps, kind, opts)
    except CapacityError as exc:
        return {"status": "skipped (capacity)", "reason": str(exc)}
    ok = (res.best == cert.claimed_optimum and res.unique is Uniqueness.PROVEN
          and not crossing_pairs(res.best, ps))
    return {"status": "pass" if ok else "fail", "unique": res.unique.value,
            "best": str(res.best), "claimed": str(cert.claimed_optimum),
            "crossings": len(crossing_pairs(res.best, ps)), "method": res.method.value}


def build(kind: str, size: int) -> tuple[PointSet, Certificate]:
    """Dispatch by construction name; ``size`` is k, except n for even cycles."""
    if kind not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {kind!r}; choose from {sorted(CONSTRUCTIONS)}")
    return CONSTRUCTIONS[kind](size)


CONSTRUCTIONS = {
    "path-even": construct_path_even,
    "path-odd": construct_path_odd,
    "cycle-even": construct_cycle_even,
    "cycle-odd": construct_cycle_odd,
    "matching": construct_matching,
}
