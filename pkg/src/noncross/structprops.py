"""Structural facts about long cycles and simple polygons.

* flippable pairs: two non-adjacent directed edges that are hull edges of
  their strictly convex quadrilateral and run the same way around it.
  Swapping them for the hull diagonals is a 2-opt move that keeps one cycle
  and strictly lengthens it, so a maximum cycle has none.
* the diametric pair of a set need not be an edge of its maximum cycle.
* every simple polygon has an edge among the smallest 3n^2/8 + n/8 of all
  pairwise distances.
"""

from __future__ import annotations

import functools
import json
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import combinations

from .exactnum import Cmp, Interval, compare_radical_sums, sqrt_interval
from .geometry import (
    Kind,
    Point,
    PointSet,
    Structure,
    convex_position_same_orientation,
    cross,
    crossing_pairs,
    dist2,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlipPair:
    e1: tuple[str, str]
    e2: tuple[str, str]
    gain: Interval

    def to_json(self) -> dict:
        return {"e1": list(self.e1), "e2": list(self.e2), "gain": self.gain.to_json()}


def _gain(ps: PointSet, e1, e2, bits: int) -> Interval:
    (a, b), (c, d) = e1, e2
    lo = hi = Fraction(0)
    for (u, v), sign in (((a, c), 1), ((b, d), 1), ((a, b), -1), ((c, d), -1)):
        r = sqrt_interval(dist2(ps[u], ps[v]), bits)
        if sign > 0:
            lo, hi = lo + r.lo, hi + r.hi
        else:
            lo, hi = lo - r.hi, hi - r.lo
    return Interval(lo, hi, bits)


def _directed(cycle: Structure) -> list[tuple[str, str]]:
    if cycle.kind is not Kind.CYCLE:
        raise ValueError("expected a cycle")
    return cycle.edges()


def find_flippable_pairs(cycle: Structure, ps: PointSet, precision_bits: int = 128) -> list[FlipPair]:
    """All flippable pairs of the cycle in its stored direction."""
    if not cycle.spans(ps):
        raise ValueError("cycle must span the point set")
    edges = _directed(cycle)
    out = []
    for e1, e2 in combinations(edges, 2):
        if set(e1) & set(e2):
            continue
        if not convex_position_same_orientation((ps[e1[0]], ps[e1[1]]), (ps[e2[0]], ps[e2[1]])):
            continue
        # diagonals of a strictly convex quadrilateral beat either pair of sides,
        # so the exact comparison always resolves; the interval is for reporting
        terms_new = [(1, dist2(ps[e1[0]], ps[e2[0]])), (1, dist2(ps[e1[1]], ps[e2[1]]))]
        terms_old = [(1, dist2(ps[e1[0]], ps[e1[1]])), (1, dist2(ps[e2[0]], ps[e2[1]]))]
        if compare_radical_sums(terms_new, terms_old) is not Cmp.GREATER:
            log.warning("convex pair %s %s without certified gain", e1, e2)
            continue
        bits = precision_bits
        g = _gain(ps, e1, e2, bits)
        while g.lo <= 0:
            bits *= 2
            g = _gain(ps, e1, e2, bits)
        out.append(FlipPair(e1, e2, g))
    return out


def flip(cycle: Structure, pair: FlipPair, ps: PointSet | None = None) -> Structure:
    """Replace e1 = (a, b) and e2 = (c, d) by (a, c) and (b, d).

    The stretch from b to c is reversed, so the result is still one cycle.
    When ``ps`` is given the pair is re-validated geometrically.
    """
    edges = _directed(cycle)
    if pair.e1 not in edges or pair.e2 not in edges or set(pair.e1) & set(pair.e2):
        raise ValueError("pair is not a pair of non-adjacent edges of this cycle")
    if ps is not None and not convex_position_same_orientation(
            (ps[pair.e1[0]], ps[pair.e1[1]]), (ps[pair.e2[0]], ps[pair.e2[1]])):
        raise ValueError("edges are not in convex position with the same orientation")
    a, b = pair.e1
    c, _ = pair.e2
    order = list(cycle.order)
    i = order.index(b)
    seq = order[i:] + order[:i]          # b ... c d ... a
    j = seq.index(c)
    new = seq[:j + 1][::-1] + seq[j + 1:]  # c ... b d ... a
    return Structure.cycle(new, canonical=False)


def improve_by_flips(cycle: Structure, ps: PointSet, max_rounds: int | None = None) -> tuple[Structure, int]:
    """Flip until no flippable pair is left.  Returns the cycle and the number of flips.

    The length rises strictly with every flip, so this terminates; the bound
    on rounds is a safety net (the number of distinct cycles).
    """
    from math import factorial

    n = len(ps)
    limit = max_rounds if max_rounds is not None else factorial(n - 1) // 2 + 1
    flips = 0
    while flips < limit:
        pairs = find_flippable_pairs(cycle, ps)
        if not pairs:
            return cycle, flips
        cycle = flip(cycle, pairs[0])
        flips += 1
    raise RuntimeError("flip loop exceeded its bound")


# -- diametric pair ------------------------------------------------------------

def diametric_counterexample(n: int) -> tuple[PointSet, tuple[str, str]]:
    """a = (1,0), c = (0,1) and n-2 points close to the origin.

    ``{a, c}`` is the unique diametric pair, yet the maximum cycle shuttles
    between the far points and the cluster and never uses edge ac.
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    m = n - 2
    pts = [Point("a", 1, 0), Point("c", 0, 1)]
    for i in range(m):
        t = Fraction(i, m - 1)
        pts.append(Point(f"b{i + 1}", (1 - t) / 100, t / 100))
    return PointSet(tuple(pts), {"construction": "diametric", "n": n}), ("a", "c")


def diametric_pairs(ps: PointSet) -> list[tuple[str, str]]:
    d = {(p.label, q.label): dist2(p, q) for p, q in combinations(ps.points, 2)}
    top = max(d.values())
    return [k for k, v in d.items() if v == top]


# -- minimum edge rank -----------------------------------------------------------

def rank_bound(n: int) -> Fraction:
    return Fraction(3 * n * n, 8) + Fraction(n, 8)


def min_edge_rank(polygon: Structure, ps: PointSet) -> tuple[int, Fraction]:
    """Rank of the polygon's shortest edge among all pairwise distances.

    Ranks are 1-based in ascending order; equal distances share the smallest
    rank.  Squared distances are exact rationals, so no ties are unresolved.
    """
    if polygon.kind is not Kind.CYCLE:
        raise ValueError("expected a polygon (cycle)")
    n = len(ps)
    if n < 4:
        raise ValueError("need at least 4 points")
    if crossing_pairs(polygon, ps):
        raise ValueError("polygon must be noncrossing")
    shortest = min(dist2(ps[a], ps[b]) for a, b in polygon.edges())
    rank = 1 + sum(1 for p, q in combinations(ps.points, 2) if dist2(p, q) < shortest)
    bound = rank_bound(n)
    if rank > bound:
        raise AssertionError(f"shortest polygon edge has rank {rank} > {bound}")
    return rank, bound


def pair_diagnostic(polygon: Structure, ps: PointSet) -> list[tuple]:
    """Edge pairs at cycle distance >= 2 where no endpoint pair is longer than
    the shorter edge.  Logged, not asserted: near-degenerate pairs can fail."""
    edges = polygon.edges()
    m = len(edges)
    bad = []
    for i, j in combinations(range(m), 2):
        gap = min(j - i, m - (j - i))
        if gap < 2:
            continue
        e, f = edges[i], edges[j]
        short = min(dist2(ps[e[0]], ps[e[1]]), dist2(ps[f[0]], ps[f[1]]))
        if not any(dist2(ps[p], ps[q]) > short for p in e for q in f):
            bad.append((e, f))
    for e, f in bad:
        log.info("pair diagnostic: %s %s has no long connector", e, f)
    return bad


# -- generators --------------------------------------------------------------------

def _angle_cmp(c):
    def half(p):
        dx, dy = p.x - c[0], p.y - c[1]
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        v = cross(c, p.xy, q.xy)
        return -1 if v > 0 else (1 if v < 0 else 0)
    return cmp


def random_simple_polygon(n: int, seed: int, grid: int = 1000) -> tuple[PointSet, Structure]:
    """Star-shaped polygon: random grid points sorted by angle around their centroid.

    Samples with three collinear points, a point at the centroid, or two
    points on one ray from it are redrawn.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = random.Random(seed)
    for _ in range(100):
        coords = set()
        while len(coords) < n:
            coords.add((rng.randrange(grid), rng.randrange(grid)))
        pts = [Point(f"v{i}", x, y) for i, (x, y) in enumerate(sorted(coords))]
        if any(cross(a.xy, b.xy, c.xy) == 0 for a, b, c in combinations(pts, 3)):
            continue
        c = (sum(p.x for p in pts) / n, sum(p.y for p in pts) / n)
        if any(p.xy == c for p in pts):
            continue
        cmp = _angle_cmp(c)
        ordered = sorted(pts, key=functools.cmp_to_key(cmp))
        if any(cmp(p, q) == 0 for p, q in zip(ordered, ordered[1:])):
            continue
        ps = PointSet(tuple(pts), {"generator": "star", "seed": seed})
        poly = Structure.cycle([p.label for p in ordered], canonical=False)
        return ps, poly
    raise RuntimeError("could not draw a non-degenerate sample in 100 tries")


def no_flip_polygons() -> list[tuple[PointSet, Structure]]:
    """Shipped simple polygons with no flippable pair in either direction.

    Found by hill-climbing on vertex positions and re-verified exactly; they
    show that a simple polygon need not admit a lengthening flip.
    """
    text = resources.files("noncross").joinpath("fixtures/no_flip_polygons.json").read_text()
    out = []
    for d in json.loads(text)["polygons"]:
        out.append((PointSet.from_json(d["points"]), Structure.from_json(d["polygon"], canonical=False)))
    return out
