"""Points, point sets, spanning structures and exact planar predicates."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exactnum import (
    Interval,
    floor_sqrt_scaled,
    format_rat,
    parse_rat,
    rat,
)


class Orientation(enum.IntEnum):
    CLOCKWISE = -1
    COLLINEAR = 0
    COUNTERCLOCKWISE = 1


@dataclass(frozen=True)
class Point:
    label: str
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        return self.x, self.y


def dist2(a: Point, b: Point) -> Fraction:
    dx, dy = a.x - b.x, a.y - b.y
    return dx * dx + dy * dy


@dataclass(frozen=True)
class PointSet:
    points: tuple[Point, ...]
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        labels = [p.label for p in pts]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate point labels")
        if len({p.xy for p in pts}) != len(pts):
            raise ValueError("coincident points")
        object.__setattr__(self, "_index", {p.label: i for i, p in enumerate(pts)})

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, label: str) -> Point:
        return self.points[self._index[label]]

    def index(self, label: str) -> int:
        return self._index[label]

    @property
    def labels(self) -> list[str]:
        return [p.label for p in self.points]

    def without(self, label: str) -> "PointSet":
        return PointSet(tuple(p for p in self.points if p.label != label),
                        dict(self.metadata))

    def dist2_matrix(self) -> list[list[Fraction]]:
        pts = self.points
        return [[dist2(a, b) for b in pts] for a in pts]

    def to_json(self) -> dict:
        return {
            "points": [{"label": p.label, "x": format_rat(p.x), "y": format_rat(p.y)}
                       for p in self.points],
            "metadata": self.metadata,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PointSet":
        pts = tuple(Point(d["label"], parse_rat(str(d["x"])), parse_rat(str(d["y"])))
                    for d in data["points"])
        return cls(pts, dict(data.get("metadata") or {}))

    @classmethod
    def from_xy(cls, coords: Iterable, labels: Sequence[str] | None = None,
                **metadata) -> "PointSet":
        coords = list(coords)
        if labels is None:
            labels = [f"q{i}" for i in range(len(coords))]
        return cls(tuple(Point(l, rat(x), rat(y)) for l, (x, y) in zip(labels, coords)),
                   dict(metadata))


class Kind(str, enum.Enum):
    PATH = "path"
    CYCLE = "cycle"
    MATCHING = "matching"


@dataclass(frozen=True)
class Structure:
    """A spanning path, spanning cycle or perfect matching over labels.

    Instances built through :meth:`path`, :meth:`cycle` and :meth:`matching`
    are canonical, so ``==`` compares undirected geometric objects.  A
    directed cycle (for edge flips) is kept by constructing with
    ``canonical=False``.
    """

    kind: Kind
    order: tuple[str, ...] = ()
    pairs: tuple[tuple[str, str], ...] = ()

    @classmethod
    def path(cls, order: Sequence[str], canonical: bool = True) -> "Structure":
        order = tuple(order)
        if len(set(order)) != len(order) or not order:
            raise ValueError("a path visits each label exactly once")
        if canonical and order[-1] < order[0]:
            order = order[::-1]
        return cls(Kind.PATH, order)

    @classmethod
    def cycle(cls, order: Sequence[str], canonical: bool = True) -> "Structure":
        order = tuple(order)
        if len(order) < 3 or len(set(order)) != len(order):
            raise ValueError("a cycle needs at least 3 distinct labels")
        if canonical:
            i = order.index(min(order))
            order = order[i:] + order[:i]
            if order[-1] < order[1]:
                order = (order[0],) + order[1:][::-1]
        return cls(Kind.CYCLE, order)

    @classmethod
    def matching(cls, pairs: Iterable[Sequence[str]]) -> "Structure":
        ps = tuple(sorted(tuple(sorted(p)) for p in pairs))
        flat = [l for p in ps for l in p]
        if any(len(p) != 2 for p in ps) or len(set(flat)) != len(flat):
            raise ValueError("matching pairs must be disjoint label pairs")
        return cls(Kind.MATCHING, (), ps)

    def canonical(self) -> "Structure":
        if self.kind is Kind.PATH:
            return Structure.path(self.order)
        if self.kind is Kind.CYCLE:
            return Structure.cycle(self.order)
        return self

    def reversed(self) -> "Structure":
        if self.kind is Kind.MATCHING:
            return self
        if self.kind is Kind.PATH:
            return Structure(Kind.PATH, self.order[::-1])
        return Structure(Kind.CYCLE, (self.order[0],) + self.order[1:][::-1])

    @property
    def labels(self) -> set[str]:
        if self.kind is Kind.MATCHING:
            return {l for p in self.pairs for l in p}
        return set(self.order)

    def edges(self) -> list[tuple[str, str]]:
        if self.kind is Kind.MATCHING:
            return list(self.pairs)
        e = list(zip(self.order, self.order[1:]))
        if self.kind is Kind.CYCLE:
            e.append((self.order[-1], self.order[0]))
        return e

    def spans(self, ps: PointSet) -> bool:
        want = set(ps.labels)
        if self.kind is Kind.MATCHING:
            return self.labels == want
        return len(self.order) == len(want) and set(self.order) == want

    def to_json(self) -> dict:
        if self.kind is Kind.MATCHING:
            return {"kind": "matching", "pairs": [list(p) for p in self.pairs]}
        return {"kind": self.kind.value, "order": list(self.order)}

    @classmethod
    def from_json(cls, data: dict, canonical: bool = True) -> "Structure":
        kind = Kind(data["kind"])
        if kind is Kind.MATCHING:
            return cls.matching(data["pairs"])
        if kind is Kind.PATH:
            return cls.path(data["order"], canonical)
        return cls.cycle(data["order"], canonical)

    def __str__(self) -> str:
        if self.kind is Kind.MATCHING:
            return "{" + ", ".join(f"{a}{b}" for a, b in self.pairs) + "}"
        return ",".join(self.order)


# -- predicates ---------------------------------------------------------------

def cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(a: Point, b: Point, c: Point) -> Orientation:
    v = cross(a.xy, b.xy, c.xy)
    if v > 0:
        return Orientation.COUNTERCLOCKWISE
    if v < 0:
        return Orientation.CLOCKWISE
    return Orientation.COLLINEAR


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def segments_cross(s1: tuple[Point, Point], s2: tuple[Point, Point]) -> bool:
    """True iff the relative interiors of two closed segments meet.

    A shared endpoint alone is not a crossing, and neither is an endpoint
    resting on the other segment; collinear overlap of interiors is.
    """
    a, b = s1[0].xy, s1[1].xy
    c, d = s2[0].xy, s2[1].xy
    if a == b or c == d:
        raise ValueError("degenerate segment")
    o1, o2 = _sign(cross(a, b, c)), _sign(cross(a, b, d))
    o3, o4 = _sign(cross(c, d, a)), _sign(cross(c, d, b))
    if o1 == o2 == o3 == o4 == 0:
        # collinear: project on the dominant axis and test open-interval overlap
        ax = 0 if a[0] != b[0] else 1
        lo1, hi1 = sorted((a[ax], b[ax]))
        lo2, hi2 = sorted((c[ax], d[ax]))
        return max(lo1, lo2) < min(hi1, hi2)
    return o1 * o2 < 0 and o3 * o4 < 0


def crossing_pairs(s: Structure, ps: PointSet) -> list[tuple[tuple[str, str], tuple[str, str]]]:
    edges = s.edges()
    out = []
    for e, f in combinations(edges, 2):
        if segments_cross((ps[e[0]], ps[e[1]]), (ps[f[0]], ps[f[1]])):
            out.append((e, f))
    return out


def is_noncrossing(s: Structure, ps: PointSet) -> bool:
    return not crossing_pairs(s, ps)


def is_y_monotone(path: Structure, ps: PointSet) -> bool:
    if path.kind is not Kind.PATH:
        raise ValueError("is_y_monotone expects a path")
    ys = [ps[l].y for l in path.order]
    if len(ys) < 2:
        return True
    inc = all(u < v for u, v in zip(ys, ys[1:]))
    dec = all(u > v for u, v in zip(ys, ys[1:]))
    return inc or dec


def structure_length(s: Structure, ps: PointSet, precision_bits: int = 256) -> Interval:
    """Certified enclosure of the total edge length.

    Each edge is evaluated with enough guard bits that the summed width stays
    within ``2**-precision_bits``.
    """
    edges = s.edges()
    guard = max(1, len(edges)).bit_length()
    bits = precision_bits + guard
    lo_sum, slack = 0, 0
    for a, b in edges:
        v, exact = floor_sqrt_scaled(dist2(ps[a], ps[b]), bits)
        lo_sum += v
        slack += 0 if exact else 1
    scale = 1 << bits
    return Interval(Fraction(lo_sum, scale), Fraction(lo_sum + slack, scale), precision_bits)


def length_terms(s: Structure, ps: PointSet) -> list[tuple[Fraction, Fraction]]:
    """The structure's length as radical terms ``(1, |ab|^2)``."""
    return [(Fraction(1), dist2(ps[a], ps[b])) for a, b in s.edges()]


def convex_position_same_orientation(e1: tuple[Point, Point], e2: tuple[Point, Point]) -> bool:
    """Both directed edges are hull edges of a strictly convex quadrilateral and
    run the same way (both clockwise or both counterclockwise) around it."""
    a, b = e1
    c, d = e2
    quad = [a.xy, b.xy, c.xy, d.xy]
    if len(set(quad)) != 4:
        return False
    for i, j, k in combinations(range(4), 3):
        if cross(quad[i], quad[j], quad[k]) == 0:
            return False
    # e1 is a hull edge iff c, d lie strictly on one side of line ab
    s_ab_c, s_ab_d = _sign(cross(a.xy, b.xy, c.xy)), _sign(cross(a.xy, b.xy, d.xy))
    s_cd_a, s_cd_b = _sign(cross(c.xy, d.xy, a.xy)), _sign(cross(c.xy, d.xy, b.xy))
    if s_ab_c != s_ab_d or s_cd_a != s_cd_b:
        return False
    # strict convex position: no point inside the triangle of the other three
    for i in range(4):
        others = [quad[j] for j in range(4) if j != i]
        signs = {_sign(cross(others[0], others[1], quad[i])),
                 _sign(cross(others[1], others[2], quad[i])),
                 _sign(cross(others[2], others[0], quad[i]))}
        if len(signs) == 1:
            return False
    return s_ab_c == s_cd_a


def ray_hits_segment(origin: Point, through: Point, seg: tuple[Point, Point]) -> bool:
    """Does the ray from ``origin`` through ``through`` (beyond it) meet ``seg``?"""
    o, t = origin.xy, through.xy
    p, q = seg[0].xy, seg[1].xy
    dx, dy = t[0] - o[0], t[1] - o[1]
    ex, ey = q[0] - p[0], q[1] - p[1]
    den = dx * ey - dy * ex
    if den == 0:
        return False
    # o + s*(d) = p + u*(e); solve with Cramer's rule
    wx, wy = p[0] - o[0], p[1] - o[1]
    s = (wx * ey - wy * ex) / den
    u = (wx * dy - wy * dx) / den
    return s >= 1 and 0 <= u <= 1


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
