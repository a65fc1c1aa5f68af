"""Points on a line: medians, optimal-path/cycle characterizations, closed forms.

All lengths here are exact rationals (distances between reals on a line), so
brute force can be compared to the closed forms with plain equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import format_rat, parse_rat, rat
from .geometry import Kind, PointSet, Structure
from .kernels import enumerate_structures


class UnsupportedError(ValueError):
    pass


@dataclass(frozen=True)
class LineSet:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(sorted(rat(v) for v in self.values))
        if any(a == b for a, b in zip(vals, vals[1:])):
            raise ValueError("LineSet values must be distinct")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def median(self) -> Fraction:
        return median(self)

    def to_json(self) -> dict:
        return {"values": [format_rat(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "LineSet":
        return cls(tuple(parse_rat(str(v)) for v in data["values"]))

    def to_pointset(self) -> PointSet:
        """Collinear points on the x-axis labelled by their value."""
        return PointSet.from_xy([(v, 0) for v in self.values], labels=self.labels())

    def labels(self) -> list[str]:
        return [str(v) for v in self.values]

    def value_of(self, label: str) -> Fraction:
        return parse_rat(label)


def median(ls: LineSet) -> Fraction:
    v = ls.values
    if not v:
        raise ValueError("median of an empty set")
    n = len(v)
    if n % 2:
        return v[n // 2]
    return (v[n // 2 - 1] + v[n // 2]) / 2


def _vals(s: Structure, ls: LineSet, coords=None):
    if coords is None:
        return [parse_rat(l) for l in s.order]
    return [coords[l] for l in s.order]


def _edge_vals(s: Structure, coords=None):
    get = (lambda l: parse_rat(l)) if coords is None else (lambda l: coords[l])
    return [(get(a), get(b)) for a, b in s.edges()]


def _contains(a, b, x) -> bool:
    lo, hi = (a, b) if a <= b else (b, a)
    return lo <= x <= hi


def is_longest_path_1d(path: Structure, ls: LineSet, coords: dict | None = None) -> bool:
    """Every edge meets the median and the endpoints are the two points nearest it.

    ``coords`` maps labels to x-values; by default labels are the values.
    """
    n = len(ls)
    if n % 2:
        raise UnsupportedError("this characterization is for an even number of points")
    if path.kind is not Kind.PATH:
        raise ValueError("expected a path")
    med = median(ls)
    if not all(_contains(a, b, med) for a, b in _edge_vals(path, coords)):
        return False
    xs = _vals(path, ls, coords)
    inner = {ls.values[n // 2 - 1], ls.values[n // 2]}
    return {xs[0], xs[-1]} == inner


def is_longest_path_1d_odd(path: Structure, ls: LineSet, coords: dict | None = None) -> bool:
    """Odd count: every edge meets the median, one endpoint is the median and
    the other is a point at minimum distance from it."""
    n = len(ls)
    if n % 2 == 0:
        raise UnsupportedError("this characterization is for an odd number of points")
    med = median(ls)
    if not all(_contains(a, b, med) for a, b in _edge_vals(path, coords)):
        return False
    xs = _vals(path, ls, coords)
    ends = [xs[0], xs[-1]]
    if med not in ends:
        return False
    other = ends[1] if ends[0] == med else ends[0]
    if n == 1:
        return True
    nearest = min(abs(v - med) for v in ls.values if v != med)
    return abs(other - med) == nearest


def is_longest_cycle_1d(cycle: Structure, ls: LineSet, coords: dict | None = None) -> bool:
    n = len(ls)
    if n < 3:
        raise ValueError("a cycle needs at least 3 points")
    med = median(ls)
    ev = _edge_vals(cycle, coords)
    if not all(_contains(a, b, med) for a, b in ev):
        return False
    if n % 2:
        # the two edges at the median point must leave on opposite sides
        sides = [b - a if a == med else a - b for a, b in ev if med in (a, b)]
        if len(sides) != 2 or (sides[0] > 0) == (sides[1] > 0):
            return False
    return True


def _gaps(ls: LineSet) -> list[Fraction]:
    v = ls.values
    return [b - a for a, b in zip(v, v[1:])]


def longest_path_length_1d(ls: LineSet) -> Fraction:
    """(n-1) * central gap + 2(m-j) * (j-th gap out from the centre, each side)."""
    n = len(ls)
    if n % 2:
        raise UnsupportedError("closed form is for an even number of points")
    m = n // 2
    g = _gaps(ls)
    total = (n - 1) * g[m - 1]
    for j in range(1, m):
        total += 2 * (m - j) * (g[m - 1 + j] + g[m - 1 - j])
    return total


def longest_cycle_length_1d(ls: LineSet) -> Fraction:
    """Optimal cycle length by gap multiplicities.

    Even n = 2m: the central gap is crossed n times, gap j out from it
    2(m-j) times.  Odd n = 2k+1: each gap next to the median is crossed 2k
    times and gap j further out 2(k-j) times.
    """
    n = len(ls)
    if n < 3:
        raise ValueError("a cycle needs at least 3 points")
    g = _gaps(ls)
    if n % 2 == 0:
        m = n // 2
        total = n * g[m - 1]
        for j in range(1, m):
            total += 2 * (m - j) * (g[m - 1 + j] + g[m - 1 - j])
        return total
    k = n // 2
    # gaps k-1 (left of median) and k (right of median)
    total = 2 * k * (g[k - 1] + g[k])
    for j in range(1, k):
        total += 2 * (k - j) * (g[k - 1 - j] + g[k + j])
    return total


def structure_length_1d(s: Structure, coords: dict | None = None) -> Fraction:
    return sum((abs(a - b) for a, b in _edge_vals(s, coords)), Fraction(0))


def cycle_deficit_lemma_check(ls: LineSet, cycle: Structure, coords: dict | None = None) -> Fraction:
    """Certified lower bound on (optimum - |cycle|) for odd counts.

    With I the gap between the k+1 leftmost and k rightmost points and h its
    length: fewer than 2k edges covering I means a deficit of at least 2h.
    """
    n = len(ls)
    if n % 2 == 0 or n < 3:
        raise UnsupportedError("deficit check needs an odd count >= 3")
    k = n // 2
    lo, hi = ls.values[k], ls.values[k + 1]
    h = hi - lo
    through = sum(1 for a, b in _edge_vals(cycle, coords) if min(a, b) <= lo and max(a, b) >= hi)
    return 2 * h if through < 2 * k else Fraction(0)


# -- brute force -----------------------------------------------------------------

def all_structures(ls: LineSet, kind: str) -> list[tuple[Fraction, Structure]]:
    """Every canonical structure with its exact length."""
    labels = ls.labels()
    vals = ls.values
    n = len(vals)
    out = []
    for s in enumerate_structures(n, kind):
        if kind == "matching":
            pairs = [(s[i], s[i + 1]) for i in range(0, n, 2)]
            length = sum((abs(vals[a] - vals[b]) for a, b in pairs), Fraction(0))
            st = Structure.matching([(labels[a], labels[b]) for a, b in pairs])
        else:
            edges = list(zip(s, s[1:]))
            if kind == "cycle":
                edges.append((s[-1], s[0]))
            length = sum((abs(vals[a] - vals[b]) for a, b in edges), Fraction(0))
            order = [labels[i] for i in s]
            st = Structure.path(order) if kind == "path" else Structure.cycle(order)
        out.append((length, st))
    return out


def brute_optima(ls: LineSet, kind: str) -> tuple[Fraction, list[Structure]]:
    allx = all_structures(ls, kind)
    best = max(l for l, _ in allx)
    return best, sorted((s for l, s in allx if l == best), key=str)


def endpoint_sides_ok(path: Structure, ls: LineSet, coords: dict | None = None) -> bool:
    """Endpoints lie on different sides of the median."""
    med = median(ls)
    xs = _vals(path, ls, coords)
    return (xs[0] - med) * (xs[-1] - med) < 0


def line_from_values(values: Iterable) -> LineSet:
    return LineSet(tuple(rat(v) for v in values))
