"""Exact maximum spanning path / cycle / perfect matching with uniqueness proofs.

Edge lengths are turned into fixed-point integers ``floor(|pq| * 2**P)``.  A
structure with ``m`` edges and scaled sum ``S`` has true length in
``[S, S + m) / 2**P``, so a best sum that beats the runner-up by more than
``m`` certifies a strict winner.  When that fails the working precision
doubles; at the cap, surviving candidates are grouped by canonical radical
form and the verdict becomes Refuted (all provably equal) or Unresolved.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .exactnum import (
    Cmp,
    Interval,
    canonical_form,
    compare_radical_sums,
    floor_sqrt_scaled,
    format_rat,
    precision_cap,
    sci,
)
from .geometry import Kind, PointSet, Structure, length_terms, structure_length

log = logging.getLogger(__name__)

# refine windows this small in Python; larger ones rerun the kernel
_PY_REFINE_LIMIT = 256


class CapacityError(ValueError):
    """Input is larger than the selected solver may handle."""


class UnresolvedError(RuntimeError):
    """A comparison could not be decided at the precision cap."""


class Uniqueness(str, enum.Enum):
    PROVEN = "proven"
    REFUTED = "refuted"
    UNRESOLVED = "unresolved"


class Method(str, enum.Enum):
    BRUTE = "brute"
    DP = "dp"


@dataclass
class SolveOptions:
    method: str = "auto"            # brute | dp | auto
    precision_bits: int = 256       # initial working precision
    cap: int | None = None          # escalation cap, default from the environment
    brute_cap: int = 10
    brute_cap_matching: int = 12
    dp_cap: int = 20
    dp_cap_matching: int = 22
    backend: str | None = None      # None (best available) | "compiled" | "python"


@dataclass
class SolveResult:
    kind: Kind
    best: Structure
    best_length: Interval
    second_best_length: Interval | None
    unique: Uniqueness
    co_optimal: list[Structure]
    method: Method
    stats: dict = field(default_factory=dict)

    @property
    def proven(self) -> bool:
        return self.unique is Uniqueness.PROVEN

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "best": self.best.to_json(),
            "best_length": self.best_length.to_json(),
            "second_best_length": (self.second_best_length.to_json()
                                   if self.second_best_length else None),
            "unique": self.unique.value,
            "co_optimal": [s.to_json() for s in self.co_optimal],
            "method": self.method.value,
            "stats": self.stats,
        }


# -- weights -----------------------------------------------------------------

def _weights(d2, bits):
    """Fixed-point floors of edge lengths plus per-edge exactness flags."""
    n = len(d2)
    W = [[0] * n for _ in range(n)]
    E = [[True] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v, exact = floor_sqrt_scaled(d2[i][j], bits)
            W[i][j] = W[j][i] = v
            E[i][j] = E[j][i] = exact
    return W, E


def _edges(kind, s):
    if kind == "matching":
        return [(s[i], s[i + 1]) for i in range(0, len(s), 2)]
    e = list(zip(s, s[1:]))
    if kind == "cycle":
        e.append((s[-1], s[0]))
    return e


def _bounds(W, E, kind, s):
    lo, slack = 0, 0
    for a, b in _edges(kind, s):
        lo += W[a][b]
        slack += 0 if E[a][b] else 1
    return lo, lo + slack


def _edge_count(kind, n):
    return {"path": n - 1, "cycle": n, "matching": n // 2}[kind]


def _canon_key(kind, s):
    if kind == "path":
        return s if s[0] < s[-1] else s[::-1]
    if kind == "cycle":
        i = s.index(0)
        r = s[i:] + s[:i]
        return r if r[1] < r[-1] else (r[0],) + r[1:][::-1]
    pairs = sorted(tuple(sorted(p)) for p in _edges(kind, s))
    return tuple(x for p in pairs for x in p)


def _to_structure(kind, s, labels):
    if kind == "path":
        return Structure.path([labels[i] for i in s])
    if kind == "cycle":
        return Structure.cycle([labels[i] for i in s])
    return Structure.matching([(labels[a], labels[b]) for a, b in _edges(kind, s)])


def _terms(kind, s, d2):
    return [(Fraction(1), d2[a][b]) for a, b in _edges(kind, s)]


# -- candidate refinement ------------------------------------------------------

def _all_equal(kind, cands, d2):
    forms = [canonical_form(_terms(kind, s, d2)) for s in cands]
    return all(f == forms[0] for f in forms[1:])


def _refine(kind, cands, d2, bits, cap, outside=None):
    """Separate the top candidate(s) by escalating precision.

    ``outside`` is ``(hi, at_bits)``: a scaled upper bound on every structure
    not in ``cands``; a lone survivor must also beat it.  Returns
    ``(winners, verdict, bits, bounds)`` where ``bounds`` maps each candidate
    to its scaled ``(lo, hi)`` at ``bits``.
    """
    while True:
        W, E = _weights(d2, bits)
        bd = {s: _bounds(W, E, kind, s) for s in cands}
        top_lo = max(lo for lo, _ in bd.values())
        alive = [s for s in cands if bd[s][1] >= top_lo]
        beats_outside = outside is None or top_lo > outside[0] << (bits - outside[1])
        if len(alive) == 1 and beats_outside:
            return alive, Uniqueness.PROVEN, bits, bd
        if all(bd[s][0] == bd[s][1] for s in alive) and len({bd[s][0] for s in alive}) == 1:
            # every survivor has the same exactly-known length
            return alive, Uniqueness.REFUTED, bits, bd
        if bits >= 1024 or bits >= cap:
            if _all_equal(kind, alive, d2):
                return alive, Uniqueness.REFUTED, bits, bd
        if bits >= cap:
            return alive, Uniqueness.UNRESOLVED, bits, bd
        bits = min(cap, bits * 2)


# -- brute force ---------------------------------------------------------------

def _solve_brute(kind, d2, bits, cap, backend, stats):
    n = len(d2)
    m = _edge_count(kind, n)
    prev = None
    while True:
        W, E = _weights(d2, bits)
        smax, count = kernels.brute_max(W, kind, backend)
        # anything below this is strictly shorter than the optimum
        thresh = smax - m
        window, below = kernels.brute_window(W, kind, thresh, backend)
        stats["structures_examined"] = count
        stats["window"] = len(window)
        # stop rerunning once more precision no longer shrinks the window
        if len(window) <= _PY_REFINE_LIMIT or bits >= cap or (prev is not None and len(window) >= prev):
            break
        prev = len(window)
        bits = min(cap, bits * 2)
    cands = [s for _, s in window]
    outside = (below + m, bits) if below >= 0 else None
    winners, verdict, rbits, bd = _refine(kind, cands, d2, bits, cap, outside)
    # runner-up: best of the non-winning window members and everything below
    shift = rbits - bits
    lo2 = below << shift if below >= 0 else None
    hi2 = (below + m) << shift if below >= 0 else None
    win = set(winners)
    for s in cands:
        if s in win:
            continue
        lo, hi = bd[s]
        lo2 = lo if lo2 is None else max(lo2, lo)
        hi2 = hi if hi2 is None else max(hi2, hi)
    second = None
    if lo2 is not None:
        second = (lo2, hi2, rbits)
    return winners, verdict, rbits, second


# -- subset DP -------------------------------------------------------------------

def _dp_k(kind):
    return 2 if kind == "matching" else 3


def _solve_dp(kind, d2, bits, cap, backend, stats):
    n = len(d2)
    m = _edge_count(kind, n)
    K = _dp_k(kind)
    while True:
        W, E = _weights(d2, bits)
        entries, st = kernels.dp_topk(W, kind, K, backend)
        stats["transitions"] = stats.get("transitions", 0) + st["transitions"]
        stats["peak_table_entries"] = max(stats.get("peak_table_entries", 0), st["table_entries"])
        best_s = entries[0][1]
        key = _canon_key(kind, best_s)
        others = [(w, s) for w, s in entries if _canon_key(kind, s) != key]
        if not others:
            # only one canonical structure exists
            return [key], Uniqueness.PROVEN, bits, None
        s1, s2 = entries[0][0], others[0][0]
        if s1 > s2 + m:
            return [key], Uniqueness.PROVEN, bits, (s2, s2 + m, bits)
        # ties that are exact or provably equal do not go away with precision
        close = [key] + [_canon_key(kind, s) for w, s in others if w + m > s1]
        close = list(dict.fromkeys(close))
        lo_hi = [_bounds(W, E, kind, s) for s in close]
        exact_tie = all(lo == hi for lo, hi in lo_hi) and len({lo for lo, _ in lo_hi}) == 1
        if exact_tie or bits >= cap or bits >= 1024:
            if exact_tie or _all_equal(kind, close, d2):
                stats["co_optimal_complete"] = False
                return close, Uniqueness.REFUTED, bits, (s1, s1 + m, bits)
        if bits >= cap:
            return close, Uniqueness.UNRESOLVED, bits, (s2, s2 + m, bits)
        bits = min(cap, bits * 2)


# -- front end -------------------------------------------------------------------

def _pick_method(kind, n, opts):
    bcap = opts.brute_cap_matching if kind == "matching" else opts.brute_cap
    dcap = opts.dp_cap_matching if kind == "matching" else opts.dp_cap
    method = opts.method
    if method == "auto":
        method = "brute" if n <= bcap else "dp"
    if method == "brute":
        if n > bcap:
            raise CapacityError(f"{n} points exceeds the brute-force cap of {bcap}")
        return Method.BRUTE
    if method == "dp":
        if n > dcap:
            raise CapacityError(f"{n} points exceeds the subset-DP cap of {dcap}")
        return Method.DP
    raise ValueError(f"unknown method {method!r}")


def _trivial(kind, ps, opts):
    labels = ps.labels
    if kind == "path":
        s = Structure.path(labels)
    elif kind == "cycle":
        s = Structure.cycle(labels)
    else:
        s = Structure.matching([labels])
    length = structure_length(s, ps, opts.precision_bits)
    return SolveResult(Kind(kind), s, length, None, Uniqueness.PROVEN, [s], Method.BRUTE,
                       {"structures_examined": 1})


def solve(ps: PointSet, kind: str, opts: SolveOptions | None = None) -> SolveResult:
    opts = opts or SolveOptions()
    kind = Kind(kind).value
    n = len(ps)
    if kind == "path" and n < 2:
        raise ValueError("a spanning path needs at least 2 points")
    if kind == "cycle" and n < 3:
        raise ValueError("a spanning cycle needs at least 3 points")
    if kind == "matching" and (n % 2 or n < 2):
        raise ValueError("a perfect matching needs an even, positive number of points")
    cap = precision_cap() if opts.cap is None else opts.cap
    bits = min(opts.precision_bits, cap)
    method = _pick_method(kind, n, opts)
    if (kind == "path" and n == 2) or (kind == "cycle" and n == 3) or (kind == "matching" and n == 2):
        return _trivial(kind, ps, opts)
    d2 = ps.dist2_matrix()
    stats: dict = {"backend": kernels.BACKEND if opts.backend != "python" else "python"}
    t0 = time.perf_counter()
    if method is Method.BRUTE:
        winners, verdict, rbits, second = _solve_brute(kind, d2, bits, cap, opts.backend, stats)
    else:
        winners, verdict, rbits, second = _solve_dp(kind, d2, bits, cap, opts.backend, stats)
    stats["wall_time_s"] = round(time.perf_counter() - t0, 6)
    stats["working_precision_bits"] = rbits
    labels = ps.labels
    structs = sorted((_to_structure(kind, s, labels) for s in winners), key=str)
    # among tied or unresolved leaders the pick is deterministic
    best = structs[0]
    best_len = structure_length(best, ps, rbits)
    second_iv = None
    if second is not None:
        lo, hi, b = second
        scale = 1 << b
        second_iv = Interval(Fraction(lo, scale), Fraction(hi, scale), b)
    if verdict is Uniqueness.REFUTED:
        second_iv = structure_length(structs[1], ps, rbits)
    if verdict is Uniqueness.PROVEN and second_iv is not None:
        assert best_len.lo > second_iv.hi, "uniqueness certificate is inconsistent"
    return SolveResult(Kind(kind), best, best_len, second_iv, verdict, structs, method, stats)


def max_path(ps: PointSet, opts: SolveOptions | None = None) -> SolveResult:
    return solve(ps, "path", opts)


def max_cycle(ps: PointSet, opts: SolveOptions | None = None) -> SolveResult:
    return solve(ps, "cycle", opts)


def max_matching(ps: PointSet, opts: SolveOptions | None = None) -> SolveResult:
    return solve(ps, "matching", opts)


def enumerate_optima(ps: PointSet, kind: str, slack=0, opts: SolveOptions | None = None,
                     strict: bool = True) -> list[Structure]:
    """All canonical structures within ``slack`` of the optimum, by exact comparison.

    Raises :class:`UnresolvedError` if some candidate cannot be decided and
    ``strict`` is set; otherwise undecided candidates are included.
    """
    opts = opts or SolveOptions(method="brute")
    kind = Kind(kind).value
    slack = Fraction(slack)
    if slack < 0:
        raise ValueError("slack must be non-negative")
    res = solve(ps, kind, SolveOptions(**{**opts.__dict__, "method": "brute"}))
    n = len(ps)
    if (kind == "path" and n == 2) or (kind == "cycle" and n == 3) or (kind == "matching" and n == 2):
        return [res.best]
    d2 = ps.dist2_matrix()
    labels = ps.labels
    cap = precision_cap() if opts.cap is None else opts.cap
    bits = min(opts.precision_bits, cap)
    m = _edge_count(kind, n)
    W, _ = _weights(d2, bits)
    smax, _ = kernels.brute_max(W, kind, opts.backend)
    # true length >= opt - slack needs S + m > smax - slack * 2**bits
    margin = -((-slack.numerator << bits) // slack.denominator)
    window, _ = kernels.brute_window(W, kind, smax - margin - m + 1, opts.backend)
    best_terms = length_terms(res.best, ps)
    out, unresolved = [], []
    for _, s in window:
        terms = _terms(kind, s, d2)
        if slack:
            terms = terms + [(slack, Fraction(1))]
        c = compare_radical_sums(terms, best_terms, cap=cap)
        if c in (Cmp.GREATER, Cmp.EQUAL):
            out.append(_to_structure(kind, s, labels))
        elif c is Cmp.UNRESOLVED:
            unresolved.append(_to_structure(kind, s, labels))
    if unresolved and strict:
        raise UnresolvedError(f"{len(unresolved)} structures undecided at {cap} bits")
    return sorted(out + unresolved, key=str)


def report(res: SolveResult, ps: PointSet, noncrossing: bool | None = None) -> dict:
    """JSON-ready summary with decimal approximations and certified error bounds."""
    d = res.to_json()
    d["n"] = len(ps)
    if noncrossing is not None:
        d["noncrossing"] = noncrossing
    gap = None
    if res.second_best_length is not None:
        gap = res.best_length.lo - res.second_best_length.hi
    d["certified_gap_lower_bound"] = sci(gap, 6) if gap is not None and gap > 0 else None
    return d
