"""Pure-Python reference kernels.

All kernels take a symmetric matrix ``W`` of non-negative integer edge weights
(fixed-point lengths) and work on vertex indices.  Every canonical structure
is visited exactly once:

* path: directed orders with ``order[0] < order[-1]``
* cycle: ``order[0] == 0`` and ``order[1] < order[-1]``
* matching: lowest unmatched vertex paired first

Structures are returned as index tuples (paths, cycles) or as flat tuples
``(a0, b0, a1, b1, ...)`` of pairs (matchings).
"""

from __future__ import annotations

from itertools import permutations


def _paths(n):
    if n == 1:
        yield (0,)
        return
    for s in range(n):
        for t in range(s + 1, n):
            rest = [v for v in range(n) if v != s and v != t]
            for mid in permutations(rest):
                yield (s,) + mid + (t,)


def _cycles(n):
    rest = list(range(1, n))
    for a in rest:
        for b in rest:
            if b <= a:
                continue
            mid_pool = [v for v in rest if v != a and v != b]
            for mid in permutations(mid_pool):
                yield (0, a) + mid + (b,)


def _matchings(n):
    def rec(free):
        if not free:
            yield ()
            return
        i = free[0]
        for k in range(1, len(free)):
            j = free[k]
            rem = free[1:k] + free[k + 1:]
            for tail in rec(rem):
                yield (i, j) + tail
    yield from rec(tuple(range(n)))


def _weight(W, kind, s):
    if kind == "matching":
        return sum(W[s[i]][s[i + 1]] for i in range(0, len(s), 2))
    total = 0
    for i in range(len(s) - 1):
        total += W[s[i]][s[i + 1]]
    if kind == "cycle":
        total += W[s[-1]][s[0]]
    return total


def enumerate_structures(n, kind):
    if kind == "path":
        return _paths(n)
    if kind == "cycle":
        return _cycles(n)
    if kind == "matching":
        return _matchings(n)
    raise ValueError(kind)


def brute_max(W, n, kind):
    """Largest weight over all canonical structures, and how many were seen."""
    best = -1
    count = 0
    for s in enumerate_structures(n, kind):
        w = _weight(W, kind, s)
        count += 1
        if w > best:
            best = w
    return best, count


def brute_window(W, n, kind, thresh):
    """Structures with weight >= thresh, plus the largest weight below it (-1 if none)."""
    window = []
    below = -1
    for s in enumerate_structures(n, kind):
        w = _weight(W, kind, s)
        if w >= thresh:
            window.append((w, s))
        elif w > below:
            below = w
    return window, below


def _insert(lst, K, val, ref):
    # lst is sorted by value, descending
    i = len(lst)
    while i > 0 and lst[i - 1][0] < val:
        i -= 1
    if i >= K:
        return
    lst.insert(i, (val, ref))
    if len(lst) > K:
        lst.pop()


def dp_topk(W, n, kind, K):
    """K heaviest directed paths / rooted cycles / canonical matchings by subset DP.

    Returns ``(entries, stats)`` with entries ``[(weight, structure), ...]``
    sorted by decreasing weight.
    """
    if kind == "matching":
        return _dp_matching(W, n, K)
    cyc = kind == "cycle"
    full = (1 << n) - 1
    table: dict = {}
    if cyc:
        table[(1, 0)] = [(0, None)]
    else:
        for v in range(n):
            table[(1 << v, v)] = [(0, None)]
    transitions = 0
    for mask in range(1, full + 1):
        if cyc and not mask & 1:
            continue
        for v in range(n):
            lst = table.get((mask, v))
            if not lst:
                continue
            for u in range(n):
                if mask >> u & 1:
                    continue
                w = W[v][u]
                key = (mask | 1 << u, u)
                dst = table.setdefault(key, [])
                for r, (val, _) in enumerate(lst):
                    transitions += 1
                    _insert(dst, K, val + w, (v, r))
    finals = []
    for v in range(n):
        for r, (val, _) in enumerate(table.get((full, v), [])):
            total = val + (W[v][0] if cyc else 0)
            finals.append((total, v, r))
    finals.sort(key=lambda t: -t[0])
    out = []
    for total, v, r in finals[:K]:
        order = []
        mask, cur, rank = full, v, r
        while True:
            order.append(cur)
            ref = table[(mask, cur)][rank][1]
            if ref is None:
                break
            mask ^= 1 << cur
            cur, rank = ref
        out.append((total, tuple(reversed(order))))
    stats = {"transitions": transitions, "table_entries": sum(len(x) for x in table.values())}
    return out, stats


def _dp_matching(W, n, K):
    full = (1 << n) - 1
    table = {0: [(0, None)]}
    transitions = 0
    for mask in range(full + 1):
        lst = table.get(mask)
        if not lst:
            continue
        if mask == full:
            continue
        i = 0
        while mask >> i & 1:
            i += 1
        for j in range(i + 1, n):
            if mask >> j & 1:
                continue
            nm = mask | 1 << i | 1 << j
            dst = table.setdefault(nm, [])
            for r, (val, _) in enumerate(lst):
                transitions += 1
                _insert(dst, K, val + W[i][j], (i, j, r))
    out = []
    for val, ref in table.get(full, [])[:K]:
        pairs = []
        mask, r = full, None
        cur_ref = ref
        while cur_ref is not None:
            i, j, r = cur_ref
            pairs.append((i, j))
            mask ^= 1 << i | 1 << j
            cur_ref = table[mask][r][1]
        flat = tuple(x for p in sorted(pairs) for x in p)
        out.append((val, flat))
    stats = {"transitions": transitions, "table_entries": sum(len(x) for x in table.values())}
    return out, stats
