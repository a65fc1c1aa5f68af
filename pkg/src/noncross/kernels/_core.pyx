# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled enumeration and subset-DP kernels over multi-limb fixed point.

Weights arrive as a C-contiguous uint64 array of shape (n, n, L): the
little-endian 64-bit limbs of each non-negative integer edge weight.  All
sums are exact; there is no rounding inside the kernels.  Same contract as
``_pure``.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t, uint8_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy, memset

cnp.import_array()


cdef inline void ladd(uint64_t* dst, const uint64_t* a, const uint64_t* b, int L) noexcept nogil:
    cdef uint64_t carry = 0, s, t
    cdef int i
    for i in range(L):
        s = a[i] + b[i]
        t = s + carry
        carry = (s < a[i]) | (t < s)
        dst[i] = t


cdef inline int lcmp(const uint64_t* a, const uint64_t* b, int L) noexcept nogil:
    cdef int i = L - 1
    while i >= 0:
        if a[i] != b[i]:
            return 1 if a[i] > b[i] else -1
        i -= 1
    return 0


cdef object limbs_to_int(const uint64_t* a, int L):
    cdef int i
    v = 0
    for i in range(L - 1, -1, -1):
        v = (v << 64) | <object>a[i]
    return v


cdef void int_to_limbs(object v, uint64_t* out, int L):
    cdef int i
    mask = (1 << 64) - 1
    for i in range(L):
        out[i] = <uint64_t>(v & mask)
        v >>= 64


# -- brute-force enumeration ---------------------------------------------------

cdef struct Ctx:
    int n
    int L
    int kind          # 0 path, 1 cycle, 2 matching
    int mode          # 0 max, 1 window
    const uint64_t* W
    uint64_t* acc     # (n + 1) * L prefix sums
    uint64_t* tmp
    int* order
    uint64_t used
    uint64_t* best
    int have_best
    uint64_t* thresh
    uint64_t* below
    int have_below
    long long count
    # window storage
    uint64_t* win_vals
    int* win_orders
    long long win_len
    long long win_cap


cdef int win_push(Ctx* c, const uint64_t* val) noexcept nogil:
    cdef long long newcap
    cdef void* p
    if c.win_len == c.win_cap:
        newcap = c.win_cap * 2 if c.win_cap else 256
        p = realloc(c.win_vals, newcap * c.L * sizeof(uint64_t))
        if p == NULL:
            return -1
        c.win_vals = <uint64_t*>p
        p = realloc(c.win_orders, newcap * c.n * sizeof(int))
        if p == NULL:
            return -1
        c.win_orders = <int*>p
        c.win_cap = newcap
    memcpy(c.win_vals + c.win_len * c.L, val, c.L * sizeof(uint64_t))
    memcpy(c.win_orders + c.win_len * c.n, c.order, c.n * sizeof(int))
    c.win_len += 1
    return 0


cdef int leaf(Ctx* c, const uint64_t* val) noexcept nogil:
    c.count += 1
    if c.mode == 0:
        if not c.have_best or lcmp(val, c.best, c.L) > 0:
            memcpy(c.best, val, c.L * sizeof(uint64_t))
            c.have_best = 1
        return 0
    if lcmp(val, c.thresh, c.L) >= 0:
        return win_push(c, val)
    if not c.have_below or lcmp(val, c.below, c.L) > 0:
        memcpy(c.below, val, c.L * sizeof(uint64_t))
        c.have_below = 1
    return 0


cdef int dfs_path(Ctx* c, int depth) noexcept nogil:
    # order[0..depth-1] fixed, acc[depth-1] holds their weight
    cdef int n = c.n, L = c.L, v, last, rc
    cdef uint64_t* cur = c.acc + (depth - 1) * L
    if depth == n:
        if c.kind == 0:
            if c.order[0] < c.order[n - 1]:
                return leaf(c, cur)
            return 0
        # cycle: close the tour
        if c.order[1] < c.order[n - 1]:
            ladd(c.tmp, cur, c.W + (c.order[n - 1] * n + c.order[0]) * L, L)
            return leaf(c, c.tmp)
        return 0
    last = c.order[depth - 1]
    for v in range(n):
        if (c.used >> v) & 1:
            continue
        c.order[depth] = v
        c.used |= (<uint64_t>1) << v
        ladd(c.acc + depth * L, cur, c.W + (last * n + v) * L, L)
        rc = dfs_path(c, depth + 1)
        c.used &= ~((<uint64_t>1) << v)
        if rc:
            return rc
    return 0


cdef int dfs_match(Ctx* c, int depth) noexcept nogil:
    # depth counts placed pairs; order holds the flat pair list
    cdef int n = c.n, L = c.L, i, j, rc
    cdef uint64_t* cur = c.acc + depth * L
    if 2 * depth == n:
        return leaf(c, cur)
    i = 0
    while (c.used >> i) & 1:
        i += 1
    c.used |= (<uint64_t>1) << i
    for j in range(i + 1, n):
        if (c.used >> j) & 1:
            continue
        c.used |= (<uint64_t>1) << j
        c.order[2 * depth] = i
        c.order[2 * depth + 1] = j
        ladd(c.acc + (depth + 1) * L, cur, c.W + (i * n + j) * L, L)
        rc = dfs_match(c, depth + 1)
        c.used &= ~((<uint64_t>1) << j)
        if rc:
            c.used &= ~((<uint64_t>1) << i)
            return rc
    c.used &= ~((<uint64_t>1) << i)
    return 0


cdef int run(Ctx* c) noexcept nogil:
    cdef int s, rc
    memset(c.acc, 0, (c.n + 1) * c.L * sizeof(uint64_t))
    if c.kind == 2:
        return dfs_match(c, 0)
    if c.kind == 1:
        c.order[0] = 0
        c.used = 1
        return dfs_path(c, 1)
    for s in range(c.n):
        c.order[0] = s
        c.used = (<uint64_t>1) << s
        rc = dfs_path(c, 1)
        if rc:
            return rc
    return 0


cdef int kind_code(str kind) except -1:
    if kind == "path":
        return 0
    if kind == "cycle":
        return 1
    if kind == "matching":
        return 2
    raise ValueError(kind)


def _scan(cnp.ndarray[cnp.uint64_t, ndim=3, mode="c"] W, str kind, int mode, thresh):
    cdef Ctx c
    cdef int n = W.shape[0], L = W.shape[2]
    cdef int rc, k
    cdef long long i
    if n > 62:
        raise ValueError("too many points")
    memset(&c, 0, sizeof(Ctx))
    c.n = n
    c.L = L
    c.kind = kind_code(kind)
    c.mode = mode
    c.W = <const uint64_t*>W.data
    c.acc = <uint64_t*>malloc((n + 2) * L * sizeof(uint64_t))
    c.tmp = <uint64_t*>malloc(L * sizeof(uint64_t))
    c.order = <int*>malloc((n + 1) * sizeof(int))
    c.best = <uint64_t*>malloc(L * sizeof(uint64_t))
    c.thresh = <uint64_t*>malloc(L * sizeof(uint64_t))
    c.below = <uint64_t*>malloc(L * sizeof(uint64_t))
    try:
        if mode == 1:
            int_to_limbs(thresh, c.thresh, L)
        with nogil:
            rc = run(&c)
        if rc:
            raise MemoryError("window buffer")
        if mode == 0:
            return limbs_to_int(c.best, L), c.count
        window = []
        width = n
        for i in range(c.win_len):
            val = limbs_to_int(c.win_vals + i * L, L)
            s = tuple(c.win_orders[i * width + k] for k in range(width))
            window.append((val, s))
        below = limbs_to_int(c.below, L) if c.have_below else -1
        return window, below
    finally:
        free(c.acc); free(c.tmp); free(c.order); free(c.best)
        free(c.thresh); free(c.below); free(c.win_vals); free(c.win_orders)


def brute_max(W, str kind):
    return _scan(W, kind, 0, None)


def brute_window(W, str kind, thresh):
    return _scan(W, kind, 1, thresh)


# -- subset DP with per-state top-K lists ---------------------------------------

cdef inline void topk_insert(uint64_t* vals, int32_t* refs, uint8_t* cnt, int K, int L,
                             const uint64_t* val, int32_t ref) noexcept nogil:
    cdef int m = cnt[0], i
    i = m
    while i > 0 and lcmp(vals + (i - 1) * L, val, L) < 0:
        i -= 1
    if i >= K:
        return
    if m == K:
        m = K - 1
    # shift down [i, m) -> [i+1, m+1)
    cdef int j = m
    while j > i:
        memcpy(vals + j * L, vals + (j - 1) * L, L * sizeof(uint64_t))
        refs[j] = refs[j - 1]
        j -= 1
    memcpy(vals + i * L, val, L * sizeof(uint64_t))
    refs[i] = ref
    cnt[0] = m + 1


def dp_topk_tour(cnp.ndarray[cnp.uint64_t, ndim=3, mode="c"] W, str kind, int K):
    """K heaviest directed Hamiltonian paths (kind="path") or cycles rooted at 0."""
    cdef int n = W.shape[0], L = W.shape[2]
    cdef int cyc = 1 if kind == "cycle" else 0
    cdef int nb = n - 1 if cyc else n      # bits in the mask
    cdef long long nmask = (<long long>1) << nb
    cdef long long nstates = nmask * n
    cdef const uint64_t* Wp = <const uint64_t*>W.data
    cdef uint64_t* vals
    cdef int32_t* refs
    cdef uint8_t* cnt
    cdef uint64_t* tmp
    cdef long long mask, nmk, st, dst, full, transitions = 0
    cdef int v, u, r, bv, bu
    if kind not in ("path", "cycle"):
        raise ValueError(kind)
    if K < 1 or K > 127 or n < 1 or n > 30 or (cyc and n < 3):
        raise ValueError("bad DP size")
    vals = <uint64_t*>malloc(nstates * K * L * sizeof(uint64_t))
    refs = <int32_t*>malloc(nstates * K * sizeof(int32_t))
    cnt = <uint8_t*>malloc(nstates * sizeof(uint8_t))
    tmp = <uint64_t*>malloc(L * sizeof(uint64_t))
    if vals == NULL or refs == NULL or cnt == NULL or tmp == NULL:
        free(vals); free(refs); free(cnt); free(tmp)
        raise MemoryError("DP table of %d states" % nstates)
    try:
        with nogil:
            memset(cnt, 0, nstates * sizeof(uint8_t))
            # vertex v <-> mask bit: path bit v; cycle bit v-1 (vertex 0 is the root)
            if cyc:
                for v in range(1, n):
                    st = ((<long long>1) << (v - 1)) * n + v
                    memcpy(vals + st * K * L, Wp + (0 * n + v) * L, L * sizeof(uint64_t))
                    refs[st * K] = -1
                    cnt[st] = 1
            else:
                for v in range(n):
                    st = ((<long long>1) << v) * n + v
                    memset(vals + st * K * L, 0, L * sizeof(uint64_t))
                    refs[st * K] = -1
                    cnt[st] = 1
            for mask in range(1, nmask):
                for v in range(n):
                    st = mask * n + v
                    if cnt[st] == 0:
                        continue
                    for u in range(n):
                        if cyc:
                            if u == 0:
                                continue
                            bu = u - 1
                        else:
                            bu = u
                        if (mask >> bu) & 1:
                            continue
                        nmk = mask | ((<long long>1) << bu)
                        dst = nmk * n + u
                        for r in range(cnt[st]):
                            ladd(tmp, vals + (st * K + r) * L, Wp + (v * n + u) * L, L)
                            topk_insert(vals + dst * K * L, refs + dst * K, cnt + dst, K, L,
                                        tmp, v * K + r)
                            transitions += 1
        # collect the final layer
        finals = []
        full = nmask - 1
        for v in range(n):
            if cyc and v == 0:
                continue
            st = full * n + v
            for r in range(cnt[st]):
                if cyc:
                    ladd(tmp, vals + (st * K + r) * L, Wp + v * n * L, L)
                    total = limbs_to_int(tmp, L)
                else:
                    total = limbs_to_int(vals + (st * K + r) * L, L)
                finals.append((total, v, r))
        finals.sort(key=lambda t: -t[0])
        out = []
        for total, v0, r0 in finals[:K]:
            order = []
            mask = full
            v = v0
            r = r0
            while True:
                order.append(v)
                st = mask * n + v
                ref = refs[st * K + r]
                if ref < 0:
                    break
                mask ^= (<long long>1) << (v - 1 if cyc else v)
                v = ref // K
                r = ref % K
            if cyc:
                order.append(0)
            out.append((total, tuple(reversed(order))))
        stats = {"transitions": transitions, "table_entries": nstates * K}
        return out, stats
    finally:
        free(vals); free(refs); free(cnt); free(tmp)


def dp_topk_matching(cnp.ndarray[cnp.uint64_t, ndim=3, mode="c"] W, int K):
    cdef int n = W.shape[0], L = W.shape[2]
    cdef long long nmask = (<long long>1) << n
    cdef const uint64_t* Wp = <const uint64_t*>W.data
    cdef uint64_t* vals
    cdef int32_t* refs
    cdef uint8_t* cnt
    cdef uint64_t* tmp
    cdef long long mask, nm, full, transitions = 0
    cdef int i, j, r, r0
    if n % 2 or n < 2 or n > 30 or K < 1 or K > 127:
        raise ValueError("bad DP size")
    vals = <uint64_t*>malloc(nmask * K * L * sizeof(uint64_t))
    refs = <int32_t*>malloc(nmask * K * sizeof(int32_t))
    cnt = <uint8_t*>malloc(nmask * sizeof(uint8_t))
    tmp = <uint64_t*>malloc(L * sizeof(uint64_t))
    if vals == NULL or refs == NULL or cnt == NULL or tmp == NULL:
        free(vals); free(refs); free(cnt); free(tmp)
        raise MemoryError("DP table of %d states" % nmask)
    try:
        with nogil:
            memset(cnt, 0, nmask * sizeof(uint8_t))
            memset(vals, 0, L * sizeof(uint64_t))
            refs[0] = -1
            cnt[0] = 1
            for mask in range(nmask - 1):
                if cnt[mask] == 0:
                    continue
                i = 0
                while (mask >> i) & 1:
                    i += 1
                for j in range(i + 1, n):
                    if (mask >> j) & 1:
                        continue
                    nm = mask | ((<long long>1) << i) | ((<long long>1) << j)
                    for r in range(cnt[mask]):
                        ladd(tmp, vals + (mask * K + r) * L, Wp + (i * n + j) * L, L)
                        topk_insert(vals + nm * K * L, refs + nm * K, cnt + nm, K, L,
                                    tmp, (i * n + j) * K + r)
                        transitions += 1
        out = []
        full = nmask - 1
        for r0 in range(cnt[full]):
            total = limbs_to_int(vals + (full * K + r0) * L, L)
            pairs = []
            mask = full
            r = r0
            while True:
                ref = refs[mask * K + r]
                if ref < 0:
                    break
                code = ref // K
                r = ref % K
                i = code // n
                j = code % n
                pairs.append((i, j))
                mask ^= ((<long long>1) << i) | ((<long long>1) << j)
            flat = tuple(x for p in sorted(pairs) for x in p)
            out.append((total, flat))
        stats = {"transitions": transitions, "table_entries": nmask * K}
        return out, stats
    finally:
        free(vals); free(refs); free(cnt); free(tmp)
