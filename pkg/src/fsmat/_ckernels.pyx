# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same names, signatures and results as _pykernels."""
from itertools import combinations

from libc.stdint cimport uint64_t, uint16_t, uint8_t, int64_t
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy, memset


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def popcount(x):
    return __builtin_popcountll(<unsigned long long>x)


cdef uint64_t* _as_u64(object seq, Py_ssize_t* n) except NULL:
    cdef Py_ssize_t i, size = len(seq)
    cdef uint64_t* buf = <uint64_t*>malloc((size + 1) * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    for i in range(size):
        buf[i] = <uint64_t>seq[i]
    n[0] = size
    return buf


cdef int _cmp_u64(const void* a, const void* b) noexcept nogil:
    cdef uint64_t x = (<const uint64_t*>a)[0]
    cdef uint64_t y = (<const uint64_t*>b)[0]
    return (x > y) - (x < y)


cdef extern from "stdlib.h":
    void qsort(void* base, size_t nmemb, size_t size,
               int (*compar)(const void*, const void*) noexcept nogil) nogil


cdef Py_ssize_t _distinct_and(uint64_t* masks, Py_ssize_t n, uint64_t s,
                              uint64_t* scratch) noexcept nogil:
    cdef Py_ssize_t i, count = 0
    if n == 0:
        return 0
    for i in range(n):
        scratch[i] = masks[i] & s
    qsort(scratch, n, sizeof(uint64_t), _cmp_u64)
    count = 1
    for i in range(1, n):
        if scratch[i] != scratch[i - 1]:
            count += 1
    return count


def trace_size(masks, s):
    cdef Py_ssize_t n
    cdef uint64_t* buf = _as_u64(masks, &n)
    cdef uint64_t* scratch = <uint64_t*>malloc((n + 1) * sizeof(uint64_t))
    cdef Py_ssize_t r
    try:
        r = _distinct_and(buf, n, <uint64_t>s, scratch)
    finally:
        free(buf)
        free(scratch)
    return r


cdef inline uint64_t _pext(uint64_t a, int* rows, int k) noexcept nogil:
    cdef uint64_t p = 0
    cdef int j
    for j in range(k):
        if (a >> rows[j]) & 1:
            p |= (<uint64_t>1) << j
    return p


def shattered_masks(masks, int m, int k):
    cdef Py_ssize_t n, i
    cdef uint64_t full = (<uint64_t>1) << k
    if <uint64_t>len(masks) < full:
        return []
    cdef uint64_t* buf = _as_u64(masks, &n)
    # full <= n, so a bitmap over patterns of size full is small.
    cdef uint8_t* seen = <uint8_t*>malloc(full)
    cdef int rows[64]
    cdef int j
    cdef uint64_t s, p, count
    out = []
    try:
        for combo in combinations(range(m), k):
            s = 0
            for j in range(k):
                rows[j] = combo[j]
                s |= (<uint64_t>1) << rows[j]
            memset(seen, 0, full)
            count = 0
            for i in range(n):
                p = _pext(buf[i], rows, k)
                if not seen[p]:
                    seen[p] = 1
                    count += 1
                    if count == full:
                        break
            if count == full:
                out.append(s)
    finally:
        free(buf)
        free(seen)
    return out


def compress_masks(masks, bit):
    present = set(masks)
    cdef uint64_t b = <uint64_t>bit
    cdef uint64_t a
    out = []
    for x in masks:
        a = <uint64_t>x
        if a & b and (a & ~b) not in present:
            out.append(a & ~b)
        else:
            out.append(a)
    return out


cdef Py_ssize_t _search_sorted(uint64_t* arr, Py_ssize_t n, uint64_t v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    if lo < n and arr[lo] == v:
        return lo
    return -1


def down_close_masks(masks, int m):
    cdef Py_ssize_t n, i
    cdef uint64_t* cur = _as_u64(masks, &n)
    cdef uint64_t* nxt = <uint64_t*>malloc((n + 1) * sizeof(uint64_t))
    cdef uint64_t* srt = <uint64_t*>malloc((n + 1) * sizeof(uint64_t))
    cdef uint64_t b, a
    cdef int bi
    cdef bint changed = True, step
    try:
        with nogil:
            while changed:
                changed = False
                for bi in range(m):
                    b = (<uint64_t>1) << bi
                    memcpy(srt, cur, n * sizeof(uint64_t))
                    qsort(srt, n, sizeof(uint64_t), _cmp_u64)
                    step = False
                    for i in range(n):
                        a = cur[i]
                        if a & b and _search_sorted(srt, n, a & ~b) < 0:
                            nxt[i] = a & ~b
                            step = True
                        else:
                            nxt[i] = a
                    if step:
                        changed = True
                        memcpy(cur, nxt, n * sizeof(uint64_t))
        out = [cur[i] for i in range(n)]
    finally:
        free(cur)
        free(nxt)
        free(srt)
    return out


def contains_cols(cols, int m, pcols, int k):
    cdef Py_ssize_t n, l, i
    cdef int rows[64]
    cdef int j, pos
    if k > m:
        return False
    cdef uint64_t* c = _as_u64(cols, &n)
    cdef uint64_t* f = _as_u64(pcols, &l)
    cdef bint found = False
    try:
        for combo in combinations(range(m), k):
            for j in range(k):
                rows[j] = combo[j]
            pos = 0
            with nogil:
                for i in range(n):
                    if _pext(c[i], rows, k) == f[pos]:
                        pos += 1
                        if pos == l:
                            found = True
                            break
            if found:
                break
    finally:
        free(c)
        free(f)
    return found


def contribution_windows(cols, int m, int k, row_sets):
    cdef Py_ssize_t n, idx
    cdef uint64_t full = (<uint64_t>1) << k
    cdef uint64_t* c = _as_u64(cols, &n)
    cdef int rows[64]
    cdef int j
    cdef uint64_t p, seen_count
    cdef int64_t* first = NULL
    out = []
    try:
        if <uint64_t>n >= full:
            first = <int64_t*>malloc(full * sizeof(int64_t))
        for rs in row_sets:
            windows = []
            if first != NULL:
                for j in range(k):
                    rows[j] = rs[j]
                for p in range(full):
                    first[p] = -1
                seen_count = 0
                for idx in range(n):
                    p = _pext(c[idx], rows, k)
                    if first[p] < 0:
                        first[p] = idx
                        seen_count += 1
                        if seen_count == full:
                            windows.append(sorted([first[p2] for p2 in range(full)]))
                            for p in range(full):
                                first[p] = -1
                            seen_count = 0
            out.append(windows)
    finally:
        free(c)
        if first != NULL:
            free(first)
    return out


# ---------------------------------------------------------------------------
# fs branch and bound

cdef struct Search:
    int N              # number of candidate columns, 2**m
    int T              # number of row tuples
    int l              # pattern width
    uint16_t* proj     # N x T restricted patterns
    uint16_t* pcols    # l pattern columns
    uint8_t* states    # (N + 1) x T match pointers, one row per depth
    int* alive         # (N + 1) x N alive lists, one row per depth
    int* seq           # current sequence
    int* best_seq
    int best
    bint improved
    int64_t nodes
    int64_t budget
    bint out_of_budget


cdef void _dfs(Search* S, int d, int n_alive) noexcept nogil:
    cdef int T = S.T, N = S.N, l = S.l
    cdef uint8_t* st = S.states + d * T
    cdef uint8_t* nst = S.states + (d + 1) * T
    cdef int* al = S.alive + d * N
    cdef int* nal = S.alive + (d + 1) * N
    cdef uint16_t last = S.pcols[l - 1]
    cdef int i, t, x, c, n_child
    cdef uint16_t* row
    cdef uint16_t* xrow
    cdef bint dead
    if S.nodes >= S.budget:
        S.out_of_budget = True
        return
    S.nodes += 1
    if d > S.best:
        S.best = d
        S.improved = True
        memcpy(S.best_seq, S.seq, d * sizeof(int))
    for i in range(n_alive):
        if d + n_alive <= S.best:
            return
        c = al[i]
        row = S.proj + c * T
        for t in range(T):
            if row[t] == S.pcols[st[t]]:
                nst[t] = st[t] + 1
            else:
                nst[t] = st[t]
        n_child = 0
        for x in range(n_alive):
            if al[x] == c:
                continue
            xrow = S.proj + al[x] * T
            dead = False
            for t in range(T):
                if nst[t] == l - 1 and xrow[t] == last:
                    dead = True
                    break
            if not dead:
                nal[n_child] = al[x]
                n_child += 1
        S.seq[d] = c
        _dfs(S, d + 1, n_child)
        if S.out_of_budget:
            return


def alive_after(int m, pcols, int k, prefix):
    return _alive_after(m, pcols, k, prefix)[0]


cdef _tables(int m, pcols, int k):
    tuples = list(combinations(range(m), k)) if k <= m else []
    proj = []
    for c in range(1 << m):
        r = []
        for t in tuples:
            p = 0
            for j, rr in enumerate(t):
                if (c >> rr) & 1:
                    p |= 1 << j
            r.append(p)
        proj.append(r)
    return tuples, proj


cdef _alive_after(int m, pcols, int k, prefix):
    tuples, proj = _tables(m, pcols, k)
    T = len(tuples)
    l = len(pcols)
    last = pcols[l - 1]
    state = [0] * T
    for c in prefix:
        row = proj[c]
        for t in range(T):
            if row[t] == pcols[state[t]]:
                state[t] += 1
                if state[t] == l:
                    raise ValueError("prefix already contains the pattern")
    used = set(prefix)
    alive = [
        c for c in range(1 << m)
        if c not in used
        and not any(state[t] == l - 1 and proj[c][t] == last for t in range(T))
    ]
    return alive, state, proj, T


def fs_subtree(int m, pcols, int k, prefix, int best_len, budget):
    alive, state, proj, T = _alive_after(m, pcols, k, prefix)
    cdef Search S
    cdef int N = 1 << m
    cdef int d0 = len(prefix)
    cdef int i, t, n_alive = len(alive)
    S.N = N
    S.T = T
    S.l = len(pcols)
    S.best = best_len
    S.improved = False
    S.nodes = 0
    S.budget = budget
    S.out_of_budget = False
    S.proj = <uint16_t*>malloc((N * T + 1) * sizeof(uint16_t))
    S.pcols = <uint16_t*>malloc(S.l * sizeof(uint16_t))
    S.states = <uint8_t*>calloc((N + 2) * (T + 1), sizeof(uint8_t))
    S.alive = <int*>malloc((N + 2) * N * sizeof(int))
    S.seq = <int*>malloc((N + 1) * sizeof(int))
    S.best_seq = <int*>malloc((N + 1) * sizeof(int))
    if (S.proj == NULL or S.pcols == NULL or S.states == NULL or S.alive == NULL
            or S.seq == NULL or S.best_seq == NULL):
        raise MemoryError()
    try:
        for i in range(N):
            for t in range(T):
                S.proj[i * T + t] = proj[i][t]
        for i in range(S.l):
            S.pcols[i] = pcols[i]
        for t in range(T):
            S.states[d0 * T + t] = state[t]
        for i in range(n_alive):
            S.alive[d0 * N + i] = alive[i]
        for i in range(d0):
            S.seq[i] = prefix[i]
        with nogil:
            _dfs(&S, d0, n_alive)
        best_seq = [S.best_seq[i] for i in range(S.best)] if S.improved else None
        return S.best, best_seq, S.nodes, not S.out_of_budget
    finally:
        free(S.proj)
        free(S.pcols)
        free(S.states)
        free(S.alive)
        free(S.seq)
        free(S.best_seq)
