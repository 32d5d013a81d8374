# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels`` (same results, same order)."""
from libc.stdint cimport uint64_t, int8_t
from libc.stdlib cimport malloc, free


cdef struct Sat:
    int nvars
    int ncl
    uint64_t *pos
    uint64_t *neg
    int *ot_start
    int *ot
    int *of_start
    int *of
    uint64_t full
    int *stack


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _lowbit(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef int _propagate(Sat *s, uint64_t *T, uint64_t *F, int sp) noexcept nogil:
    # stack entries: v*2 + val
    cdef int e, v, val, i, c, w
    cdef uint64_t t = T[0], f = F[0], p, q, fr, up, uq, u
    while sp > 0:
        sp -= 1
        e = s.stack[sp]
        v = e >> 1
        val = e & 1
        if val:
            for i in range(s.ot_start[v], s.ot_start[v + 1]):
                c = s.ot[i]
                p = s.pos[c]; q = s.neg[c]
                if (p & t) or (q & f):
                    continue
                fr = ~(t | f)
                up = p & fr; uq = q & fr; u = up | uq
                if u == 0:
                    return 0
                if (u & (u - 1)) == 0:
                    w = _lowbit(u)
                    if up:
                        t |= u; s.stack[sp] = w * 2 + 1
                    else:
                        f |= u; s.stack[sp] = w * 2
                    sp += 1
        else:
            for i in range(s.of_start[v], s.of_start[v + 1]):
                c = s.of[i]
                p = s.pos[c]; q = s.neg[c]
                if (p & t) or (q & f):
                    continue
                fr = ~(t | f)
                up = p & fr; uq = q & fr; u = up | uq
                if u == 0:
                    return 0
                if (u & (u - 1)) == 0:
                    w = _lowbit(u)
                    if up:
                        t |= u; s.stack[sp] = w * 2 + 1
                    else:
                        f |= u; s.stack[sp] = w * 2
                    sp += 1
    T[0] = t
    F[0] = f
    return 1


cdef void _rec(Sat *s, uint64_t T, uint64_t F, list out):
    cdef uint64_t a = T | F, bit, t2, f2
    cdef int v
    if a == s.full:
        out.append(T)
        return
    bit = (a + 1) & ~a
    v = _lowbit(bit)
    t2 = T | bit; f2 = F
    s.stack[0] = v * 2 + 1
    if _propagate(s, &t2, &f2, 1):
        _rec(s, t2, f2, out)
    t2 = T; f2 = F | bit
    s.stack[0] = v * 2
    if _propagate(s, &t2, &f2, 1):
        _rec(s, t2, f2, out)


def sat_all(int nvars, pos, neg):
    """All satisfying assignments as true-set bitmasks (nvars <= 64)."""
    if nvars > 64:
        raise ValueError("compiled sat_all supports at most 64 variables")
    cdef int ncl = len(pos), c, v, sp = 0
    cdef Sat s
    cdef uint64_t p, q, u, T = 0, F = 0
    cdef list out = []
    for c in range(ncl):
        if pos[c] == 0 and neg[c] == 0:
            return []
    s.nvars = nvars
    s.ncl = ncl
    s.full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if nvars == 64 else ((<uint64_t>1 << nvars) - 1)
    s.pos = <uint64_t *>malloc(max(ncl, 1) * sizeof(uint64_t))
    s.neg = <uint64_t *>malloc(max(ncl, 1) * sizeof(uint64_t))
    s.ot_start = <int *>malloc((nvars + 1) * sizeof(int))
    s.of_start = <int *>malloc((nvars + 1) * sizeof(int))
    s.stack = <int *>malloc((2 * nvars + 2) * sizeof(int))
    cdef int *cnt_t = <int *>malloc((nvars + 1) * sizeof(int))
    cdef int *cnt_f = <int *>malloc((nvars + 1) * sizeof(int))
    s.ot = NULL
    s.of = NULL
    try:
        for v in range(nvars + 1):
            cnt_t[v] = 0; cnt_f[v] = 0
        for c in range(ncl):
            s.pos[c] = <uint64_t>pos[c]
            s.neg[c] = <uint64_t>neg[c]
            for v in range(nvars):
                if (s.neg[c] >> v) & 1:
                    cnt_t[v] += 1
                if (s.pos[c] >> v) & 1:
                    cnt_f[v] += 1
        s.ot_start[0] = 0; s.of_start[0] = 0
        for v in range(nvars):
            s.ot_start[v + 1] = s.ot_start[v] + cnt_t[v]
            s.of_start[v + 1] = s.of_start[v] + cnt_f[v]
        s.ot = <int *>malloc(max(s.ot_start[nvars], 1) * sizeof(int))
        s.of = <int *>malloc(max(s.of_start[nvars], 1) * sizeof(int))
        for v in range(nvars):
            cnt_t[v] = s.ot_start[v]; cnt_f[v] = s.of_start[v]
        for c in range(ncl):
            for v in range(nvars):
                if (s.neg[c] >> v) & 1:
                    s.ot[cnt_t[v]] = c; cnt_t[v] += 1
                if (s.pos[c] >> v) & 1:
                    s.of[cnt_f[v]] = c; cnt_f[v] += 1
        for c in range(ncl):
            p = s.pos[c]; q = s.neg[c]; u = p | q
            if (u & (u - 1)) == 0:
                if p:
                    if F & p:
                        return []
                    if not (T & p):
                        T |= p; s.stack[sp] = _lowbit(p) * 2 + 1; sp += 1
                else:
                    if T & q:
                        return []
                    if not (F & q):
                        F |= q; s.stack[sp] = _lowbit(q) * 2; sp += 1
        if not _propagate(&s, &T, &F, sp):
            return []
        _rec(&s, T, F, out)
        return out
    finally:
        free(s.pos); free(s.neg); free(s.ot_start); free(s.of_start)
        free(s.stack); free(cnt_t); free(cnt_f)
        if s.ot != NULL:
            free(s.ot)
        if s.of != NULL:
            free(s.of)


cdef struct Loc:
    int ncol
    int *cstart      # coline i covers entries cstart[i]..cstart[i+1]
    int *hh          # cocircuit index per entry
    int *wstart      # words for coline i start at wstart[i], 2m words of m signs
    int8_t *words
    int8_t *sigma
    int nh
    int *assigned
    int *tstart      # colines touching cocircuit h: tcol[tstart[h]..tstart[h+1]]
    int *tcol
    Py_ssize_t limit


cdef int _viable(Loc *L, int ci) noexcept nogil:
    cdef int m = L.cstart[ci + 1] - L.cstart[ci], t, j, base, ok
    cdef int8_t cur
    for t in range(2 * m):
        base = L.wstart[ci] + t * m
        ok = 1
        for j in range(m):
            cur = L.sigma[L.hh[L.cstart[ci] + j]]
            if cur != 0 and cur != L.words[base + j]:
                ok = 0
                break
        if ok:
            return 1
    return 0


cdef void _loc_rec(Loc *L, int ci, int depth_off, list out):
    cdef int m, t, j, h, na, ok, base, k
    cdef int8_t cur, want
    if ci == L.ncol:
        out.append((<char *>L.sigma)[:L.nh])
        return
    m = L.cstart[ci + 1] - L.cstart[ci]
    for t in range(2 * m):
        if L.limit and len(out) >= L.limit:
            return
        base = L.wstart[ci] + t * m
        na = 0
        ok = 1
        for j in range(m):
            h = L.hh[L.cstart[ci] + j]
            cur = L.sigma[h]
            want = L.words[base + j]
            if cur == 0:
                L.sigma[h] = want
                L.assigned[depth_off + na] = h
                na += 1
            elif cur != want:
                ok = 0
                break
        if ok:
            for j in range(na):
                h = L.assigned[depth_off + j]
                for k in range(L.tstart[h], L.tstart[h + 1]):
                    if L.tcol[k] > ci and not _viable(L, L.tcol[k]):
                        ok = 0
                        break
                if not ok:
                    break
        if ok:
            _loc_rec(L, ci + 1, depth_off + na, out)
        for j in range(na):
            L.sigma[L.assigned[depth_off + j]] = 0


def localizations(sigma0, col_h, col_s, Py_ssize_t limit=0):
    """Compiled twin of ``_pykernels.localizations``."""
    cdef Loc L
    cdef int ncol = len(col_h), i, j, t, m, tot = 0, wtot = 0, k
    cdef list out = []
    cdef bytes sb = bytes(sigma0)
    L.nh = len(sb)
    L.ncol = ncol
    L.limit = limit
    for i in range(ncol):
        m = len(col_h[i])
        tot += m
        wtot += 2 * m * m
    L.cstart = <int *>malloc((ncol + 1) * sizeof(int))
    L.wstart = <int *>malloc((ncol + 1) * sizeof(int))
    L.hh = <int *>malloc(max(tot, 1) * sizeof(int))
    L.words = <int8_t *>malloc(max(wtot, 1) * sizeof(int8_t))
    L.sigma = <int8_t *>malloc(max(L.nh, 1) * sizeof(int8_t))
    L.assigned = <int *>malloc(max(L.nh, 1) * sizeof(int))
    L.tstart = <int *>malloc((L.nh + 1) * sizeof(int))
    L.tcol = <int *>malloc(max(tot, 1) * sizeof(int))
    try:
        for i in range(L.nh):
            L.sigma[i] = <int8_t>(<signed char>(sb[i] if sb[i] < 128 else sb[i] - 256))
        L.cstart[0] = 0
        L.wstart[0] = 0
        for i in range(ncol):
            hs = col_h[i]
            ss = col_s[i]
            m = len(hs)
            for j in range(m):
                L.hh[L.cstart[i] + j] = hs[j]
            L.cstart[i + 1] = L.cstart[i] + m
            for t in range(2 * m):
                for j in range(m):
                    k = 1 if ((j - t) % (2 * m) + 2 * m) % (2 * m) < m else -1
                    L.words[L.wstart[i] + t * m + j] = <int8_t>(k * ss[j])
            L.wstart[i + 1] = L.wstart[i] + 2 * m * m
        for i in range(L.nh + 1):
            L.tstart[i] = 0
        for i in range(tot):
            L.tstart[L.hh[i] + 1] += 1
        for i in range(L.nh):
            L.tstart[i + 1] += L.tstart[i]
        fill = [L.tstart[i] for i in range(L.nh)]
        for i in range(ncol):
            for j in range(L.cstart[i], L.cstart[i + 1]):
                L.tcol[fill[L.hh[j]]] = i
                fill[L.hh[j]] += 1
        for i in range(ncol):
            if not _viable(&L, i):
                return out
        _loc_rec(&L, 0, 0, out)
        return out
    finally:
        free(L.cstart); free(L.wstart); free(L.hh); free(L.words); free(L.sigma); free(L.assigned)
        free(L.tstart); free(L.tcol)
