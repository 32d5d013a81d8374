"""Pure-Python implementations of the hot kernels.

These define the reference behaviour; ``_ckernels.pyx`` mirrors them
function for function and must return identical results.
"""
from __future__ import annotations


def sat_all(nvars: int, pos: list[int], neg: list[int]) -> list[int]:
    """All satisfying assignments of a CNF over ``nvars`` boolean variables.

    Clause c is the disjunction of the variables in bitmask pos[c] and the
    negations of those in neg[c]. Returns the true-sets as bitmasks, in the
    order of a DFS that branches on the lowest unassigned variable, True
    first.
    """
    ncl = len(pos)
    full = (1 << nvars) - 1
    occ_t = [[] for _ in range(nvars)]  # clauses hurt by setting v True
    occ_f = [[] for _ in range(nvars)]  # clauses hurt by setting v False
    for c in range(ncl):
        p, q = pos[c], neg[c]
        if p == 0 and q == 0:
            return []
        v = 0
        while q >> v:
            if (q >> v) & 1:
                occ_t[v].append(c)
            v += 1
        v = 0
        while p >> v:
            if (p >> v) & 1:
                occ_f[v].append(c)
            v += 1

    def propagate(T, F, stack):
        while stack:
            v, val = stack.pop()
            for c in (occ_t[v] if val else occ_f[v]):
                p = pos[c]
                q = neg[c]
                if p & T or q & F:
                    continue
                free = ~(T | F)
                up = p & free
                uq = q & free
                u = up | uq
                if not u:
                    return None
                if not (u & (u - 1)):
                    w = u.bit_length() - 1
                    if up:
                        T |= u
                        stack.append((w, True))
                    else:
                        F |= u
                        stack.append((w, False))
        return T, F

    # initial unit clauses
    T = F = 0
    stack = []
    for c in range(ncl):
        p, q = pos[c], neg[c]
        u = p | q
        if not (u & (u - 1)):
            if p:
                if F & p:
                    return []
                if not T & p:
                    T |= p
                    stack.append((p.bit_length() - 1, True))
            else:
                if T & q:
                    return []
                if not F & q:
                    F |= q
                    stack.append((q.bit_length() - 1, False))
    res = propagate(T, F, stack)
    if res is None:
        return []
    out: list[int] = []

    def rec(T, F):
        a = T | F
        if a == full:
            out.append(T)
            return
        bit = (a + 1) & ~a
        v = bit.bit_length() - 1
        res = propagate(T | bit, F, [(v, True)])
        if res is not None:
            rec(*res)
        res = propagate(T, F | bit, [(v, False)])
        if res is not None:
            rec(*res)

    rec(*res)
    return out


def arc_patterns(m: int) -> list[tuple[int, ...]]:
    """The 2m words over D_1..D_m cut out by one + arc of length m on the doubled cycle."""
    return [tuple(1 if (j - t) % (2 * m) < m else -1 for j in range(m)) for t in range(2 * m)]


def localizations(sigma0: bytes, col_h: list[list[int]], col_s: list[list[int]], limit: int = 0) -> list[bytes]:
    """Complete a partial cocircuit signature along every coline.

    sigma0[h] is the int8 value (1, -1 or 0 = unassigned) of sigma(C^h).
    Coline i visits cocircuits D_j = col_s[i][j] * C^{col_h[i][j]} in cyclic
    order; every completion whose coline words have at most one sign change
    is returned (as int8 bytes), in DFS order over colines in the given
    order and arc starts ascending. After each step every coline touching a
    newly set entry must still admit some arc placement (forward check).
    A positive ``limit`` stops after that many completions.
    """
    sigma = [(x - 256 if x > 127 else x) for x in sigma0]
    ncol = len(col_h)
    out: list[bytes] = []
    pats = {}
    for hs in col_h:
        m = len(hs)
        if m not in pats:
            pats[m] = arc_patterns(m)
    # words prepared with the orientation signs folded in
    words = []
    for hs, ss in zip(col_h, col_s):
        words.append([tuple(s * w for s, w in zip(ss, pat)) for pat in pats[len(hs)]])
    touching = [[] for _ in range(len(sigma))]
    for ci, hs in enumerate(col_h):
        for h in hs:
            touching[h].append(ci)

    def viable(ci):
        hs = col_h[ci]
        for word in words[ci]:
            if all(sigma[h] == 0 or sigma[h] == w for h, w in zip(hs, word)):
                return True
        return False

    if not all(viable(ci) for ci in range(ncol)):
        return out

    def rec(ci):
        if ci == ncol:
            out.append(bytes((x & 0xFF) for x in sigma))
            return
        hs = col_h[ci]
        m = len(hs)
        for word in words[ci]:
            if limit and len(out) >= limit:
                return
            assigned = []
            ok = True
            for j in range(m):
                h = hs[j]
                cur = sigma[h]
                if cur == 0:
                    sigma[h] = word[j]
                    assigned.append(h)
                elif cur != word[j]:
                    ok = False
                    break
            if ok:
                ok = all(viable(cj) for h in assigned for cj in touching[h] if cj > ci)
            if ok:
                rec(ci + 1)
            for h in assigned:
                sigma[h] = 0

    rec(0)
    return out
