"""Cached index tables that turn chirotope queries into numpy gathers.

All tables are keyed by (n, r) and depend only on the lexicographic
subset order, never on a particular chirotope.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .subsets import subset_index


@lru_cache(maxsize=None)
def cocircuit_table(n: int, r: int):
    """For every (r-1)-subset H: gather indices/parities giving C^H on the complement.

    Returns (idx, par, free) with shape (C(n,r-1), n-r+1): C^H restricted to
    the elements free[h, :] equals signs[idx[h, :]] * par[h, :].
    """
    rset = subset_index(n, r)
    hs = subset_index(n, r - 1).subsets
    w = n - r + 1
    idx = np.zeros((len(hs), w), dtype=np.int64)
    par = np.zeros((len(hs), w), dtype=np.int8)
    free = np.zeros((len(hs), w), dtype=np.int64)
    for h, H in enumerate(hs):
        j = 0
        for g in range(n):
            if g in H:
                continue
            above = sum(1 for x in H if x > g)
            idx[h, j] = rset.index(tuple(sorted(H + (g,))))
            par[h, j] = -1 if above & 1 else 1
            free[h, j] = g
            j += 1
    hmask = subset_index(n, r - 1).masks()
    return idx, par, free, hmask


@lru_cache(maxsize=None)
def circuit_table(n: int, r: int):
    """For every (r+1)-subset L=(a_0..a_r): index of L minus a_i and sign (-1)^i."""
    rset = subset_index(n, r)
    ls = subset_index(n, r + 1).subsets
    idx = np.zeros((len(ls), r + 1), dtype=np.int64)
    par = np.zeros((len(ls), r + 1), dtype=np.int8)
    for l, L in enumerate(ls):
        for i in range(r + 1):
            idx[l, i] = rset.index(L[:i] + L[i + 1:])
            par[l, i] = -1 if i & 1 else 1
    return idx, par


def _bracket(rset, tau, x, y):
    seq = tau + (x, y)
    above = sum(1 for t in tau if t > x) + sum(1 for t in tau if t > y)
    # x < y always, so only the tau elements above each entry contribute
    return rset.index(tuple(sorted(seq))), (-1 if above & 1 else 1)


@lru_cache(maxsize=None)
def gp_table(n: int, r: int):
    """Three-term Grassmann-Pluecker index table.

    For each (tau, a<b<c<d) row: indices of the six brackets
    [tau a b], [tau c d], [tau a c], [tau b d], [tau a d], [tau b c] and the
    parity signs turning stored signs into the ordered evaluation.
    Also returns the list of (tau, quad) labels.
    """
    rows = []
    labels = []
    if r >= 2 and n - (r - 2) >= 4:
        rset = subset_index(n, r)
        for tau in combinations(range(n), r - 2):
            rest = [e for e in range(n) if e not in tau]
            for a, b, c, d in combinations(rest, 4):
                row = []
                for x, y in ((a, b), (c, d), (a, c), (b, d), (a, d), (b, c)):
                    row.extend(_bracket(rset, tau, x, y))
                rows.append(row)
                labels.append((tau, (a, b, c, d)))
    arr = np.array(rows, dtype=np.int64).reshape(-1, 12)
    idx = arr[:, 0::2].copy()
    par = arr[:, 1::2].astype(np.int8)
    return idx, par, tuple(labels)


@lru_cache(maxsize=None)
def extension_positions(n: int, r: int):
    """Positions, in the r-subset order of n+1 elements, of the old subsets and of H+{n}."""
    big = subset_index(n + 1, r)
    old = np.array([big.index(s) for s in subset_index(n, r).subsets], dtype=np.int64)
    new = np.array([big.index(H + (n,)) for H in subset_index(n, r - 1).subsets], dtype=np.int64)
    return old, new


@lru_cache(maxsize=None)
def kset_masks(n: int, k: int) -> np.ndarray:
    return subset_index(n, k).masks()
