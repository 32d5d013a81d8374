"""Facets, faces and neighborliness of acyclic uniform chirotopes.

Uniform matroid polytopes have simplicial boundaries, so a set is a face
exactly when it lies in some facet; the face tests below rely on that.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .chirotope import Chirotope
from .errors import UsageError
from .signs import SignVector, compose
from .subsets import elements_of, subset_index
from .tables import circuit_table, cocircuit_table, kset_masks


def facet_data(chi: Chirotope) -> tuple[np.ndarray, np.ndarray]:
    """(h indices, orientation delta) of the non-negative cocircuits delta*C^H, lex order of H."""
    idx, par, _, _ = cocircuit_table(chi.n, chi.r)
    if idx.shape[1] == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int8)
    m = chi.signs[idx] * par
    pos = np.all(m == 1, axis=1)
    neg = np.all(m == -1, axis=1)
    hs = np.nonzero(pos | neg)[0]
    return hs, np.where(pos[hs], 1, -1).astype(np.int8)


def facet_masks(chi: Chirotope) -> np.ndarray:
    hs, _ = facet_data(chi)
    return cocircuit_table(chi.n, chi.r)[3][hs]


def nonneg_cocircuits(chi: Chirotope) -> list[SignVector]:
    hs, delta = facet_data(chi)
    hsets = subset_index(chi.n, chi.r - 1).subsets
    out = []
    for h, d in zip(hs, delta):
        C = chi.cocircuit(hsets[h])
        out.append(C if d > 0 else -C)
    return out


def facets(chi: Chirotope) -> list[tuple[int, ...]]:
    """Zero sets of the non-negative cocircuits, sorted lexicographically."""
    hsets = subset_index(chi.n, chi.r - 1).subsets
    return [hsets[h] for h in facet_data(chi)[0]]


def _circuit_ok(chi: Chirotope) -> bool:
    if chi.n <= chi.r:
        return True
    idx, par = circuit_table(chi.n, chi.r)
    c = chi.signs[idx] * par
    npos = (c == 1).sum(axis=1)
    nneg = c.shape[1] - npos
    return bool(np.all((npos >= 2) & (nneg >= 2)))


def is_matroid_polytope(chi: Chirotope) -> bool:
    """Acyclic with every element extreme: each circuit has >= 2 entries of each sign."""
    return _circuit_ok(chi)


def covered(fmasks: np.ndarray, n: int, k: int) -> bool:
    """Whether every k-subset of range(n) lies inside one of the facet masks."""
    if k <= 0:
        return True
    if len(fmasks) == 0:
        return False
    ks = kset_masks(n, k)
    hit = (ks[:, None] & fmasks[None, :]) == ks[:, None]
    return bool(hit.any(axis=1).all())


def _check_k(r: int, k: int):
    if not 1 <= k <= (r - 1) // 2:
        raise UsageError(f"k={k} outside 1..floor((r-1)/2) for rank {r}")


def is_k_neighborly(chi: Chirotope, k: int) -> bool:
    _check_k(chi.r, k)
    return is_matroid_polytope(chi) and covered(facet_masks(chi), chi.n, k)


def is_neighborly(chi: Chirotope) -> bool:
    k = (chi.r - 1) // 2
    if k == 0:
        return is_matroid_polytope(chi)
    return is_k_neighborly(chi, k)


def is_face(fmasks, subset) -> bool:
    s = 0
    for e in subset:
        s |= 1 << e
    return any((int(f) & s) == s for f in fmasks)


def covectors_brute(chi: Chirotope, max_n: int = 9) -> set[SignVector]:
    """Composition closure of the cocircuits plus the zero vector (test oracle)."""
    if chi.n > max_n:
        raise UsageError(f"covectors_brute refuses n={chi.n} > {max_n}")
    cocs = []
    for H in subset_index(chi.n, chi.r - 1).subsets:
        C = chi.cocircuit(H)
        cocs.extend([C, -C])
    seen = set(cocs)
    frontier = list(cocs)
    while frontier:
        nxt = []
        for X in frontier:
            if 0 not in X:
                continue
            for C in cocs:
                Y = compose(X, C)
                if Y not in seen:
                    seen.add(Y)
                    nxt.append(Y)
        frontier = nxt
    seen.add(SignVector([0] * chi.n))
    return seen


def faces_from_covectors(chi: Chirotope, covectors=None) -> set[frozenset[int]]:
    """Zero sets of non-negative covectors (the face family, via the oracle)."""
    if covectors is None:
        covectors = covectors_brute(chi)
    return {X.zero_set for X in covectors if X.is_nonnegative() and len(X.zero_set) < chi.n}


def faces_from_facets(chi: Chirotope) -> set[frozenset[int]]:
    out = set()
    for F in facets(chi):
        for m in range(len(F) + 1):
            for S in combinations(F, m):
                out.add(frozenset(S))
    return out


def facets_json(facet_list) -> list[list[int]]:
    return [[e + 1 for e in F] for F in facet_list]


def mask_facets(fmasks) -> list[tuple[int, ...]]:
    return [elements_of(int(m)) for m in fmasks]
