"""Canonical keys for relabeling classes and face lattices.

All keys come from one individualization-refinement search: refine an
ordered partition with a label-invariant colouring, branch on the first
non-singleton cell, and keep the lexicographically smallest certificate
over the leaves. Automorphisms found as equal-certificate leaves prune
branches whose targets lie in the same orbit (restricted to automorphisms
fixing the current path). The key is complete whatever the refinement
strength; refinement only bounds the tree size.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .chirotope import Chirotope
from .faces import facet_data, facet_masks
from .subsets import subset_index
from .tables import cocircuit_table


# -- generic search ----------------------------------------------------------

def _cells(colors):
    order = sorted(range(len(colors)), key=lambda v: colors[v])
    return order


def _orbit_reps(cell, autos, path):
    parent = {v: v for v in cell}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    for g in autos:
        if all(g[p] == p for p in path):
            for v in cell:
                w = g[v]
                if w in parent:
                    a, b = find(v), find(w)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    return {v for v in cell if find(v) == v}


def search(n: int, colors, refine, certificate):
    """Minimal certificate over the search tree; returns (certificate, leaf permutation).

    ``refine(colors) -> colors`` must be label-invariant and return colours
    0..c-1; ``certificate(perm)`` gets perm[new_label] = old_label.
    """
    state = {"best": None, "perm": None}
    autos: list[list[int]] = []

    def rec(colors, path):
        colors = refine(colors)
        ncol = max(colors) + 1 if n else 0
        if ncol == n:
            perm = [0] * n
            for v, c in enumerate(colors):
                perm[c] = v
            cert = certificate(perm)
            best = state["best"]
            if best is None or cert < best:
                state["best"], state["perm"] = cert, perm
            elif cert == best:
                bp = state["perm"]
                g = [0] * n
                for i in range(n):
                    g[perm[i]] = bp[i]
                autos.append(g)
            return
        sizes = [0] * ncol
        for c in colors:
            sizes[c] += 1
        target = next(c for c in range(ncol) if sizes[c] > 1)
        cell = [v for v in range(n) if colors[v] == target]
        done = []
        for v in cell:
            if done and v not in _orbit_reps(done + [v], autos, path):
                continue
            ind = [2 * c + (1 if (c == target and u != v) else 0) for u, c in enumerate(colors)]
            rec(ind, path + [v])
            done.append(v)

    rec(list(colors), [])
    return state["best"], state["perm"]


def _compress(sigs):
    uniq = sorted(set(sigs))
    pos = {s: i for i, s in enumerate(uniq)}
    return [pos[s] for s in sigs], len(uniq)


def matrix_refiner(W):
    """1-WL refinement on a complete graph with invariant edge weights W[i][j]."""
    n = len(W)
    rows = [list(r) for r in W]

    def refine(colors):
        colors, k = _compress(colors)
        while True:
            sigs = [(colors[v], tuple(sorted((colors[u], rows[v][u]) for u in range(n) if u != v)))
                    for v in range(n)]
            new, k2 = _compress(sigs)
            if k2 == k:
                return new
            colors, k = new, k2

    return refine


# -- element-level keys ------------------------------------------------------

def _pair_counts(fmasks, n):
    fm = np.asarray([int(f) for f in fmasks], dtype=np.int64)
    if len(fm) == 0:
        return [[0] * n for _ in range(n)]
    inc = ((fm[:, None] >> np.arange(n)) & 1).astype(np.int64)
    return (inc.T @ inc).tolist()


def element_invariants(chi: Chirotope):
    """Label-invariant pair weights: facet pair counts and cocircuit sign agreements."""
    n = chi.n
    A = _pair_counts(facet_masks(chi), n)
    if chi.r >= 2 and chi.n > chi.r:
        idx, par, free, _ = cocircuit_table(n, chi.r)
        vals = chi.signs[idx] * par
        full = np.zeros((len(idx), n), dtype=np.int64)
        np.put_along_axis(full, free, vals.astype(np.int64), axis=1)
        P = (full == 1).astype(np.int64)
        N = (full == -1).astype(np.int64)
        B = (P.T @ P + N.T @ N).tolist()
    else:
        B = [[0] * n for _ in range(n)]
    return [[(A[i][j], B[i][j]) for j in range(n)] for i in range(n)]


@lru_cache(maxsize=None)
def _sign_tables(n, r):
    """Subsets as an array, the lex index of every r-mask, and the column pairs for inversions."""
    subs = np.array(subset_index(n, r).subsets, dtype=np.int64).reshape(-1, r)
    lookup = np.full(1 << n, -1, dtype=np.int64)
    lookup[subset_index(n, r).masks().astype(np.int64)] = np.arange(len(subs))
    pairs = np.array([(a, b) for a in range(r) for b in range(a + 1, r)], dtype=np.int64).reshape(-1, 2)
    return subs, lookup, pairs


def chirotope_certificate(chi: Chirotope):
    subs, lookup, pairs = _sign_tables(chi.n, chi.r)
    signs = chi.signs.astype(np.int8)

    def cert(perm):
        old = np.asarray(perm, dtype=np.int64)[subs]
        masks = (np.int64(1) << old).sum(axis=1)
        v = signs[lookup[masks]]
        if len(pairs):
            inv = (old[:, pairs[:, 0]] > old[:, pairs[:, 1]]).sum(axis=1) & 1
            v = np.where(inv == 1, -v, v)
        bits = (v > 0).astype(np.uint8)
        if len(bits) and bits[0] == 0:
            bits = 1 - bits
        return bits.tobytes()

    return cert


def _pack(r, n, bits: bytes) -> bytes:
    return bytes([r, n]) + np.packbits(np.frombuffer(bits, dtype=np.uint8)).tobytes()


def chirotope_key(chi: Chirotope) -> bytes:
    """Complete invariant of the relabeling class {+-chi o pi}."""
    bits, _ = search(chi.n, [0] * chi.n, matrix_refiner(element_invariants(chi)), chirotope_certificate(chi))
    return _pack(chi.r, chi.n, bits)


def canonical_relabeling(chi: Chirotope) -> list[int]:
    """A permutation perm (new label -> old) realizing the canonical form."""
    _, perm = search(chi.n, [0] * chi.n, matrix_refiner(element_invariants(chi)), chirotope_certificate(chi))
    return perm


def facet_complex_key(fmasks, n: int) -> bytes:
    """Complete invariant of a facet family up to relabeling of the elements.

    Equivalent to the canonical form of the vertex-facet incidence graph
    with vertices and facets in separate colour classes.
    """
    fm = [int(f) for f in fmasks]

    def cert(perm):
        inv = [0] * n
        for new, old in enumerate(perm):
            inv[old] = new
        out = []
        for f in fm:
            g = 0
            for e in range(n):
                if (f >> e) & 1:
                    g |= 1 << inv[e]
            out.append(g)
        out.sort()
        return tuple(out)

    best, _ = search(n, [0] * n, matrix_refiner(_pair_counts(fm, n)), cert)
    width = (n + 7) // 8
    return bytes([n, len(fm) >> 8, len(fm) & 255]) + b"".join(g.to_bytes(width, "big") for g in best)


def chirotope_facet_key(chi: Chirotope) -> bytes:
    return facet_complex_key(facet_masks(chi), chi.n)


# -- coloured graphs ------------------------------------------------------------

@dataclass(frozen=True)
class ColoredGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[int, ...]

    def __post_init__(self):
        if len(self.colors) != self.n:
            raise ValueError("colour list must cover every vertex")
        for a, b in self.edges:
            if not (0 <= a < self.n and 0 <= b < self.n) or a == b:
                raise ValueError(f"bad edge {(a, b)}")

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def make_graph(n, edges, colors) -> ColoredGraph:
    es = sorted({(min(a, b), max(a, b)) for a, b in edges})
    return ColoredGraph(n, tuple(es), tuple(colors))


def canonical_key(g: ColoredGraph) -> bytes:
    """Complete isomorphism invariant of a vertex-coloured graph."""
    adj = [set(a) for a in g.adjacency()]
    n = g.n
    nbrs = [sorted(a) for a in adj]

    def refine(colors):
        colors, k = _compress(colors)
        while True:
            sigs = [(colors[v], tuple(sorted(colors[u] for u in nbrs[v]))) for v in range(n)]
            new, k2 = _compress(sigs)
            if k2 == k:
                return new
            colors, k = new, k2

    def cert(perm):
        inv = [0] * n
        for new, old in enumerate(perm):
            inv[old] = new
        rows = []
        for new in range(n):
            rows.append(tuple(sorted(inv[u] for u in nbrs[perm[new]] if inv[u] > new)))
        return tuple(rows)

    base, _ = _compress(list(g.colors))
    best, _ = search(n, base, refine, cert)
    profile = [0] * (max(base) + 1 if n else 0)
    for c in base:
        profile[c] += 1
    bits = np.zeros(n * (n - 1) // 2, dtype=np.uint8)
    off = 0
    for i, row in enumerate(best):
        for j in row:
            bits[off + (j - i - 1)] = 1
        off += n - i - 1
    head = np.array([n] + profile, dtype=">u4").tobytes()
    return head + np.packbits(bits).tobytes()


def cocircuit_graph(chi: Chirotope) -> tuple[ColoredGraph, list]:
    """Cocircuit graph: vertices +-C^H (2 per (r-1)-subset), adjacent when
    their zero sets share r-2 elements and they agree off the zero sets."""
    n, r = chi.n, chi.r
    hsets = subset_index(n, r - 1).subsets
    vecs = []
    for H in hsets:
        C = chi.cocircuit(H)
        vecs.append(C)
        vecs.append(-C)
    zero = [frozenset(H) for H in hsets for _ in (0, 1)]
    edges = []
    by_ridge: dict[tuple, list[int]] = {}
    for v, H in enumerate(zero):
        for R in combinations(sorted(H), r - 2):
            by_ridge.setdefault(R, []).append(v)
    for R, vs in by_ridge.items():
        for a, b in combinations(vs, 2):
            if zero[a] == zero[b]:
                continue
            X, Y = vecs[a], vecs[b]
            if all(x == y for x, y in zip(X, Y) if x and y):
                edges.append((a, b))
    g = make_graph(len(vecs), edges, [0] * len(vecs))
    return g, vecs


def augmented_graph(chi: Chirotope) -> ColoredGraph:
    """Cocircuit graph plus apexes v+ (to non-negative) and v- (to non-positive), apexes share a colour."""
    g, vecs = cocircuit_graph(chi)
    vp, vm = g.n, g.n + 1
    edges = list(g.edges)
    for v, X in enumerate(vecs):
        if all(x >= 0 for x in X):
            edges.append((vp, v))
        if all(x <= 0 for x in X):
            edges.append((vm, v))
    return make_graph(g.n + 2, edges, [0] * g.n + [1, 1])


def graph_key(chi: Chirotope) -> bytes:
    return canonical_key(augmented_graph(chi))


KEY_FUNCTIONS = {
    "relabeling": chirotope_key,
    "facelattice": chirotope_facet_key,
    "graph": graph_key,
}


def dedupe(items, key: str = "relabeling") -> list[Chirotope]:
    """One representative per key (smallest catalog line), sorted by key."""
    try:
        fn = KEY_FUNCTIONS[key]
    except KeyError:
        raise ValueError(f"unknown key kind {key!r}") from None
    best: dict[bytes, Chirotope] = {}
    for chi in items:
        k = fn(chi)
        cur = best.get(k)
        if cur is None or chi.to_line() < cur.to_line():
            best[k] = chi
    return [best[k] for k in sorted(best)]
