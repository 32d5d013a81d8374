"""Per-chirotope invariants: universal edges, facet-ridge graphs, valence
matrices, the facet-avoidance number and dual-deletion tests."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .canon import facet_complex_key
from .chirotope import Chirotope, contract, delete, dual
from .errors import UsageError
from .faces import facet_masks, is_neighborly, mask_facets
from .linalg import det_exact
from .subsets import elements_of

DIAGONALS = ("count", "zero")
MISSING = ("minimal", "all")


@dataclass(frozen=True)
class FacetRidgeGraph:
    facets: tuple[int, ...]          # facet masks
    adj: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.facets)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, nb in enumerate(self.adj) for j in nb if i < j]


def graph_from_edges(nv: int, edges) -> FacetRidgeGraph:
    adj = [set() for _ in range(nv)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return FacetRidgeGraph(tuple(range(nv)), tuple(tuple(sorted(s)) for s in adj))


def universal_edges(chi: Chirotope) -> list[tuple[int, int]]:
    """Pairs whose contraction is still neighborly (odd rank only)."""
    if chi.r % 2 == 0:
        raise UsageError("universal edges are defined for odd rank")
    if chi.r < 3:
        raise UsageError("need rank >= 3 to contract a pair")
    return [(a, b) for a, b in combinations(range(chi.n), 2)
            if is_neighborly(contract(chi, (a, b)))]


def facet_ridge_graph(chi: Chirotope) -> FacetRidgeGraph:
    fm = [int(f) for f in facet_masks(chi)]
    r = chi.r
    adj = []
    for i, f in enumerate(fm):
        adj.append(tuple(j for j, g in enumerate(fm) if j != i and bin(f & g).count("1") == r - 2))
    return FacetRidgeGraph(tuple(fm), tuple(adj))


def _bfs(adj, s):
    dist = [-1] * len(adj)
    dist[s] = 0
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def diameter(g: FacetRidgeGraph) -> int:
    if g.order == 0:
        raise ValueError("empty graph has no diameter")
    best = 0
    for s in range(g.order):
        d = _bfs(g.adj, s)
        if min(d) < 0:
            raise ValueError("graph is disconnected")
        best = max(best, max(d))
    return best


def has_hamiltonian_circuit(g: FacetRidgeGraph) -> bool:
    """Exact backtracking search for a Hamiltonian cycle."""
    nv = g.order
    if nv < 3:
        raise UsageError("a Hamiltonian circuit needs at least 3 vertices")
    adj = [list(a) for a in g.adj]
    if any(len(a) < 2 for a in adj) or min(_bfs(adj, 0)) < 0:
        return False
    deg = [len(a) for a in adj]
    for a in adj:
        a.sort(key=lambda w: (deg[w], w))
    start = 0
    on = [False] * nv
    on[start] = True

    def connected_rest(end):
        # unvisited vertices plus the path ends must lie in one component
        seen = {end}
        stack = [end]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen and (not on[w] or w == start):
                    seen.add(w)
                    stack.append(w)
        return all(on[v] or v in seen for v in range(nv)) and start in seen

    def free_degree_ok(end):
        for v in range(nv):
            if on[v]:
                continue
            c = 0
            for w in adj[v]:
                if not on[w] or w == end or w == start:
                    c += 1
                    if c >= 2:
                        break
            if c < 2:
                return False
        return True

    def rec(v, depth):
        if depth == nv:
            return start in adj[v]
        if not connected_rest(v) or not free_degree_ok(v):
            return False
        for w in adj[v]:
            if not on[w]:
                on[w] = True
                if rec(w, depth + 1):
                    return True
                on[w] = False
        return False

    return rec(start, 1)


def _faces_set(fmasks) -> set[int]:
    out = set()
    for f in fmasks:
        f = int(f)
        sub = f
        while True:
            out.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & f
    return out


def minimal_nonfaces(chi: Chirotope) -> list[int]:
    """Masks of the non-faces all of whose proper subsets are faces."""
    faces = _faces_set(facet_masks(chi))
    n = chi.n
    out = set()
    for f in faces:
        for e in range(n):
            if (f >> e) & 1:
                continue
            s = f | (1 << e)
            if s in faces or s in out:
                continue
            if all((s & ~(1 << x)) in faces for x in elements_of(s)):
                out.add(s)
    return sorted(out)


def nonfaces(chi: Chirotope) -> list[int]:
    faces = _faces_set(facet_masks(chi))
    return [s for s in range(1 << chi.n) if s not in faces]


def edge_valence_matrices(chi: Chirotope, *, diagonal: str = "count", missing: str = "minimal"):
    """Facet pair counts A and missing-face pair counts M as lists of rows."""
    if diagonal not in DIAGONALS:
        raise UsageError(f"diagonal convention must be one of {DIAGONALS}")
    if missing not in MISSING:
        raise UsageError(f"missing-face convention must be one of {MISSING}")
    n = chi.n
    A = [[0] * n for _ in range(n)]
    for f in facet_masks(chi):
        els = elements_of(int(f))
        for i in els:
            A[i][i] += 1
            for j in els:
                if j != i:
                    A[i][j] += 1
    M = [[0] * n for _ in range(n)]
    for s in (minimal_nonfaces(chi) if missing == "minimal" else nonfaces(chi)):
        els = elements_of(s)
        for i in els:
            for j in els:
                M[i][j] += 1
    if diagonal == "zero":
        for i in range(n):
            A[i][i] = 0
            M[i][i] = 0
    return A, M


def sstar_max_k(chi: Chirotope) -> int:
    """Largest k such that every k-subset is avoided by some facet."""
    fm = [int(f) for f in facet_masks(chi)]
    n = chi.n
    k = 0
    while k < n:
        ok = all(any(not (f & sum(1 << e for e in K)) for f in fm)
                 for K in combinations(range(n), k + 1))
        if not ok:
            break
        k += 1
    return k


def dual_deletion_check(chi: Chirotope) -> list[int]:
    """Elements e with both chi minus e and dual(chi) minus e neighborly."""
    n, r = chi.n, chi.r
    if n - 1 < r or r == n or n - 1 < n - r or n - r < 1:
        return []
    d = dual(chi)
    return [e for e in range(n) if is_neighborly(delete(chi, e)) and is_neighborly(delete(d, e))]


def quotient_keys(chi: Chirotope, size: int) -> list[bytes]:
    """Distinct facet-complex keys of the contractions by faces of the given size."""
    if not 1 <= size <= chi.r - 3:
        raise UsageError(f"quotient size must be in 1..{chi.r - 3}")
    fm = [int(f) for f in facet_masks(chi)]
    keys = set()
    for F in combinations(range(chi.n), size):
        s = sum(1 << e for e in F)
        if any(f & s == s for f in fm):
            q = contract(chi, F)
            keys.add(facet_complex_key(facet_masks(q), q.n))
    return sorted(keys)


def entry_report(chi: Chirotope, key: bytes | None = None, *, diagonal="count", missing="minimal",
                 analyses=None) -> dict:
    """The per-entry JSON record for the selected analyses."""
    sel = set(analyses or ANALYSES)
    rec: dict = {}
    if key is not None:
        rec["key"] = key.hex()
    fm = facet_masks(chi)
    if "facets" in sel:
        rec["facets"] = [[e + 1 for e in F] for F in mask_facets(fm)]
    if "universal_edges" in sel:
        rec["universal_edge_count"] = len(universal_edges(chi)) if chi.r % 2 else None
    if "diameter" in sel or "hamiltonian" in sel:
        g = facet_ridge_graph(chi)
        if "diameter" in sel:
            rec["diameter"] = diameter(g)
        if "hamiltonian" in sel:
            rec["hamiltonian"] = has_hamiltonian_circuit(g) if g.order >= 3 else None
    if "det" in sel:
        A, M = edge_valence_matrices(chi, diagonal=diagonal, missing=missing)
        rec["detA"] = str(det_exact(A))
        rec["detM"] = str(det_exact(M))
    if "sstar" in sel:
        rec["sstar_k"] = sstar_max_k(chi)
    if "dual_deletion" in sel:
        rec["dual_deletion"] = [e + 1 for e in dual_deletion_check(chi)]
    return rec


ANALYSES = ("facets", "universal_edges", "diameter", "hamiltonian", "det", "sstar")
OPTIONAL_ANALYSES = ("dual_deletion", "bfp")
