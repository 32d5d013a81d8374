"""Single-element extensions of uniform neighborly matroid polytopes.

Three stages per base chirotope:

1. boolean constraints on the signs of the non-negative cocircuits (the
   facets), enumerated with an all-solutions backtracker;
2. completion of every such signature to full localizations by coline
   backtracking (a signature is a localization iff each rank-2 contraction
   sees one + arc and one - arc);
3. extension chirotopes, re-verified directly as k-neighborly matroid
   polytopes (stages 1 and 2 only filter).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations

import numpy as np

from . import kernels
from .chirotope import Chirotope
from .errors import UsageError
from .faces import covered, facet_data, is_matroid_polytope
from .subsets import subset_index
from .tables import cocircuit_table, extension_positions


@dataclass(frozen=True)
class ColineSequence:
    """Cyclic order D_1..D_m of the cocircuits on a coline F, D_i = eps_i * (F, e_i)-cocircuit."""

    F: tuple[int, ...]
    elements: tuple[int, ...]
    eps: tuple[int, ...]


def coline_sequence(chi: Chirotope, F) -> ColineSequence:
    F = tuple(sorted(F))
    if len(F) != chi.r - 2 or len(set(F)) != len(F):
        raise UsageError(f"a coline needs {chi.r - 2} distinct elements, got {F}")
    rest = [e for e in range(chi.n) if e not in F]
    e1 = rest[0]
    eps = {e1: 1}
    for e in rest[1:]:
        eps[e] = chi.eval(F + (e1, e))

    def before(a, b):
        return -1 if eps[a] * eps[b] * chi.eval(F + (a, b)) > 0 else 1

    order = [e1] + sorted(rest[1:], key=cmp_to_key(before))
    return ColineSequence(F, tuple(order), tuple(eps[e] for e in order))


def coline_tables(chi: Chirotope):
    """Per coline (lex order of F): h indices of F+e_i and signs s_i with sigma(D_i) = s_i sigma(C^h)."""
    hset = subset_index(chi.n, chi.r - 1)
    col_h, col_s = [], []
    for F in combinations(range(chi.n), chi.r - 2):
        seq = coline_sequence(chi, F)
        hs, ss = [], []
        for e, ep in zip(seq.elements, seq.eps):
            above = sum(1 for f in F if f > e)
            hs.append(hset.index(tuple(sorted(F + (e,)))))
            ss.append(ep * (-1 if above & 1 else 1))
        col_h.append(hs)
        col_s.append(ss)
    return col_h, col_s


def coline_words(chi: Chirotope, sigma) -> list[tuple[int, ...]]:
    """The words sigma(D_1)..sigma(D_m) along every coline."""
    col_h, col_s = coline_tables(chi)
    return [tuple(int(s * sigma[h]) for h, s in zip(hs, ss)) for hs, ss in zip(col_h, col_s)]


def sign_changes(word) -> int:
    return sum(1 for a, b in zip(word, word[1:]) if a != b)


@dataclass
class ConstraintSet:
    """CNF over phi(C) for the facets C; variable i+1 is facet i (DIMACS numbering)."""

    nvars: int
    clauses: list[tuple[int, ...]]
    families: list[str]
    var_zero_sets: list[tuple[int, ...]]
    unsat: bool = False
    notes: list[str] = field(default_factory=list)

    def masks(self) -> tuple[list[int], list[int]]:
        pos, neg = [], []
        for cl in self.clauses:
            p = q = 0
            for lit in cl:
                if lit > 0:
                    p |= 1 << (lit - 1)
                else:
                    q |= 1 << (-lit - 1)
            pos.append(p)
            neg.append(q)
        return pos, neg

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.nvars} {len(self.clauses)}"]
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"

    def sidecar(self) -> str:
        """Mapping file: variable -> zero set of its facet (1-based elements)."""
        return "".join(f"{i + 1} {' '.join(str(e + 1) for e in Z)}\n"
                       for i, Z in enumerate(self.var_zero_sets))

    def satisfied_by(self, assignment) -> bool:
        for cl in self.clauses:
            if not any((assignment[l - 1] if l > 0 else not assignment[-l - 1]) for l in cl):
                return False
        return True


class _ClauseSink:
    def __init__(self):
        self.clauses, self.families, self._seen = [], [], set()
        self.unsat = False

    def add(self, lits, family):
        lits = tuple(sorted(set(lits), key=lambda l: (abs(l), l)))
        if any(-l in lits for l in lits):
            return
        if not lits:
            self.unsat = True
        if lits in self._seen:
            return
        self._seen.add(lits)
        self.clauses.append(lits)
        self.families.append(family)


FACE_RULES = ("beneath-beyond", "literal", "old-only")


def facet_constraints(chi: Chirotope, k: int, *, face_rule: str = "beneath-beyond",
                      beyond_connectivity: bool | None = None) -> ConstraintSet:
    """Necessary conditions on the facet signs of a k-neighborly extension.

    Family (a): every m-subset S (m <= k) of the extended ground set must be
    a face. With the default "beneath-beyond" rule an old S needs a + facet
    containing it, and S = S' + {new} needs both signs among the facets
    containing S'. "literal" also accepts, for old S, both signs among the
    facets meeting S in m-1 elements; "old-only" is "literal" without the
    subsets that contain the new element.
    Family (b): within the + facets and within the - facets, every facet
    has a ridge-neighbour of the same sign. The - half needs at least two
    - facets, guaranteed only for k >= 2 (a single - facet is a stacking),
    so by default it is emitted only then.
    Family (c): stars of the + (resp. -) complex are ridge-connected.
    """
    r, n = chi.r, chi.n
    hs, _ = facet_data(chi)
    hmask = cocircuit_table(n, r)[3]
    zs = [int(hmask[h]) for h in hs]
    zsets = [subset_index(n, r - 1).subsets[h] for h in hs]
    p = len(zs)
    if beyond_connectivity is None:
        beyond_connectivity = k >= 2
    sink = _ClauseSink()

    def popc(x):
        return bin(x).count("1")

    if face_rule not in FACE_RULES:
        raise UsageError(f"unknown face rule {face_rule!r}")
    # (a)
    for m in range(1, k + 1):
        for S in combinations(range(n), m):
            s = sum(1 << e for e in S)
            C = [i + 1 for i in range(p) if zs[i] & s == s]
            if face_rule == "beneath-beyond":
                sink.add(C, "a")
                continue
            D = [i + 1 for i in range(p) if popc(zs[i] & s) == m - 1]
            sink.add(C + D, "a")
            sink.add(C + [-d for d in D], "a")
        if face_rule != "old-only":
            for S in combinations(range(n), m - 1):
                s = sum(1 << e for e in S)
                D = [i + 1 for i in range(p) if zs[i] & s == s]
                sink.add(D, "a")
                sink.add([-d for d in D], "a")
    # (b)
    adj = [[j for j in range(p) if j != i and popc(zs[i] & zs[j]) == r - 2] for i in range(p)]
    for i in range(p):
        sink.add([-(i + 1)] + [j + 1 for j in adj[i]], "b")
        if beyond_connectivity:
            sink.add([i + 1] + [-(j + 1) for j in adj[i]], "b")
    # (c)
    for i in range(p):
        for j in range(p):
            if i == j:
                continue
            common = zs[i] & zs[j]
            if popc(common) >= r - 2:
                continue
            C = [c for c in adj[i] if zs[c] & common == common]
            sink.add([-(i + 1), -(j + 1)] + [c + 1 for c in C], "c")
            sink.add([i + 1, j + 1] + [-(c + 1) for c in C], "c")
    cs = ConstraintSet(p, sink.clauses, sink.families, zsets, sink.unsat)
    if sink.unsat:
        cs.notes.append("empty clause: no extension can satisfy family (a)")
    return cs


def signature_masks(cs: ConstraintSet) -> list[int]:
    if cs.unsat:
        return []
    pos, neg = cs.masks()
    return kernels.sat_all(cs.nvars, pos, neg)


def enumerate_signatures(cs: ConstraintSet):
    """Yield every satisfying assignment (tuple of bools, one per facet) exactly once."""
    for T in signature_masks(cs):
        yield tuple(bool((T >> i) & 1) for i in range(cs.nvars))


def parse_models(text: str, nvars: int) -> list[tuple[bool, ...]]:
    """Read models written one per line as signed DIMACS literals."""
    out = []
    for line in text.splitlines():
        lits = [int(x) for x in line.split() if x not in ("0", "v", "s")] if line.strip() else []
        if not lits:
            continue
        vals = [False] * nvars
        for l in lits:
            if abs(l) <= nvars:
                vals[abs(l) - 1] = l > 0
        out.append(tuple(vals))
    return sorted(set(out))


class ExtensionContext:
    """Per-base precomputation shared by all signature assignments of one chirotope."""

    def __init__(self, chi: Chirotope):
        self.chi = chi
        self.facet_h, self.facet_delta = facet_data(chi)
        self.nh = len(subset_index(chi.n, chi.r - 1))
        self.col_h, self.col_s = coline_tables(chi) if chi.r >= 2 else ([], [])
        self.old_pos, self.new_pos = extension_positions(chi.n, chi.r)

    def initial_sigma(self, phi) -> bytes:
        sigma = np.zeros(self.nh, dtype=np.int8)
        if isinstance(phi, int):
            phi = [(phi >> i) & 1 for i in range(len(self.facet_h))]
        if len(phi) != len(self.facet_h):
            raise UsageError("signature assignment does not match the facet set")
        for h, d, v in zip(self.facet_h, self.facet_delta, phi):
            sigma[h] = d if v else -d
        return sigma.tobytes()

    def localizations(self, phi) -> list[np.ndarray]:
        raw = kernels.localizations(self.initial_sigma(phi), self.col_h, self.col_s)
        return [np.frombuffer(b, dtype=np.int8) for b in raw]

    def extension(self, sigma) -> Chirotope:
        chi = self.chi
        out = np.empty(len(self.old_pos) + len(self.new_pos), dtype=np.int8)
        out[self.old_pos] = chi.signs
        out[self.new_pos] = sigma
        return Chirotope(chi.r, chi.n + 1, out)


def complete_localizations(chi: Chirotope, phi) -> list[np.ndarray]:
    """All localizations sigma (int8 per (r-1)-subset H, value sigma(C^H)) extending phi."""
    return ExtensionContext(chi).localizations(phi)


def extension_chirotope(chi: Chirotope, sigma) -> Chirotope:
    sigma = np.asarray(sigma, dtype=np.int8)
    if sigma.size != len(subset_index(chi.n, chi.r - 1)) or np.any(sigma == 0):
        raise UsageError("localization must assign +/- to every (r-1)-subset")
    return ExtensionContext(chi).extension(sigma)


def localization_of(ext: Chirotope) -> np.ndarray:
    """The localization sigma(C^H) = ext(H + {last}) of the last element of ``ext``."""
    _, new = extension_positions(ext.n - 1, ext.r)
    return ext.signs[new].copy()


@dataclass
class ExtensionStats:
    signatures: int = 0
    compatible: int = 0
    localizations: int = 0
    accepted: int = 0

    def __iadd__(self, other):
        self.signatures += other.signatures
        self.compatible += other.compatible
        self.localizations += other.localizations
        self.accepted += other.accepted
        return self


def iter_extensions(chi: Chirotope, k: int, stats: ExtensionStats | None = None, **cs_opts):
    """Yield every k-neighborly matroid-polytope single-element extension of chi."""
    if stats is None:
        stats = ExtensionStats()
    ctx = ExtensionContext(chi)
    cs = facet_constraints(chi, k, **cs_opts)
    n1 = chi.n + 1
    for T in signature_masks(cs):
        stats.signatures += 1
        locs = ctx.localizations(T)
        if locs:
            stats.compatible += 1
        for sigma in locs:
            stats.localizations += 1
            ext = ctx.extension(sigma)
            if is_matroid_polytope(ext):
                hs, _ = facet_data(ext)
                if covered(cocircuit_table(n1, chi.r)[3][hs], n1, k):
                    stats.accepted += 1
                    yield ext


def extend_all(chi: Chirotope, k: int, stats: ExtensionStats | None = None, **cs_opts) -> list[Chirotope]:
    return list(iter_extensions(chi, k, stats, **cs_opts))
