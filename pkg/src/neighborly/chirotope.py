"""Uniform chirotopes and the operations of the representation layer.

Elements are 0-based internally; the catalog and JSON formats are 1-based
only where stated.
"""
from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from .errors import DegeneracyError, RankError, UsageError
from .linalg import det_exact
from .signs import SignVector
from .subsets import sort_sign, subset_index
from .tables import cocircuit_table, gp_table


class Chirotope:
    """Rank-r uniform chirotope on n elements.

    ``signs`` holds +1/-1 per sorted r-subset in lexicographic order. The
    array is read-only so instances can be shared between workers.
    """

    __slots__ = ("r", "n", "signs", "_bytes")

    def __init__(self, r: int, n: int, signs):
        if r < 1 or n < r:
            raise RankError(f"need 1 <= r <= n, got r={r}, n={n}")
        arr = np.array(signs, dtype=np.int8).reshape(-1)
        if arr.size != comb(n, r):
            raise UsageError(f"expected C({n},{r})={comb(n, r)} signs, got {arr.size}")
        if not np.all((arr == 1) | (arr == -1)):
            raise DegeneracyError("uniform chirotopes take only the values +1 and -1")
        arr.setflags(write=False)
        self.r = r
        self.n = n
        self.signs = arr
        self._bytes = None

    # -- construction / serialization ------------------------------------
    @classmethod
    def from_string(cls, r: int, n: int, text: str) -> "Chirotope":
        vals = []
        for c in text:
            if c == "+":
                vals.append(1)
            elif c == "-":
                vals.append(-1)
            elif c == "0":
                raise DegeneracyError("zero chirotope entry in sign string")
            else:
                raise UsageError(f"bad sign character {c!r}")
        return cls(r, n, vals)

    @classmethod
    def from_line(cls, line: str) -> "Chirotope":
        parts = line.split()
        if len(parts) < 3:
            raise UsageError(f"catalog line needs 'r n signs', got {line!r}")
        return cls.from_string(int(parts[0]), int(parts[1]), parts[2])

    def sign_string(self) -> str:
        return self.signs.tobytes().replace(b"\x01", b"+").replace(b"\xff", b"-").decode()

    def to_line(self) -> str:
        return f"{self.r} {self.n} {self.sign_string()}"

    def tobytes(self) -> bytes:
        if self._bytes is None:
            self._bytes = self.signs.tobytes()
        return self._bytes

    def __eq__(self, other):
        if not isinstance(other, Chirotope):
            return NotImplemented
        return self.r == other.r and self.n == other.n and self.tobytes() == other.tobytes()

    def __hash__(self):
        return hash((self.r, self.n, self.tobytes()))

    def __neg__(self) -> "Chirotope":
        return Chirotope(self.r, self.n, -self.signs)

    def __repr__(self) -> str:
        s = self.sign_string()
        return f"Chirotope(r={self.r}, n={self.n}, '{s if len(s) <= 40 else s[:37] + '...'}')"

    # -- evaluation ---------------------------------------------------------
    def __getitem__(self, subset) -> int:
        """Stored sign of a sorted r-subset."""
        return int(self.signs[subset_index(self.n, self.r).index(subset)])

    def eval(self, seq) -> int:
        """Sign at an ordered r-tuple of distinct elements (alternating extension)."""
        seq = tuple(seq)
        if len(seq) != self.r:
            raise UsageError(f"need {self.r} elements, got {len(seq)}")
        par, s = sort_sign(seq)
        if par == 0:
            raise UsageError(f"repeated element in {seq}")
        if s[0] < 0 or s[-1] >= self.n:
            raise UsageError(f"element out of range in {seq}")
        return par * self[s]

    def cocircuit(self, H) -> SignVector:
        """Normalized cocircuit C^H: entry g is eval(H sorted + (g,)), zero on H."""
        H = tuple(sorted(H))
        if len(H) != self.r - 1 or len(set(H)) != len(H):
            raise UsageError(f"cocircuit needs {self.r - 1} distinct elements, got {H}")
        out = [0] * self.n
        for g in range(self.n):
            if g not in H:
                out[g] = self.eval(H + (g,))
        return SignVector(out)

    def circuit(self, L) -> SignVector:
        """Circuit supported on an (r+1)-subset: entry a_i is (-1)^i chi(L minus a_i)."""
        L = tuple(sorted(L))
        if len(L) != self.r + 1 or len(set(L)) != len(L):
            raise UsageError(f"circuit needs {self.r + 1} distinct elements, got {L}")
        out = [0] * self.n
        for i, a in enumerate(L):
            out[a] = (-1) ** i * self[L[:i] + L[i + 1:]]
        return SignVector(out)

    def cocircuit_matrix(self) -> np.ndarray:
        """Rows C^H restricted to the complement of H, H in lex order of (r-1)-subsets."""
        idx, par, _, _ = cocircuit_table(self.n, self.r)
        return self.signs[idx] * par


def signed_basis_eval(chi: Chirotope, seq) -> int:
    return chi.eval(seq)


def simplex(r: int) -> Chirotope:
    return Chirotope(r, r, [1])


def alternating(r: int, n: int) -> Chirotope:
    """All-+ chirotope: the cyclic polytope / moment-curve configuration."""
    return Chirotope(r, n, np.ones(comb(n, r), dtype=np.int8))


def delete(chi: Chirotope, e: int) -> Chirotope:
    if not 0 <= e < chi.n:
        raise UsageError(f"element {e} not in ground set")
    if chi.n - 1 < chi.r:
        raise RankError(f"cannot delete from n={chi.n} at rank {chi.r}")
    keep = [x for x in range(chi.n) if x != e]
    src = subset_index(chi.n, chi.r)
    vals = [chi.signs[src.index(tuple(keep[i] for i in lam))]
            for lam in subset_index(chi.n - 1, chi.r).subsets]
    return Chirotope(chi.r, chi.n - 1, vals)


def contract(chi: Chirotope, F) -> Chirotope:
    F = tuple(sorted(set(F)))
    if any(not 0 <= f < chi.n for f in F):
        raise UsageError(f"contraction set {F} outside ground set")
    if len(F) >= chi.r:
        raise UsageError(f"cannot contract {len(F)} elements at rank {chi.r}")
    if not F:
        return chi
    rest = [x for x in range(chi.n) if x not in F]
    rr = chi.r - len(F)
    vals = [chi.eval(F + tuple(rest[i] for i in mu)) for mu in subset_index(len(rest), rr).subsets]
    return Chirotope(rr, len(rest), vals)


def dual(chi: Chirotope) -> Chirotope:
    """Dual chirotope: chi*(complement) = chi(lambda) * sign of the shuffle (lambda, complement)."""
    n, r = chi.n, chi.r
    if r == n:
        raise RankError("the dual of a rank-n chirotope has rank 0")
    dset = subset_index(n, n - r)
    vals = np.zeros(len(dset), dtype=np.int8)
    for i, lam in enumerate(subset_index(n, r).subsets):
        comp = tuple(x for x in range(n) if x not in lam)
        par, _ = sort_sign(lam + comp)
        vals[dset.index(comp)] = par * chi.signs[i]
    return Chirotope(n - r, n, vals)


def relabel(chi: Chirotope, perm) -> Chirotope:
    """Relabel element e as perm[e]; value at lambda is chi evaluated at perm^-1(lambda)."""
    perm = list(perm)
    if sorted(perm) != list(range(chi.n)):
        raise UsageError(f"{perm} is not a permutation of range({chi.n})")
    inv = [0] * chi.n
    for e, p in enumerate(perm):
        inv[p] = e
    vals = [chi.eval(tuple(inv[x] for x in lam)) for lam in subset_index(chi.n, chi.r).subsets]
    return Chirotope(chi.r, chi.n, vals)


def reorient_chirotope(chi: Chirotope, A) -> Chirotope:
    A = set(A)
    if any(not 0 <= a < chi.n for a in A):
        raise UsageError(f"reorientation set {sorted(A)} outside ground set")
    vals = [s * (-1) ** sum(1 for x in lam if x in A)
            for s, lam in zip(chi.signs, subset_index(chi.n, chi.r).subsets)]
    return Chirotope(chi.r, chi.n, vals)


def gp_terms(chi: Chirotope) -> np.ndarray:
    """Signed terms (t1, t2, t3) of every three-term Grassmann-Pluecker relation.

    t1 = [tau a b][tau c d], t2 = -[tau a c][tau b d], t3 = [tau a d][tau b c].
    """
    idx, par, _ = gp_table(chi.n, chi.r)
    if len(idx) == 0:
        return np.zeros((0, 3), dtype=np.int8)
    v = chi.signs[idx] * par
    return np.stack([v[:, 0] * v[:, 1], -v[:, 2] * v[:, 3], v[:, 4] * v[:, 5]], axis=1)


def is_gp_consistent(chi: Chirotope) -> bool:
    t = gp_terms(chi)
    if len(t) == 0:
        return True
    bad = (t[:, 0] == t[:, 1]) & (t[:, 1] == t[:, 2])
    return not bool(bad.any())


def chirotope_from_points(points) -> Chirotope:
    """Rank d+1 chirotope of integer points homogenized as (p, 1)."""
    pts = [[int(x) for x in p] for p in points]
    if not pts:
        raise UsageError("empty point configuration")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise UsageError("points have different dimensions")
    n, r = len(pts), d + 1
    if n < r:
        raise RankError(f"{n} points cannot span rank {r}")
    rows = [p + [1] for p in pts]
    vals = []
    for lam in combinations(range(n), r):
        det = det_exact([rows[i] for i in lam])
        if det == 0:
            raise DegeneracyError(f"vanishing determinant at subset {[i + 1 for i in lam]} (1-based)")
        vals.append(1 if det > 0 else -1)
    return Chirotope(r, n, vals)


def parse_points(text: str) -> list[list[int]]:
    pts = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            pts.append([int(x) for x in line.replace(",", " ").split()])
    return pts
