"""Lexicographic indexing of sorted m-subsets of {0, ..., n-1}."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np


class SubsetIndex:
    """Bijection between sorted m-subsets of range(n) and 0..C(n,m)-1 (lex order)."""

    __slots__ = ("n", "m", "subsets", "_index")

    def __init__(self, n: int, m: int):
        if m < 0 or n < 0:
            raise ValueError(f"invalid subset family ({n}, {m})")
        self.n = n
        self.m = m
        self.subsets: tuple[tuple[int, ...], ...] = tuple(combinations(range(n), m))
        self._index = {s: i for i, s in enumerate(self.subsets)}

    def __len__(self) -> int:
        return len(self.subsets)

    def index(self, subset) -> int:
        try:
            return self._index[tuple(subset)]
        except KeyError:
            raise ValueError(f"{tuple(subset)} is not a sorted {self.m}-subset of range({self.n})") from None

    def subset(self, i: int) -> tuple[int, ...]:
        return self.subsets[i]

    def masks(self) -> np.ndarray:
        out = np.zeros(len(self.subsets), dtype=np.int64)
        for i, s in enumerate(self.subsets):
            for e in s:
                out[i] |= 1 << e
        return out

    def __repr__(self) -> str:
        return f"SubsetIndex(n={self.n}, m={self.m})"


@lru_cache(maxsize=None)
def subset_index(n: int, m: int) -> SubsetIndex:
    return SubsetIndex(n, m)


def sort_sign(seq) -> tuple[int, tuple[int, ...]]:
    """Return (parity sign, sorted tuple); parity is 0 if seq has repeats."""
    seq = list(seq)
    inv = 0
    for i in range(len(seq)):
        a = seq[i]
        for j in range(i + 1, len(seq)):
            b = seq[j]
            if a > b:
                inv += 1
            elif a == b:
                return 0, tuple(sorted(seq))
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


def mask_of(subset) -> int:
    m = 0
    for e in subset:
        m |= 1 << e
    return m


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)
