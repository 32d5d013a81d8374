"""Sign vectors over a finite ground set {0, ..., n-1}."""
from __future__ import annotations

_CHAR = {1: "+", -1: "-", 0: "0"}
_VAL = {"+": 1, "-": -1, "0": 0}


class SignVector(tuple):
    """Immutable tuple of entries in {+1, -1, 0}."""

    def __new__(cls, entries=()):
        entries = tuple(int(x) for x in entries)
        for x in entries:
            if x not in (1, -1, 0):
                raise ValueError(f"sign entries must be in {{+1,-1,0}}, got {x}")
        return super().__new__(cls, entries)

    @classmethod
    def parse(cls, text: str) -> "SignVector":
        return cls(_VAL[c] for c in text if not c.isspace())

    def __neg__(self) -> "SignVector":
        return SignVector(-x for x in self)

    def __str__(self) -> str:
        return "".join(_CHAR[x] for x in self)

    def __repr__(self) -> str:
        return f"SignVector('{self}')"

    def part(self, s: int) -> frozenset[int]:
        """The set X^s of positions carrying sign s."""
        return frozenset(e for e, x in enumerate(self) if x == s)

    @property
    def zero_set(self) -> frozenset[int]:
        return self.part(0)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(e for e, x in enumerate(self) if x)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self)


def _check(X, Y):
    if len(X) != len(Y):
        raise ValueError(f"sign vectors of different lengths {len(X)} and {len(Y)}")


def compose(X: SignVector, Y: SignVector) -> SignVector:
    _check(X, Y)
    return SignVector(x if x else y for x, y in zip(X, Y))


def separation(X: SignVector, Y: SignVector) -> frozenset[int]:
    _check(X, Y)
    return frozenset(e for e, (x, y) in enumerate(zip(X, Y)) if x and x == -y)


def reorient(X: SignVector, A) -> SignVector:
    A = set(A)
    bad = [a for a in A if not 0 <= a < len(X)]
    if bad:
        raise ValueError(f"reorientation set {sorted(bad)} outside ground set of size {len(X)}")
    return SignVector(-x if e in A else x for e, x in enumerate(X))


def conforms(X: SignVector, Y: SignVector) -> bool:
    """X <= Y in the covector order: X agrees with Y wherever X is nonzero."""
    _check(X, Y)
    return all(x == 0 or x == y for x, y in zip(X, Y))
