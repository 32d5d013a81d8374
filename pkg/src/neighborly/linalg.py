"""Exact integer linear algebra."""
from __future__ import annotations

from .errors import UsageError


def det_exact(m) -> int:
    """Determinant of a square integer matrix by Bareiss fraction-free elimination."""
    a = [[int(x) for x in row] for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise UsageError("det_exact needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def det_cofactor(m) -> int:
    """Laplace expansion along the first row; exponential, used as a test oracle."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return int(m[0][0])
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * int(m[0][j]) * det_cofactor(minor)
    return total
