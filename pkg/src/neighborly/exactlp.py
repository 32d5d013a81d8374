"""Exact rational feasibility for {x >= 0, B x = b} by phase-one simplex.

Bland's rule keeps the pivoting finite. Rows are stored sparsely as dicts
so the tableau stays small for the sparse systems built here.
"""
from __future__ import annotations

from fractions import Fraction


def nonneg_solution(rows, rhs) -> list[Fraction] | None:
    """A non-negative solution of rows . x = rhs, or None when none exists.

    ``rows`` is a list of {column: integer coefficient} dicts (or dense
    lists); the number of columns is inferred.
    """
    sparse = []
    for row in rows:
        if isinstance(row, dict):
            sparse.append({j: Fraction(v) for j, v in row.items() if v})
        else:
            sparse.append({j: Fraction(v) for j, v in enumerate(row) if v})
    b = [Fraction(v) for v in rhs]
    if len(sparse) != len(b):
        raise ValueError("row count and right-hand side differ")
    ncols = 1 + max((j for r in sparse for j in r), default=-1)
    m = len(sparse)
    for i in range(m):
        if b[i] < 0:
            sparse[i] = {j: -v for j, v in sparse[i].items()}
            b[i] = -b[i]
    # artificial column ncols+i for row i
    T = [dict(r) for r in sparse]
    for i in range(m):
        T[i][ncols + i] = Fraction(1)
    basis = [ncols + i for i in range(m)]
    # reduced costs of the phase-one objective (sum of artificials)
    cost: dict[int, Fraction] = {}
    for r in sparse:
        for j, v in r.items():
            cost[j] = cost.get(j, Fraction(0)) - v
    obj = -sum(b, Fraction(0))
    while True:
        enter = min((j for j, v in cost.items() if v < 0), default=None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i].get(enter)
            if a is not None and a > 0:
                ratio = b[i] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            # unbounded direction cannot happen for a phase-one problem
            raise ArithmeticError("phase-one simplex reported unboundedness")
        p = best[1]
        piv = T[p][enter]
        prow = {j: v / piv for j, v in T[p].items()}
        b[p] = b[p] / piv
        T[p] = prow
        for i in range(m):
            if i == p:
                continue
            a = T[i].get(enter)
            if a is None:
                continue
            row = T[i]
            for j, v in prow.items():
                nv = row.get(j, Fraction(0)) - a * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            b[i] -= a * b[p]
        c = cost.get(enter)
        if c:
            for j, v in prow.items():
                nv = cost.get(j, Fraction(0)) - c * v
                if nv:
                    cost[j] = nv
                else:
                    cost.pop(j, None)
            obj -= c * b[p]
        basis[p] = enter
    if obj != 0:
        return None
    x = [Fraction(0)] * ncols
    for i, j in enumerate(basis):
        if j < ncols:
            x[j] = b[i]
        elif b[i] != 0:
            return None
    return x


def kernel_basis(columns, ncols: int) -> list[list[Fraction]]:
    """Exact basis of {x : sum_c x_c columns[c] = 0} by sparse Gauss-Jordan.

    ``columns`` holds one {row: integer} dict per unknown.
    """
    rows: dict = {}
    for c, col in enumerate(columns):
        for v, a in col.items():
            if a:
                rows.setdefault(v, {})[c] = Fraction(a)
    piv: dict[int, dict[int, Fraction]] = {}
    for row in rows.values():
        r = dict(row)
        for c, pr in piv.items():
            a = r.get(c)
            if a:
                _axpy(r, pr, a)
        if not r:
            continue
        c = min(r)
        p = r[c]
        r = {j: v / p for j, v in r.items()}
        for pr in piv.values():
            a = pr.get(c)
            if a:
                _axpy(pr, r, a)
        piv[c] = r
    out = []
    for f in range(ncols):
        if f in piv:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for c, pr in piv.items():
            x[c] = -pr.get(f, Fraction(0))
        out.append(x)
    return out


def _axpy(row, prow, a):
    # row -= a * prow, dropping zeros
    for j, v in prow.items():
        nv = row.get(j, Fraction(0)) - a * v
        if nv:
            row[j] = nv
        else:
            row.pop(j, None)
