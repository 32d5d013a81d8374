"""Biquadratic final polynomials: log-magnitude relaxations of the
three-term Grassmann-Pluecker relations and exact infeasibility proofs.

For every (tau, a<b<c<d) exactly one of the three signed terms has the
sign opposite to the other two, so its magnitude is the sum of the other
two and strictly exceeds each. In log variables y (one per basis) that
gives two strict inequalities y_P + y_Q > y_R + y_S. If the strict system
has no solution, no realization exists; the proof is a non-negative
combination of the rows that sums to the zero form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .chirotope import Chirotope, is_gp_consistent
from .errors import UsageError
from .exactlp import kernel_basis, nonneg_solution
from .tables import gp_table

PAIRS = ((0, 1), (2, 3), (4, 5))   # bracket columns of t1, t2, t3


@dataclass(frozen=True)
class Inequality:
    plus: tuple[int, int]      # basis indices on the larger side
    minus: tuple[int, int]
    tau: tuple[int, ...]
    quad: tuple[int, int, int, int]
    dominant: int              # 1..3
    versus: int                # 1..3

    def form(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v in self.plus:
            out[v] = out.get(v, 0) + 1
        for v in self.minus:
            out[v] = out.get(v, 0) - 1
        return {k: v for k, v in out.items() if v}


@dataclass
class BiquadraticSystem:
    nvars: int
    rows: list[Inequality] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def matrix(self) -> np.ndarray:
        A = np.zeros((len(self.rows), self.nvars))
        for i, q in enumerate(self.rows):
            for v, c in q.form().items():
                A[i, v] = c
        return A

    def satisfied_by(self, y) -> bool:
        return all(sum(c * y[v] for v, c in q.form().items()) > 0 for q in self.rows)


@dataclass(frozen=True)
class Feasible:
    witness: tuple[int, ...] | None = None   # integer y with A y > 0, when one was built

    feasible = True


@dataclass(frozen=True)
class Infeasible:
    certificate: dict[int, Fraction]

    feasible = False


def biquadratic_inequalities(chi: Chirotope) -> BiquadraticSystem:
    if not is_gp_consistent(chi):
        raise UsageError("chirotope violates a three-term Grassmann-Pluecker relation")
    idx, par, labels = gp_table(chi.n, chi.r)
    sys = BiquadraticSystem(len(chi.signs))
    if len(idx) == 0:
        return sys
    v = chi.signs[idx] * par
    terms = np.stack([v[:, 0] * v[:, 1], -v[:, 2] * v[:, 3], v[:, 4] * v[:, 5]], axis=1)
    for row in range(len(idx)):
        t = terms[row]
        lone = next(i for i in range(3) if t[i] != t[(i + 1) % 3] and t[i] != t[(i + 2) % 3])
        P = PAIRS[lone]
        tau, quad = labels[row]
        for other in range(3):
            if other == lone:
                continue
            Q = PAIRS[other]
            sys.rows.append(Inequality((int(idx[row, P[0]]), int(idx[row, P[1]])),
                                       (int(idx[row, Q[0]]), int(idx[row, Q[1]])),
                                       tau, quad, lone + 1, other + 1))
    return sys


def _normalize(cert: dict[int, Fraction]) -> dict[int, Fraction]:
    den = 1
    for q in cert.values():
        den = den * q.denominator // gcd(den, q.denominator)
    ints = {i: int(q * den) for i, q in cert.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {i: Fraction(v // g) for i, v in ints.items()}


def _gordan_exact(sys: BiquadraticSystem, support=None) -> dict[int, Fraction] | None:
    """u >= 0 with sum u = 1 and sum u_i form_i = 0, over the given rows."""
    cols = list(range(len(sys.rows))) if support is None else sorted(support)
    eq: dict[int, dict[int, int]] = {}
    for c, i in enumerate(cols):
        for v, a in sys.rows[i].form().items():
            eq.setdefault(v, {})[c] = a
    rows = [eq[v] for v in sorted(eq)] + [{c: 1 for c in range(len(cols))}]
    rhs = [0] * len(eq) + [1]
    x = nonneg_solution(rows, rhs)
    if x is None:
        return None
    cert = {cols[c]: q for c, q in enumerate(x) if q > 0}
    return _normalize(cert)


def _gordan_support(sys: BiquadraticSystem, support) -> dict[int, Fraction] | None:
    """Exact multipliers on a float-suggested support.

    A one-dimensional kernel with a strictly one-signed vector is the answer
    directly; anything else goes to the exact simplex on the same support.
    """
    cols = sorted(support)
    basis = kernel_basis([sys.rows[i].form() for i in cols], len(cols))
    if len(basis) == 1:
        x = basis[0]
        if all(v < 0 for v in x):
            x = [-v for v in x]
        if all(v > 0 for v in x):
            return _normalize(dict(zip(cols, x)))
    if not basis:
        return None
    return _gordan_exact(sys, cols)


def _float_filter(sys: BiquadraticSystem):
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    m, nv = len(sys.rows), sys.nvars
    r_, c_, d_ = [], [], []
    for i, q in enumerate(sys.rows):
        for v, a in q.form().items():
            r_.append(i)
            c_.append(v)
            d_.append(-a)
        r_.append(i)
        c_.append(nv)
        d_.append(1.0)
    A = coo_matrix((d_, (r_, c_)), shape=(m, nv + 1)).tocsr()
    cost = np.zeros(nv + 1)
    cost[nv] = -1.0
    bounds = [(None, None)] * nv + [(None, 1.0)]
    res = linprog(cost, A_ub=A, b_ub=np.zeros(m), bounds=bounds, method="highs")
    if res.status != 0:
        return None, None
    eps = -res.fun
    duals = -np.asarray(res.ineqlin.marginals) if getattr(res, "ineqlin", None) is not None else None
    return eps, (res.x[:nv], duals)


def lp_feasible_strict(sys: BiquadraticSystem, *, exact_only: bool | None = None):
    """Decide exactly whether A y > 0 has a solution.

    Feasible answers carry an integer witness or rest on the exact absence
    of a Gordan multiplier vector; Infeasible answers carry one.
    """
    if not sys.rows:
        return Feasible(tuple([0] * sys.nvars))
    if exact_only is None:
        exact_only = len(sys.rows) <= 40
    if not exact_only:
        eps, data = _float_filter(sys)
        if eps is not None and eps > 0.5:
            y = np.rint(data[0] * 4096).astype(np.int64)
            yi = tuple(int(v) for v in y)
            if sys.satisfied_by(yi):
                return Feasible(yi)
        elif eps is not None and data[1] is not None:
            u = data[1]
            support = [i for i in range(len(sys.rows)) if u[i] > 1e-9]
            if support:
                cert = _gordan_support(sys, support)
                if cert is not None:
                    return Infeasible(cert)
    cert = _gordan_exact(sys)
    if cert is not None:
        return Infeasible(cert)
    return Feasible(_exact_witness(sys) if exact_only else None)


def _exact_witness(sys: BiquadraticSystem) -> tuple[int, ...] | None:
    """Integer y with A y >= 1, via y = y+ - y- and slacks, solved exactly."""
    nv, m = sys.nvars, len(sys.rows)
    rows = []
    for i, q in enumerate(sys.rows):
        row = {}
        for v, a in q.form().items():
            row[v] = a
            row[nv + v] = -a
        row[2 * nv + i] = -1
        rows.append(row)
    x = nonneg_solution(rows, [1] * m)
    if x is None:
        return None
    x += [Fraction(0)] * (2 * nv + m - len(x))
    y = [x[v] - x[nv + v] for v in range(nv)]
    den = 1
    for q in y:
        den = den * q.denominator // gcd(den, q.denominator)
    return tuple(int(q * den) for q in y)


def verify_certificate(sys: BiquadraticSystem, cert: dict[int, Fraction]) -> bool:
    """Independent check: positive multipliers whose weighted row sum is the zero form."""
    if not cert:
        return False
    total: dict[int, Fraction] = {}
    for i, u in cert.items():
        if not isinstance(i, int) or not 0 <= i < len(sys.rows):
            raise UsageError(f"certificate refers to unknown inequality {i}")
        u = Fraction(u)
        if u <= 0:
            return False
        for v, a in sys.rows[i].form().items():
            total[v] = total.get(v, Fraction(0)) + a * u
    return all(v == 0 for v in total.values())


def bfp_nonrealizable(chi: Chirotope):
    """(True, certificate) if a biquadratic final polynomial exists, else (False, None)."""
    sys = biquadratic_inequalities(chi)
    res = lp_feasible_strict(sys)
    if res.feasible:
        return False, None
    if not verify_certificate(sys, res.certificate):
        raise AssertionError("internal error: certificate does not cancel")
    return True, res.certificate


def certificate_json(sys: BiquadraticSystem, cert: dict[int, Fraction]) -> list[dict]:
    out = []
    for i in sorted(cert):
        q = sys.rows[i]
        out.append({
            "tau": [e + 1 for e in q.tau],
            "quad": [e + 1 for e in q.quad],
            "dominant": q.dominant,
            "versus": q.versus,
            "multiplier-numerator": cert[i].numerator,
            "multiplier-denominator": cert[i].denominator,
        })
    return out


def certificate_from_json(sys: BiquadraticSystem, items) -> dict[int, Fraction]:
    """Map JSON certificate records back to row ids of ``sys``."""
    where = {(q.tau, q.quad, q.dominant, q.versus): i for i, q in enumerate(sys.rows)}
    cert = {}
    for it in items:
        k = (tuple(e - 1 for e in it["tau"]), tuple(e - 1 for e in it["quad"]),
             int(it["dominant"]), int(it["versus"]))
        if k not in where:
            raise UsageError(f"certificate row {it} does not occur in this system")
        cert[where[k]] = Fraction(int(it["multiplier-numerator"]), int(it["multiplier-denominator"]))
    return cert


def toy_system(pairs, nvars: int) -> BiquadraticSystem:
    """System with rows y_i > y_j given as (i, j) pairs; a second fixed variable pads each side."""
    pad = nvars
    sys = BiquadraticSystem(nvars + 1)
    for i, j in pairs:
        sys.rows.append(Inequality((i, pad), (j, pad), (), (i, j, 0, 0), 1, 2))
    return sys
